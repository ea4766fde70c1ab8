#include "pndg/solver.hpp"

#include "pndg/errors.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace pndg {

namespace {

// Inverts the dense diagonal blocks of one element each. The element blocks
// carry the stiff Q/eps scaling, so this removes most of the eps dependence
// from the Krylov iteration.
class ElementBlockPreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  ElementBlockPreconditioner() = default;

  void set_block_size(int block_size) { block_size_ = block_size; }

  template <typename MatType>
  ElementBlockPreconditioner& analyzePattern(const MatType&) { return *this; }

  template <typename MatType>
  ElementBlockPreconditioner& factorize(const MatType& mat) {
    const Eigen::Index n = mat.rows();
    const int bs = block_size_ > 0 ? block_size_ : 1;
    const Eigen::Index blocks = n / bs;
    lu_.clear();
    lu_.reserve(static_cast<std::size_t>(blocks));
    for (Eigen::Index b = 0; b < blocks; ++b) {
      Eigen::MatrixXd dense = Eigen::MatrixXd(mat.block(b * bs, b * bs, bs, bs));
      lu_.emplace_back(dense);
    }
    info_ = Eigen::Success;
    return *this;
  }

  template <typename MatType>
  ElementBlockPreconditioner& compute(const MatType& mat) {
    return factorize(mat);
  }

  template <typename Rhs>
  Eigen::VectorXd solve(const Rhs& b) const {
    Eigen::VectorXd x(b.size());
    const int bs = block_size_ > 0 ? block_size_ : 1;
    for (std::size_t k = 0; k < lu_.size(); ++k) {
      const auto off = static_cast<Eigen::Index>(k) * bs;
      x.segment(off, bs) = lu_[k].solve(b.segment(off, bs));
    }
    return x;
  }

  Eigen::ComputationInfo info() const { return info_; }

 private:
  int block_size_ = 1;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
  Eigen::ComputationInfo info_ = Eigen::Success;
};

double relative_residual(const GlobalSystem& system, const Eigen::VectorXd& u) {
  const double bnorm = system.rhs.norm();
  const double r = (system.rhs - system.matrix * u).norm();
  return bnorm > 0.0 ? r / bnorm : r;
}

double infinity_norm(const Eigen::SparseMatrix<double, Eigen::RowMajor>& m) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double s = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

// Normwise backward error |b - Au| / (|A| |u| + |b|) in the max norm.
double backward_error(const GlobalSystem& system, const Eigen::VectorXd& u) {
  const double r = (system.rhs - system.matrix * u).lpNorm<Eigen::Infinity>();
  const double scale = infinity_norm(system.matrix) * u.lpNorm<Eigen::Infinity>() + system.rhs.lpNorm<Eigen::Infinity>();
  return scale > 0.0 ? r / scale : r;
}

// Below this backward error the residual is at the rounding level of the
// matrix-vector product and cannot be reduced further.
constexpr double kRoundingBackwardError = 64.0 * std::numeric_limits<double>::epsilon();

}  // namespace

std::string to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::direct: return "direct";
    case SolveMethod::iterative: return "iterative";
    case SolveMethod::automatic: return "auto";
  }
  return "?";
}

SolveMethod parse_solve_method(const std::string& name) {
  if (name == "direct") return SolveMethod::direct;
  if (name == "iterative") return SolveMethod::iterative;
  if (name == "auto") return SolveMethod::automatic;
  throw ConfigError("solver must be direct, iterative or auto (got '" + name + "')");
}

SolveMethod resolve_method(SolveMethod method, Eigen::Index unknowns) {
  if (method != SolveMethod::automatic) return method;
  return unknowns <= kDirectSolveLimit ? SolveMethod::direct : SolveMethod::iterative;
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0 && tolerance < 1.0)) throw ConfigError("solver tolerance must lie in (0, 1)");
  if (max_iterations < 1) throw ConfigError("solver max_iterations must be at least 1");
  if (restart < 1) throw ConfigError("solver restart length must be at least 1");
}

MomentField solve(const GlobalSystem& system, const SolverConfig& config, SolveStats* stats) {
  config.validate();
  const Eigen::Index n = system.layout.size();
  if (system.matrix.rows() != n || system.matrix.cols() != n || system.rhs.size() != n) {
    throw InputError("system dimensions do not match its layout");
  }
  SolveStats local;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  if (system.rhs.squaredNorm() == 0.0) {
    if (stats) *stats = local;
    return MomentField(system.layout, u);
  }

  const SolveMethod method = resolve_method(config.method, n);
  local.method = method;
  if (method == SolveMethod::direct) {
    Eigen::SparseMatrix<double> a = system.matrix;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) {
      throw InternalError("sparse LU factorization failed: " + lu.lastErrorMessage());
    }
    u = lu.solve(system.rhs);
    local.iterations = 1;
    // Iterative refinement: the eps -> 0 regime gives Q entries spanning
    // many orders of magnitude.
    for (int step = 0; step < 4 && backward_error(system, u) > kRoundingBackwardError &&
                       relative_residual(system, u) > 0.1 * config.tolerance;
         ++step) {
      const Eigen::VectorXd r = system.rhs - system.matrix * u;
      u += lu.solve(r);
      ++local.iterations;
    }
  } else {
    Eigen::GMRES<Eigen::SparseMatrix<double, Eigen::RowMajor>, ElementBlockPreconditioner> gmres;
    gmres.preconditioner().set_block_size(system.layout.block_size());
    gmres.set_restart(config.restart);
    gmres.compute(system.matrix);
    // The Krylov tolerance applies to the preconditioned residual, relative to
    // the residual of the starting guess. Restart from the current iterate and
    // ask for the reduction still missing in the true residual.
    double krylov_tol = config.tolerance;
    int used = 0;
    for (int round = 0; round < 8 && used < config.max_iterations; ++round) {
      gmres.setTolerance(krylov_tol);
      gmres.setMaxIterations(config.max_iterations - used);
      u = gmres.solveWithGuess(system.rhs, u);
      used += static_cast<int>(gmres.iterations());
      const double res = relative_residual(system, u);
      if (res <= config.tolerance || backward_error(system, u) <= kRoundingBackwardError) break;
      krylov_tol = std::clamp(0.5 * config.tolerance / res, 1e-14, 0.5);
    }
    local.iterations = used;
  }
  local.relative_residual = relative_residual(system, u);
  local.backward_error = backward_error(system, u);
  if (stats) *stats = local;
  const bool converged = method == SolveMethod::direct
                             ? local.backward_error <= kRoundingBackwardError
                             : local.relative_residual <= config.tolerance ||
                                   local.backward_error <= kRoundingBackwardError;
  if (!converged) {
    std::ostringstream msg;
    msg << to_string(method)
        << " solve did not reach tolerance: relative residual " << local.relative_residual
        << " (backward error " << local.backward_error << ") after "
        << local.iterations << " iterations";
    throw SolverError(msg.str(), local.relative_residual);
  }
  return MomentField(system.layout, u);
}

}  // namespace pndg
