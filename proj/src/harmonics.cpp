#include "pndg/harmonics.hpp"

#include "pndg/errors.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace pndg {

namespace {

constexpr double kPi = std::numbers::pi;

// Normalized associated Legendre values alpha_l^m P_l^m(mu) for 0 <= m <= l <= N,
// without the Condon-Shortley phase. Stored at [l*(l+1)/2 + m].
std::vector<double> normalized_legendre(int order, double mu) {
  std::vector<double> p((order + 1) * (order + 2) / 2, 0.0);
  auto at = [](int l, int m) { return l * (l + 1) / 2 + m; };
  const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));

  // Diagonal: bar P_m^m = sqrt((2m+1)/(4 pi (2m)!)) (2m-1)!! s^m, built by ratio.
  p[at(0, 0)] = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 1; m <= order; ++m) {
    p[at(m, m)] = p[at(m - 1, m - 1)] * s * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
  }
  // Upward recurrence in l at fixed m, in normalized form.
  for (int m = 0; m <= order; ++m) {
    if (m + 1 <= order) p[at(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * mu * p[at(m, m)];
    for (int l = m + 2; l <= order; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l * l) - m * m));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      p[at(l, m)] = a * (mu * p[at(l - 1, m)] - b * p[at(l - 2, m)]);
    }
  }
  return p;
}

}  // namespace

MomentBasis::MomentBasis(int order) : order_(order) {
  if (order < 0) throw InputError("moment order N must be nonnegative");
}

std::pair<int, int> MomentBasis::degree_order(int flat) {
  if (flat < 0) throw InputError("negative moment index");
  const int degree = static_cast<int>(std::sqrt(static_cast<double>(flat)));
  // Guard against rounding of sqrt for perfect squares.
  int l = degree;
  while (l * l > flat) --l;
  while ((l + 1) * (l + 1) <= flat) ++l;
  return {l, flat - l * l - l};
}

Eigen::VectorXd eval_basis(const Vec3& omega, const MomentBasis& basis) {
  const double norm = std::sqrt(omega[0] * omega[0] + omega[1] * omega[1] + omega[2] * omega[2]);
  if (!(std::abs(norm - 1.0) <= 1e-12)) {
    std::ostringstream msg;
    msg << "direction must be a unit vector (|omega| = " << norm << ")";
    throw InputError(msg.str());
  }
  const int order = basis.order();
  const double mu = omega[2];
  const double phi = std::atan2(omega[1], omega[0]);
  const auto p = normalized_legendre(order, mu);

  Eigen::VectorXd m(basis.size());
  for (int l = 0; l <= order; ++l) {
    for (int kappa = -l; kappa <= l; ++kappa) {
      const int am = std::abs(kappa);
      double t = 1.0;
      if (kappa > 0) t = std::numbers::sqrt2 * std::cos(kappa * phi);
      if (kappa < 0) t = std::numbers::sqrt2 * std::sin(am * phi);
      m[MomentBasis::flat_index(l, kappa)] = p[l * (l + 1) / 2 + am] * t;
    }
  }
  return m;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int points) {
  if (points < 1) throw InputError("Gauss-Legendre rule needs at least one point");
  const auto zeros = boost::math::legendre_p_zeros<double>(points);
  std::vector<double> x;
  std::vector<double> w;
  x.reserve(points);
  w.reserve(points);
  auto weight = [points](double z) {
    const double dp = boost::math::legendre_p_prime(points, z);
    return 2.0 / ((1.0 - z * z) * dp * dp);
  };
  // zeros holds the nonnegative roots in ascending order.
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    x.push_back(-*it);
    w.push_back(weight(*it));
  }
  for (double z : zeros) {
    x.push_back(z);
    w.push_back(weight(z));
  }
  return {x, w};
}

SphereQuadrature sphere_quadrature(int order) {
  if (order < 0) throw InputError("quadrature order N must be nonnegative");
  const auto [mu, wmu] = gauss_legendre(order + 2);
  const int nphi = 2 * order + 3;
  SphereQuadrature quad;
  quad.nodes.reserve(mu.size() * nphi);
  quad.weights.reserve(mu.size() * nphi);
  const double dphi = 2.0 * kPi / nphi;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double s = std::sqrt(1.0 - mu[i] * mu[i]);
    for (int j = 0; j < nphi; ++j) {
      const double phi = (j + 0.5) * dphi;
      quad.nodes.push_back({s * std::cos(phi), s * std::sin(phi), mu[i]});
      quad.weights.push_back(wmu[i] * dphi);
    }
  }
  return quad;
}

Eigen::MatrixXd abs_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InputError("abs_matrix needs a square matrix");
  if (m.size() == 0) return m;
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) throw InputError("abs_matrix needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) throw InternalError("symmetric eigendecomposition failed");
  Eigen::MatrixXd r = eig.eigenvectors() * eig.eigenvalues().cwiseAbs().asDiagonal() *
                      eig.eigenvectors().transpose();
  return 0.5 * (r + r.transpose());
}

MomentMatrices moment_matrices(const MomentBasis& basis) {
  const int n = basis.size();
  const auto quad = sphere_quadrature(basis.order());
  MomentMatrices mm;
  mm.order = basis.order();
  for (auto& a : mm.a) a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Eigen::VectorXd m = eval_basis(quad.nodes[q], basis);
    const Eigen::MatrixXd mmT = m * m.transpose();
    for (int i = 0; i < 3; ++i) mm.a[i] += (quad.weights[q] * quad.nodes[q][i]) * mmT;
  }
  for (int i = 0; i < 3; ++i) {
    auto& a = mm.a[i];
    a = 0.5 * (a + a.transpose()).eval();
    a = a.unaryExpr([](double v) { return std::abs(v) < kMatrixZeroSnap ? 0.0 : v; });
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    if (eig.info() != Eigen::Success) throw InternalError("moment matrix eigendecomposition failed");
    mm.eigenvectors[i] = eig.eigenvectors();
    mm.eigenvalues[i] = eig.eigenvalues();
    Eigen::MatrixXd absa = eig.eigenvectors() * eig.eigenvalues().cwiseAbs().asDiagonal() *
                           eig.eigenvectors().transpose();
    absa = 0.5 * (absa + absa.transpose()).eval();
    mm.abs_a[i] = absa.unaryExpr([](double v) { return std::abs(v) < kMatrixZeroSnap ? 0.0 : v; });
  }
  return mm;
}

void check_cross_sections(double sigma_t, double sigma_a, double eps) {
  std::ostringstream msg;
  if (!(eps > 0.0 && eps <= 1.0)) {
    msg << "scaling parameter eps must lie in (0, 1], got " << eps;
  } else if (!(sigma_a > 0.0)) {
    msg << "assumption violated: sigma_a > 0 (absorption must be bounded below by a positive "
           "constant), got sigma_a = "
        << sigma_a;
  } else if (!(sigma_t > sigma_a)) {
    msg << "assumption violated: sigma_t > sigma_a (got sigma_t = " << sigma_t
        << ", sigma_a = " << sigma_a << ")";
  } else if (!(sigma_t - eps * eps * sigma_a > 0.0)) {
    msg << "assumption violated: sigma_t - eps^2 sigma_a > 0";
  } else {
    return;
  }
  throw ConfigError(msg.str());
}

ScatteringDiagonal scattering_q(double sigma_t, double sigma_a, double eps, int moments) {
  check_cross_sections(sigma_t, sigma_a, eps);
  if (moments < 1) throw InputError("scattering matrix needs at least one moment");
  ScatteringDiagonal d;
  d.q = Eigen::VectorXd::Constant(moments, sigma_t / eps);
  d.q[0] = eps * sigma_a;
  d.sqrt_q = d.q.cwiseSqrt();
  return d;
}

std::vector<InvariantCheck> verify_moment_matrices(int order, int samples, std::uint64_t seed) {
  if (order < 0) throw InputError("moment order N must be nonnegative");
  if (samples < 1) throw InputError("need at least one sample direction");
  const MomentBasis basis(order);
  const int n = basis.size();
  const auto mm = moment_matrices(basis);
  std::vector<InvariantCheck> out;
  auto add = [&](std::string name, double value, double limit) {
    out.push_back({std::move(name), value, limit, value <= limit});
  };

  const auto quad = sphere_quadrature(order);
  double wsum = 0.0;
  for (double w : quad.weights) wsum += w;
  add("quadrature weight sum", std::abs(wsum - 4.0 * kPi) / (4.0 * kPi), 1e-13);
  // Products m_l m_l' with l, l' <= N + 1 reach degree 2N + 2.
  {
    const MomentBasis wide(order + 1);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(wide.size(), wide.size());
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Eigen::VectorXd m = eval_basis(quad.nodes[q], wide);
      gram += quad.weights[q] * m * m.transpose();
    }
    add("quadrature exactness (degree 2N+2)", (gram - Eigen::MatrixXd::Identity(wide.size(), wide.size())).cwiseAbs().maxCoeff(),
        1e-12);
  }

  double asym = 0.0, outside = 0.0, spectral = 0.0, recon = 0.0, abs_min = 0.0, abs_sq = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto& a = mm.a[i];
    asym = std::max(asym, (a - a.transpose()).cwiseAbs().maxCoeff());
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const int lr = MomentBasis::degree_order(r).first;
        const int lc = MomentBasis::degree_order(c).first;
        if (std::abs(lr - lc) != 1 && a(r, c) != 0.0) outside += 1.0;
      }
    }
    spectral = std::max(spectral, mm.eigenvalues[i].cwiseAbs().maxCoeff());
    recon = std::max(recon, (mm.eigenvectors[i] * mm.eigenvalues[i].asDiagonal() * mm.eigenvectors[i].transpose() - a)
                                .cwiseAbs()
                                .maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mm.abs_a[i], Eigen::EigenvaluesOnly);
    abs_min = std::max(abs_min, -eig.eigenvalues().minCoeff());
    abs_sq = std::max(abs_sq, (mm.abs_a[i] * mm.abs_a[i] - a * a).cwiseAbs().maxCoeff());
  }
  add("symmetry", asym, 1e-12);
  add("degree-block sparsity (entries outside l' = l +- 1)", outside, 0.0);

  // omega_i m_l = sum_l' A(i)_{l l'} m_l' holds for every row of degree <= N
  // once the basis is extended by one degree; A(i) of order N is the leading
  // block of the extended matrix.
  {
    const MomentBasis wide(order + 1);
    const auto ext = moment_matrices(wide);
    double lead = 0.0;
    for (int i = 0; i < 3; ++i) lead = std::max(lead, (ext.a[i].topLeftCorner(n, n) - mm.a[i]).cwiseAbs().maxCoeff());
    add("leading block of order N+1", lead, 1e-13);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    double residual = 0.0;
    for (int s = 0; s < samples; ++s) {
      Vec3 w{gauss(rng), gauss(rng), gauss(rng)};
      const double len = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
      for (double& c : w) c /= len;
      const Eigen::VectorXd m = eval_basis(w, wide);
      for (int i = 0; i < 3; ++i) {
        const Eigen::VectorXd r = w[i] * m.head(n) - ext.a[i].topRows(n) * m;
        residual = std::max(residual, r.cwiseAbs().maxCoeff());
      }
    }
    add("recursion residual", residual, 1e-11);
  }
  add("spectral norm", spectral, 1.0 + 1e-10);
  add("eigendecomposition", recon, 1e-12);
  add("|A| positive semidefinite", abs_min, 1e-12);
  add("|A|^2 = A^2", abs_sq, 1e-12);
  return out;
}

}  // namespace pndg
