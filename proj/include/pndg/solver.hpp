#pragma once

#include "pndg/assembly.hpp"

#include <string>

namespace pndg {

/// `automatic` factors small systems and iterates on large ones.
enum class SolveMethod { direct, iterative, automatic };

std::string to_string(SolveMethod method);
/// "direct", "iterative" or "auto"; throws ConfigError otherwise.
SolveMethod parse_solve_method(const std::string& name);

/// Largest system `automatic` hands to the sparse LU. Fill-in on 2D meshes
/// makes the factorization far slower than GMRES beyond this size.
inline constexpr Eigen::Index kDirectSolveLimit = 10000;

SolveMethod resolve_method(SolveMethod method, Eigen::Index unknowns);

struct SolverConfig {
  SolveMethod method = SolveMethod::automatic;
  /// Relative residual target of the iterative path.
  double tolerance = 1e-10;
  int max_iterations = 2000;
  /// Krylov restart length of the iterative path.
  int restart = 60;

  void validate() const;
  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct SolveStats {
  SolveMethod method = SolveMethod::direct;
  int iterations = 0;
  /// |b - Au| / |b|
  double relative_residual = 0.0;
  /// |b - Au| / (|A| |u| + |b|), max norms.
  double backward_error = 0.0;
};

/// Sparse LU (direct) or restarted GMRES preconditioned by the inverse of the
/// element diagonal blocks (iterative).
///
/// The direct path must end at rounding-level backward error. The iterative
/// path must reach `tolerance` in relative residual, or rounding-level
/// backward error when the load is so small (eps -> 0) that the relative
/// residual bottoms out above the tolerance. Throws SolverError otherwise and
/// InternalError when the factorization finds a singular matrix.
MomentField solve(const GlobalSystem& system, const SolverConfig& config = {}, SolveStats* stats = nullptr);

}  // namespace pndg
