#pragma once

// Convergence harness: h-refinement tables, eps sweeps and N sweeps against
// the reference solutions.

#include "pndg/assembly.hpp"
#include "pndg/config.hpp"
#include "pndg/reference.hpp"

#include <optional>
#include <vector>

namespace pndg {

struct FieldErrors {
  double l2 = 0.0;
  double q = 0.0;
  double triple = 0.0;
};

/// Errors of a DG field against a smooth exact field, integrated with a Gauss
/// rule of `points` per axis. The exact field is continuous, so the jump part
/// of the triple norm only sees the DG field.
FieldErrors measure_errors(const MomentField& field, const SmoothField& exact, const MaterialField& materials,
                           const MomentMatrices& matrices, int points);

/// Materials, forcing and exact solution of one study cell.
struct Problem {
  MaterialField materials;
  VectorFunction forcing;
  SmoothField exact;
  /// Modal form of the exact solution when the oracle has one.
  std::optional<ReferenceSolution> modal;
};

Problem make_problem(const StudyConfig& config, double eps, const MomentMatrices& matrices);

struct ErrorRow {
  int dim = 1;
  int moment_order = 0;
  int degree = 0;
  double eps = 1.0;
  int cells = 1;
  double h = 1.0;
  FieldErrors errors;
  /// Rate against the previous (coarser) mesh at the same eps.
  std::optional<double> eoc_l2;
  double wall_ms = 0.0;
  int iterations = 0;
  double residual = 0.0;
  /// max_{i>=2} ||(u_h)_i|| / eps and ||(u_h)_1|| (eps sweeps only).
  std::optional<double> higher_moments_over_eps;
  std::optional<double> first_moment;
  /// Same ratio for the modal oracle, when available.
  std::optional<double> oracle_higher_moments_over_eps;
};

struct ErrorReport {
  StudyConfig config;
  std::vector<ErrorRow> rows;
};

struct StudyOptions {
  /// Worker threads for independent (h, eps) cells.
  int threads = 1;
};

/// rate_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}); nullopt where an error
/// is not positive.
std::vector<std::optional<double>> eoc(const std::vector<double>& h, const std::vector<double>& errors);

/// Assemble, solve and measure for every (h, eps) of the configuration.
ErrorReport run_convergence(const StudyConfig& config, const StudyOptions& options = {});

/// Every eps of the configuration on its finest mesh, with moment scaling.
ErrorReport run_eps_sweep(const StudyConfig& config, const StudyOptions& options = {});

struct NSweepRow {
  double eps = 1.0;
  int moment_order = 0;
  /// || <m u>_kinetic - u_PN ||_{L2(X)} over the first (N+1)^2 moments.
  double moment_error = 0.0;
  /// || u - m^T u_PN ||_{L2(X x S)}.
  double angular_error = 0.0;
};

/// P_N closure error against the kinetic solution for each listed N
/// (constant materials, isotropic forcing).
std::vector<NSweepRow> run_n_sweep(const StudyConfig& config, int quadrature_order = 80);

}  // namespace pndg
