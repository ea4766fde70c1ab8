#pragma once

// Experiment configuration: an INI-style file with sections [problem],
// [discretization], [materials] and [study].

#include "pndg/solver.hpp"

#include <array>
#include <string>
#include <vector>

namespace pndg {

enum class OracleKind { pn_fourier, kinetic, manufactured };
enum class ForcingKind { isotropic, all_moments, zero };

std::string to_string(OracleKind kind);
std::string to_string(ForcingKind kind);
OracleKind parse_oracle(const std::string& name);
ForcingKind parse_forcing(const std::string& name);

struct StudyConfig {
  // [problem]
  int dim = 1;
  OracleKind oracle = OracleKind::pn_fourier;
  ForcingKind forcing = ForcingKind::isotropic;
  std::array<int, 2> wave_vector{1, 0};
  double amplitude = 1.0;
  // [discretization]
  int moment_order = 3;
  int degree = 1;
  /// Cells per axis for each refinement level (square grids in 2D).
  std::vector<int> cells{8, 16, 32, 64};
  // [materials]
  double sigma_t = 2.0;
  double sigma_a = 1.0;
  /// Relative amplitude of smooth spatial variation (manufactured oracle only).
  double variation = 0.0;
  // [study]
  std::vector<double> eps{1.0};
  std::vector<int> moment_orders{1, 3, 5, 7};
  /// Gauss points per axis for error integrals; 0 means degree + 3.
  int error_points = 0;
  SolverConfig solver;
  std::vector<std::string> norms{"l2", "q", "triple"};

  /// Throws ConfigError for invalid combinations or violated assumptions.
  void validate() const;
  friend bool operator==(const StudyConfig&, const StudyConfig&) = default;
};

StudyConfig parse_config(const std::string& text);
StudyConfig load_config(const std::string& path);
/// INI text that parses back to an equal configuration.
std::string write_config(const StudyConfig& config);

}  // namespace pndg
