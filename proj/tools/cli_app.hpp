#pragma once

// Command-line front end: subcommand dispatch, CSV and manifest emission.

#include "pndg/study.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pndg::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kSolverFailure = 2,
  kVerifyFailure = 3,
};

/// Header of the convergence, solve and eps-sweep tables.
inline constexpr const char* kCsvHeader = "d,N,k,eps,h,err_l2,err_q,err_triple,eoc_l2,wall_ms";

/// Errors and rates: %.17g.
std::string format_number(double v);
/// Parameters (eps, h): shortest text that round-trips.
std::string format_parameter(double v);

/// CSV of an error report. Norms not listed in the configuration and wall
/// times (unless `timings`) are left empty so repeated runs are byte-identical.
std::string convergence_csv(const ErrorReport& report, bool timings);
std::string eps_sweep_csv(const ErrorReport& report, bool timings);
std::string n_sweep_csv(const StudyConfig& config, const std::vector<NSweepRow>& rows);

/// args excludes the program name. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pndg::cli
