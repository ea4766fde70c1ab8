#include "cli_app.hpp"

#include "pndg/errors.hpp"
#include "pndg/harmonics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace pndg::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_parameter(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

bool wants(const StudyConfig& c, const std::string& norm) {
  return std::find(c.norms.begin(), c.norms.end(), norm) != c.norms.end();
}

void write_base_columns(std::ostream& os, const StudyConfig& config, const ErrorRow& r, bool timings) {
  os << r.dim << ',' << r.moment_order << ',' << r.degree << ',' << format_parameter(r.eps) << ','
     << format_parameter(r.h) << ',' << (wants(config, "l2") ? format_number(r.errors.l2) : "") << ','
     << (wants(config, "q") ? format_number(r.errors.q) : "") << ','
     << (wants(config, "triple") ? format_number(r.errors.triple) : "") << ','
     << (wants(config, "l2") ? optional_number(r.eoc_l2) : "") << ',' << (timings ? format_number(r.wall_ms) : "");
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

ordered_json row_record(const ErrorRow& r) {
  ordered_json rec;
  rec["params"] = {{"d", r.dim}, {"N", r.moment_order}, {"k", r.degree}, {"eps", r.eps}, {"cells", r.cells}, {"h", r.h}};
  ordered_json errors = {{"l2", r.errors.l2}, {"q", r.errors.q}, {"triple", r.errors.triple}};
  errors["eoc_l2"] = r.eoc_l2 ? ordered_json(*r.eoc_l2) : ordered_json(nullptr);
  if (r.higher_moments_over_eps) errors["max_higher_moment_over_eps"] = *r.higher_moments_over_eps;
  if (r.oracle_higher_moments_over_eps) errors["oracle_max_higher_moment_over_eps"] = *r.oracle_higher_moments_over_eps;
  if (r.first_moment) errors["first_moment_l2"] = *r.first_moment;
  rec["errors"] = errors;
  rec["timings"] = {{"wall_ms", r.wall_ms}};
  rec["solver"] = {{"iterations", r.iterations}, {"relative_residual", r.residual}};
  rec["status"] = "ok";
  return rec;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

struct Outputs {
  fs::path dir;
  std::vector<std::string> files;

  void write(const std::string& name, const std::string& text) {
    write_file(dir / name, text);
    files.push_back(name);
  }
};

Outputs prepare_outputs(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  return Outputs{dir, {}};
}

void write_manifest(Outputs& outputs, const std::string& command, const StudyConfig& config, ordered_json runs,
                    const std::string& status, int threads) {
  outputs.files.push_back("manifest.json");
  ordered_json m;
  m["version"] = PNDG_VERSION;
  m["command"] = command;
  m["timestamp"] = timestamp();
  m["threads"] = threads;
  m["config"] = write_config(config);
  m["status"] = status;
  m["outputs"] = outputs.files;
  m["runs"] = std::move(runs);
  write_file(outputs.dir / "manifest.json", m.dump(2) + "\n");
}

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "results";
  int threads = 1;
  std::string oracle;
  bool timings = false;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_path, "Study configuration (INI)")->check(CLI::ExistingFile);
  sub->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  sub->add_option("--threads", o.threads, "Worker threads for independent runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--oracle", o.oracle, "Reference solution")
      ->check(CLI::IsMember({"pn-fourier", "kinetic", "manufactured"}));
  sub->add_flag("--timings", o.timings, "Fill the wall_ms column (breaks byte-identical output)");
}

StudyConfig resolve_config(const CommonOptions& o) {
  StudyConfig c = o.config_path.empty() ? StudyConfig{} : load_config(o.config_path);
  if (!o.oracle.empty()) c.oracle = parse_oracle(o.oracle);
  c.validate();
  return c;
}

int verify_matrices(int order, int samples, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto checks = verify_moment_matrices(order, samples);
  bool ok = true;
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_parameter(c.value) << " (limit "
        << format_parameter(c.limit) << ")\n";
    ok = ok && c.pass;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out << (ok ? "PASS" : "FAIL") << " moment matrices N = " << order << " (" << checks.size() << " checks, "
      << std::fixed << std::setprecision(1) << ms << " ms)\n";
  return ok ? kOk : kVerifyFailure;
}

}  // namespace

std::string convergence_csv(const ErrorReport& report, bool timings) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    write_base_columns(os, report.config, r, timings);
    os << '\n';
  }
  return os.str();
}

std::string eps_sweep_csv(const ErrorReport& report, bool timings) {
  std::ostringstream os;
  os << kCsvHeader << ",max_higher_moment_over_eps,oracle_max_higher_moment_over_eps,first_moment_l2\n";
  for (const auto& r : report.rows) {
    write_base_columns(os, report.config, r, timings);
    os << ',' << optional_number(r.higher_moments_over_eps) << ',' << optional_number(r.oracle_higher_moments_over_eps)
       << ',' << optional_number(r.first_moment) << '\n';
  }
  return os.str();
}

std::string n_sweep_csv(const StudyConfig& config, const std::vector<NSweepRow>& rows) {
  std::ostringstream os;
  os << "d,eps,N,moment_error,angular_error\n";
  for (const auto& r : rows) {
    os << config.dim << ',' << format_parameter(r.eps) << ',' << r.moment_order << ',' << format_number(r.moment_error)
       << ',' << format_number(r.angular_error) << '\n';
  }
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"P_N discontinuous Galerkin solver for the scaled radiative transfer equation", "pndg"};
  app.set_version_flag("--version", std::string(PNDG_VERSION));
  app.require_subcommand(1);

  CommonOptions common;
  auto* solve_cmd = app.add_subcommand("solve", "Solve on the finest mesh at the first eps and report errors");
  auto* conv_cmd = app.add_subcommand("convergence", "h-refinement table with convergence rates");
  auto* eps_cmd = app.add_subcommand("eps-sweep", "Every eps on the finest mesh, with moment scaling");
  auto* n_cmd = app.add_subcommand("n-sweep", "P_N closure error against the kinetic solution");
  for (auto* sub : {solve_cmd, conv_cmd, eps_cmd, n_cmd}) add_common(sub, common);

  int order = 5;
  int samples = 100;
  auto* verify_cmd = app.add_subcommand("verify-matrices", "Invariant suite of the moment matrices");
  verify_cmd->add_option("--N", order, "Moment order")->check(CLI::Range(0, 40))->capture_default_str();
  verify_cmd->add_option("--samples", samples, "Random directions for the recursion check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  StudyConfig config;
  std::string command;
  try {
    if (verify_cmd->parsed()) return verify_matrices(order, samples, out);
    config = resolve_config(common);
    command = app.get_subcommands().front()->get_name();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InputError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }

  std::optional<Outputs> outputs;
  try {
    outputs = prepare_outputs(common.out_dir);
    outputs->write("config.ini", write_config(config));
    StudyOptions options;
    options.threads = common.threads;
    ordered_json runs = ordered_json::array();
    if (command == "n-sweep") {
      const auto rows = run_n_sweep(config);
      outputs->write("n_sweep.csv", n_sweep_csv(config, rows));
      for (const auto& r : rows) {
        runs.push_back({{"params", {{"d", config.dim}, {"eps", r.eps}, {"N", r.moment_order}}},
                        {"errors", {{"moment", r.moment_error}, {"angular", r.angular_error}}},
                        {"timings", ordered_json::object()},
                        {"status", "ok"}});
      }
    } else {
      ErrorReport report;
      std::string csv;
      if (command == "solve") {
        StudyConfig single = config;
        single.cells = {config.cells.back()};
        single.eps = {config.eps.front()};
        report = run_convergence(single, options);
        report.config = config;
        csv = convergence_csv(report, common.timings);
      } else if (command == "convergence") {
        report = run_convergence(config, options);
        csv = convergence_csv(report, common.timings);
      } else {
        report = run_eps_sweep(config, options);
        csv = eps_sweep_csv(report, common.timings);
      }
      std::string name = command + ".csv";
      std::replace(name.begin(), name.end(), '-', '_');
      outputs->write(name, csv);
      for (const auto& r : report.rows) runs.push_back(row_record(r));
      out << csv;
    }
    write_manifest(*outputs, command, config, std::move(runs), "ok", common.threads);
    out << "wrote " << (outputs->dir / "manifest.json").string() << '\n';
    return kOk;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    if (outputs) {
      try {
        write_manifest(*outputs, command, config, ordered_json::array(), std::string("failed: ") + e.what(),
                       common.threads);
      } catch (const std::exception&) {
      }
    }
    return kSolverFailure;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InputError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace pndg::cli
