#include "pndg/config.hpp"

#include "pndg/errors.hpp"
#include "pndg/harmonics.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace pndg {

namespace pt = boost::property_tree;

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::pn_fourier: return "pn-fourier";
    case OracleKind::kinetic: return "kinetic";
    case OracleKind::manufactured: return "manufactured";
  }
  return "?";
}

std::string to_string(ForcingKind kind) {
  switch (kind) {
    case ForcingKind::isotropic: return "isotropic";
    case ForcingKind::all_moments: return "all-moments";
    case ForcingKind::zero: return "zero";
  }
  return "?";
}

OracleKind parse_oracle(const std::string& name) {
  if (name == "pn-fourier") return OracleKind::pn_fourier;
  if (name == "kinetic") return OracleKind::kinetic;
  if (name == "manufactured") return OracleKind::manufactured;
  throw ConfigError("unknown oracle '" + name + "' (expected pn-fourier, kinetic or manufactured)");
}

ForcingKind parse_forcing(const std::string& name) {
  if (name == "isotropic") return ForcingKind::isotropic;
  if (name == "all-moments") return ForcingKind::all_moments;
  if (name == "zero") return ForcingKind::zero;
  throw ConfigError("unknown forcing '" + name + "' (expected isotropic, all-moments or zero)");
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"problem", {"dimension", "oracle", "forcing", "wave_vector", "amplitude"}},
      {"discretization", {"moment_order", "degree", "cells"}},
      {"materials", {"sigma_t", "sigma_a", "variation"}},
      {"study", {"eps", "moment_orders", "error_points", "solver", "tolerance", "max_iterations", "restart", "norms"}},
  };
  return keys;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
  }
}

int to_int(const std::string& key, const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + s + "'");
  }
  return v;
}

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T, class F>
std::string join(const std::vector<T>& values, F&& fmt) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ", ";
    s += fmt(values[i]);
  }
  return s;
}

}  // namespace

void StudyConfig::validate() const {
  if (dim != 1 && dim != 2) throw ConfigError("problem.dimension must be 1 or 2");
  if (moment_order < 0 || moment_order > 15) throw ConfigError("discretization.moment_order must lie in [0, 15]");
  if (degree < 0) throw ConfigError("discretization.degree must be nonnegative");
  if (cells.empty()) throw ConfigError("discretization.cells must list at least one mesh");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] < 1) throw ConfigError("discretization.cells entries must be positive");
    if (i > 0 && cells[i] <= cells[i - 1]) throw ConfigError("discretization.cells must be strictly refining");
  }
  if (eps.empty()) throw ConfigError("study.eps must list at least one value");
  for (double e : eps) {
    if (!(e > 0.0 && e <= 1.0)) throw ConfigError("study.eps values must lie in (0, 1]");
    check_cross_sections(sigma_t * (1.0 - variation), sigma_a * (1.0 + variation), e);
    check_cross_sections(sigma_t, sigma_a, e);
  }
  if (variation < 0.0 || variation >= 1.0) throw ConfigError("materials.variation must lie in [0, 1)");
  if (variation > 0.0 && oracle != OracleKind::manufactured) {
    throw ConfigError("variable cross sections require the manufactured oracle");
  }
  if (oracle == OracleKind::kinetic && forcing == ForcingKind::all_moments) {
    throw ConfigError("the kinetic oracle supports isotropic forcing only");
  }
  if (dim == 1 && wave_vector[1] != 0) throw ConfigError("problem.wave_vector must have one entry in 1D");
  for (int n : moment_orders) {
    if (n < 0 || n > 15) throw ConfigError("study.moment_orders entries must lie in [0, 15]");
  }
  if (error_points < 0) throw ConfigError("study.error_points must be nonnegative");
  for (const auto& n : norms) {
    if (n != "l2" && n != "q" && n != "triple") throw ConfigError("unknown norm '" + n + "'");
  }
  solver.validate();
}

StudyConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  for (const auto& [section, body] : tree) {
    auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError("unknown section [" + section + "]");
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside of a section");
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }
  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(path)) return boost::trim_copy(*v);
    return std::nullopt;
  };

  StudyConfig c;
  if (auto v = get("problem.dimension")) c.dim = to_int("dimension", *v);
  if (auto v = get("problem.oracle")) c.oracle = parse_oracle(*v);
  if (auto v = get("problem.forcing")) c.forcing = parse_forcing(*v);
  if (auto v = get("problem.wave_vector")) {
    const auto parts = split_list(*v);
    if (parts.empty() || parts.size() > 2) throw ConfigError("problem.wave_vector needs one or two integers");
    c.wave_vector = {to_int("wave_vector", parts[0]), parts.size() > 1 ? to_int("wave_vector", parts[1]) : 0};
  }
  if (auto v = get("problem.amplitude")) c.amplitude = to_double("amplitude", *v);
  if (auto v = get("discretization.moment_order")) c.moment_order = to_int("moment_order", *v);
  if (auto v = get("discretization.degree")) c.degree = to_int("degree", *v);
  if (auto v = get("discretization.cells")) {
    c.cells.clear();
    for (const auto& p : split_list(*v)) c.cells.push_back(to_int("cells", p));
  }
  if (auto v = get("materials.sigma_t")) c.sigma_t = to_double("sigma_t", *v);
  if (auto v = get("materials.sigma_a")) c.sigma_a = to_double("sigma_a", *v);
  if (auto v = get("materials.variation")) c.variation = to_double("variation", *v);
  if (auto v = get("study.eps")) {
    c.eps.clear();
    for (const auto& p : split_list(*v)) c.eps.push_back(to_double("eps", p));
  }
  if (auto v = get("study.moment_orders")) {
    c.moment_orders.clear();
    for (const auto& p : split_list(*v)) c.moment_orders.push_back(to_int("moment_orders", p));
  }
  if (auto v = get("study.error_points")) c.error_points = to_int("error_points", *v);
  if (auto v = get("study.solver")) c.solver.method = parse_solve_method(*v);
  if (auto v = get("study.tolerance")) c.solver.tolerance = to_double("tolerance", *v);
  if (auto v = get("study.max_iterations")) c.solver.max_iterations = to_int("max_iterations", *v);
  if (auto v = get("study.restart")) c.solver.restart = to_int("restart", *v);
  if (auto v = get("study.norms")) c.norms = split_list(*v);
  c.validate();
  return c;
}

StudyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string write_config(const StudyConfig& c) {
  auto fmt_int = [](int v) { return std::to_string(v); };
  std::ostringstream os;
  os << "[problem]\n"
     << "dimension = " << c.dim << "\n"
     << "oracle = " << to_string(c.oracle) << "\n"
     << "forcing = " << to_string(c.forcing) << "\n"
     << "wave_vector = " << c.wave_vector[0];
  if (c.dim == 2) os << ", " << c.wave_vector[1];
  os << "\n"
     << "amplitude = " << format_double(c.amplitude) << "\n\n"
     << "[discretization]\n"
     << "moment_order = " << c.moment_order << "\n"
     << "degree = " << c.degree << "\n"
     << "cells = " << join(c.cells, fmt_int) << "\n\n"
     << "[materials]\n"
     << "sigma_t = " << format_double(c.sigma_t) << "\n"
     << "sigma_a = " << format_double(c.sigma_a) << "\n"
     << "variation = " << format_double(c.variation) << "\n\n"
     << "[study]\n"
     << "eps = " << join(c.eps, format_double) << "\n"
     << "moment_orders = " << join(c.moment_orders, fmt_int) << "\n"
     << "error_points = " << c.error_points << "\n"
     << "solver = " << to_string(c.solver.method) << "\n"
     << "tolerance = " << format_double(c.solver.tolerance) << "\n"
     << "max_iterations = " << c.solver.max_iterations << "\n"
     << "restart = " << c.solver.restart << "\n"
     << "norms = " << join(c.norms, [](const std::string& s) { return s; }) << "\n";
  return os.str();
}

}  // namespace pndg
