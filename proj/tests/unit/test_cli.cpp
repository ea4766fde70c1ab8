#include "cli_app.hpp"

#include "pndg/config.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace pndg;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("pndg-cli-" + std::to_string(std::rand()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("verify-matrices") {
  const auto r = run({"verify-matrices", "--N", "5"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("PASS symmetry") != std::string::npos);
  CHECK(r.out.find("PASS moment matrices N = 5") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
  auto r = run({"convergence", "--bogus"});
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("Usage") != std::string::npos);
  r = run({});
  CHECK(r.code == cli::kConfigError);
  r = run({"frobnicate"});
  CHECK(r.code == cli::kConfigError);
  r = run({"convergence", "--oracle", "exact"});
  CHECK(r.code == cli::kConfigError);
  r = run({"convergence", "--threads", "0"});
  CHECK(r.code == cli::kConfigError);
  r = run({"--help"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("convergence") != std::string::npos);
}

TEST_CASE("violated assumptions exit with 1 and name the inequality") {
  TempDir tmp;
  const auto cfg = tmp.file("bad.cfg", "[materials]\nsigma_t = 1\nsigma_a = 1\n");
  const auto r = run({"convergence", "--config", cfg, "--out", (tmp.path / "o").string()});
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("sigma_t > sigma_a") != std::string::npos);
}

TEST_CASE("convergence output contract") {
  TempDir tmp;
  const auto cfg = tmp.file("s.cfg", "[discretization]\ncells = 4, 8\n[study]\neps = 1, 1e-3\nnorms = l2, triple\n");
  const auto out = tmp.path / "o";
  const auto r = run({"convergence", "--config", cfg, "--out", out.string(), "--threads", "2"});
  REQUIRE(r.code == cli::kOk);
  const std::string csv = slurp(out / "convergence.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "d,N,k,eps,h,err_l2,err_q,err_triple,eoc_l2,wall_ms");
  std::getline(lines, line);
  CHECK(line.rfind("1,3,1,1,0.25,", 0) == 0);
  CHECK(line.find(",,") != std::string::npos);  // q norm not requested
  int rows = 1;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 4);

  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["version"] == PNDG_VERSION);
  CHECK(manifest["runs"].size() == 4);
  for (const auto& run : manifest["runs"]) {
    CHECK(run.contains("params"));
    CHECK(run.contains("errors"));
    CHECK(run.contains("timings"));
    CHECK(run["status"] == "ok");
  }
  for (const auto& f : manifest["outputs"]) CHECK(fs::exists(out / f.get<std::string>()));
  // The config echo parses back to the configuration that was run.
  CHECK(parse_config(manifest["config"].get<std::string>()) == load_config(cfg));
  CHECK(parse_config(slurp(out / "config.ini")) == load_config(cfg));

  // Byte-identical on a second run; wall times only with --timings.
  const auto out2 = tmp.path / "o2";
  REQUIRE(run({"convergence", "--config", cfg, "--out", out2.string(), "--threads", "2"}).code == cli::kOk);
  CHECK(slurp(out2 / "convergence.csv") == csv);
  const auto out3 = tmp.path / "o3";
  REQUIRE(run({"convergence", "--config", cfg, "--out", out3.string(), "--timings"}).code == cli::kOk);
  CHECK(slurp(out3 / "convergence.csv") != csv);
}

TEST_CASE("other subcommands") {
  TempDir tmp;
  const auto cfg = tmp.file("s.cfg", "[discretization]\ncells = 4, 8\n[study]\neps = 1, 0.1\nmoment_orders = 1, 3\n");
  auto r = run({"solve", "--config", cfg, "--out", (tmp.path / "a").string()});
  CHECK(r.code == cli::kOk);
  CHECK(fs::exists(tmp.path / "a" / "solve.csv"));
  r = run({"eps-sweep", "--config", cfg, "--out", (tmp.path / "b").string()});
  CHECK(r.code == cli::kOk);
  CHECK(slurp(tmp.path / "b" / "eps_sweep.csv").find("max_higher_moment_over_eps") != std::string::npos);
  r = run({"n-sweep", "--config", cfg, "--oracle", "kinetic", "--out", (tmp.path / "c").string()});
  CHECK(r.code == cli::kOk);
  CHECK(slurp(tmp.path / "c" / "n_sweep.csv").rfind("d,eps,N,moment_error,angular_error\n", 0) == 0);
  r = run({"n-sweep", "--config", cfg, "--oracle", "manufactured", "--out", (tmp.path / "d").string()});
  CHECK(r.code == cli::kConfigError);
}

TEST_CASE("solver failure exits with 2") {
  TempDir tmp;
  const auto cfg = tmp.file("s.cfg",
                            "[discretization]\ncells = 32\ndegree = 2\n[study]\nsolver = iterative\n"
                            "max_iterations = 1\nrestart = 1\ntolerance = 1e-13\n");
  const auto r = run({"convergence", "--config", cfg, "--out", (tmp.path / "o").string()});
  CHECK(r.code == cli::kSolverFailure);
  CHECK(r.err.find("h = 1/32") != std::string::npos);
  const auto manifest = nlohmann::json::parse(slurp(tmp.path / "o" / "manifest.json"));
  CHECK(manifest["status"].get<std::string>().rfind("failed", 0) == 0);
}

TEST_CASE("number formatting") {
  CHECK(cli::format_number(0.1) == "0.10000000000000001");
  CHECK(cli::format_parameter(1e-6) == "1e-06");
  CHECK(cli::format_parameter(0.125) == "0.125");
}
