#include "pndg/errors.hpp"
#include "pndg/study.hpp"

#include <doctest.h>

#include <cmath>

using namespace pndg;

TEST_CASE("eoc") {
  auto r = eoc({1.0, 0.5}, {8.0, 1.0});
  REQUIRE(r.size() == 1);
  CHECK(*r[0] == doctest::Approx(3.0));
  r = eoc({1.0, 0.5}, {0.3, 0.3});
  CHECK(*r[0] == doctest::Approx(0.0));
  r = eoc({0.25, 0.125, 0.0625}, {1e-2, 2.5e-3, 6.25e-4});
  CHECK(*r[0] == doctest::Approx(2.0));
  CHECK(*r[1] == doctest::Approx(2.0));
  r = eoc({0.5, 0.25, 0.125}, {1.0, 0.0, 0.1});
  CHECK_FALSE(r[0].has_value());
  CHECK_FALSE(r[1].has_value());
  CHECK_THROWS_AS(eoc({1.0}, {1.0}), InputError);
  CHECK_THROWS_AS(eoc({1.0, 0.5}, {1.0}), InputError);
}

TEST_CASE("convergence table layout and rates") {
  StudyConfig c;
  c.cells = {8, 16, 32};
  c.eps = {1.0, 1e-3};
  const auto report = run_convergence(c);
  REQUIRE(report.rows.size() == 6);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    CHECK(row.eps == c.eps[i / 3]);
    CHECK(row.cells == c.cells[i % 3]);
    CHECK(row.h == doctest::Approx(1.0 / row.cells));
    CHECK(row.eoc_l2.has_value() == (i % 3 != 0));
    CHECK(row.errors.l2 > 0.0);
    CHECK(row.errors.triple >= row.errors.q);
    if (row.eoc_l2) CHECK(*row.eoc_l2 == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("parallel cells reproduce the serial table") {
  StudyConfig c;
  c.dim = 1;
  c.degree = 2;
  c.cells = {4, 8, 16};
  c.eps = {1.0, 0.1, 1e-4};
  const auto serial = run_convergence(c, {1});
  const auto parallel = run_convergence(c, {4});
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].errors.l2 == parallel.rows[i].errors.l2);
    CHECK(serial.rows[i].errors.triple == parallel.rows[i].errors.triple);
  }
}

TEST_CASE("manufactured solution with variable cross sections") {
  StudyConfig c;
  c.oracle = OracleKind::manufactured;
  c.variation = 0.2;
  c.moment_order = 1;
  c.degree = 1;
  c.cells = {8, 16, 32};
  c.eps = {1.0, 1e-2};
  for (int dim : {1, 2}) {
    c.dim = dim;
    if (dim == 2) c.cells = {4, 8, 16};
    const auto report = run_convergence(c);
    for (const auto& row : report.rows) {
      if (row.eoc_l2 && row.cells == c.cells.back()) CHECK(*row.eoc_l2 == doctest::Approx(2.0).epsilon(0.15));
    }
  }
}

TEST_CASE("zero forcing gives zero errors") {
  StudyConfig c;
  c.forcing = ForcingKind::zero;
  c.cells = {4, 8};
  const auto report = run_convergence(c);
  for (const auto& row : report.rows) {
    CHECK(row.errors.l2 == 0.0);
    CHECK_FALSE(row.eoc_l2.has_value());
  }
  c.oracle = OracleKind::kinetic;
  for (const auto& row : run_n_sweep(c)) {
    CHECK(row.moment_error == 0.0);
    CHECK(row.angular_error == 0.0);
  }
}

TEST_CASE("n sweep decreases for smooth data") {
  StudyConfig c;
  c.oracle = OracleKind::kinetic;
  c.eps = {1.0, 0.1};
  c.moment_orders = {1, 3, 5, 7};
  const auto rows = run_n_sweep(c);
  REQUIRE(rows.size() == 8);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].eps == rows[i - 1].eps) {
      CHECK(rows[i].moment_error < rows[i - 1].moment_error);
      CHECK(rows[i].angular_error < rows[i - 1].angular_error);
    }
  }
  c.oracle = OracleKind::manufactured;
  CHECK_THROWS_AS(run_n_sweep(c), ConfigError);
}

TEST_CASE("eps sweep reports moment scaling") {
  StudyConfig c;
  c.cells = {16};
  c.eps = {1.0, 0.1, 0.01};
  const auto report = run_eps_sweep(c);
  REQUIRE(report.rows.size() == 3);
  for (const auto& row : report.rows) {
    REQUIRE(row.higher_moments_over_eps.has_value());
    REQUIRE(row.oracle_higher_moments_over_eps.has_value());
    CHECK(*row.higher_moments_over_eps == doctest::Approx(*row.oracle_higher_moments_over_eps).epsilon(0.05));
  }
}

TEST_CASE("errors are annotated with their cell") {
  StudyConfig c;
  c.cells = {4, 8};
  c.eps = {1.0};
  c.solver.method = SolveMethod::iterative;
  c.solver.max_iterations = 1;
  c.solver.restart = 1;
  c.solver.tolerance = 1e-13;
  try {
    run_convergence(c);
    FAIL("expected a SolverError");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("h = 1/4, eps = 1") != std::string::npos);
  }
}

TEST_CASE("measure_errors of the projected exact solution") {
  StudyConfig c;
  c.degree = 3;
  const auto mm = moment_matrices(MomentBasis(c.moment_order));
  const auto p = make_problem(c, 1.0, mm);
  REQUIRE(p.modal.has_value());
  // Errors of the zero field equal the norms of the exact solution.
  const auto mesh = build_mesh(1, {8});
  const MomentField zero(make_layout(mesh, 3, c.moment_order));
  const auto e = measure_errors(zero, p.exact, p.materials, mm, 8);
  CHECK(e.l2 == doctest::Approx(p.modal->norm()).epsilon(1e-10));
}
