#include "pndg/basis.hpp"
#include "pndg/harmonics.hpp"
#include "pndg/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pndg;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gauss integral of g over an interval.
double integrate(const std::function<double(double)>& g, Interval cell, int points = 20) {
  const auto [x, w] = gauss_legendre(points);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i] * g(cell.lower + 0.5 * (x[i] + 1.0) * cell.width());
  }
  return 0.5 * cell.width() * s;
}

double radau_l2_error(int k, Outflow outflow, int cells) {
  auto f = [](double x) { return std::sin(kTwoPi * x); };
  double s = 0.0;
  for (int c = 0; c < cells; ++c) {
    const Interval cell{static_cast<double>(c) / cells, static_cast<double>(c + 1) / cells};
    const auto coeffs = radau_project(f, cell, k, outflow);
    s += integrate([&](double x) { return std::pow(f(x) - evaluate_interval(coeffs, cell, x), 2); }, cell);
  }
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("orthonormal Legendre") {
  const auto [x, w] = gauss_legendre(8);
  for (int i = 0; i <= 5; ++i) {
    for (int j = 0; j <= 5; ++j) {
      double s = 0.0;
      for (std::size_t q = 0; q < x.size(); ++q) s += w[q] * legendre_orthonormal(i, x[q]) * legendre_orthonormal(j, x[q]);
      CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14).scale(1.0));
    }
  }
  const double h = 1e-6;
  for (int j = 0; j <= 5; ++j) {
    const double fd = (legendre_orthonormal(j, 0.3 + h) - legendre_orthonormal(j, 0.3 - h)) / (2 * h);
    CHECK(legendre_orthonormal_derivative(j, 0.3) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("local basis sizes and identity mass matrix") {
  for (int dim : {1, 2}) {
    for (int k : {0, 1, 2, 3}) {
      const LocalBasis basis(k, dim);
      CHECK(basis.size() == (dim == 1 ? k + 1 : (k + 1) * (k + 1)));
      const auto& rule = basis.element_rule();
      const auto& v = basis.element_values();
      Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(basis.size(), basis.size());
      for (std::size_t q = 0; q < rule.size(); ++q) mass += rule.weights[q] * v.row(q).transpose() * v.row(q);
      CHECK((mass - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff() <= 1e-13);
    }
  }
  CHECK_THROWS_AS(LocalBasis(-1, 1), InputError);
  CHECK_THROWS_AS(LocalBasis(1, 3), InputError);
}

TEST_CASE("l2 projection") {
  const auto mesh = build_mesh(2, {4, 4});
  const LocalBasis basis(2, 2);
  const auto c = l2_project([](std::span<const double>) { return 3.0; }, mesh, 5, basis);
  CHECK(c[0] == doctest::Approx(3.0 * std::sqrt(mesh.element_volume())).epsilon(1e-14));
  CHECK(c.tail(c.size() - 1).cwiseAbs().maxCoeff() <= 1e-14);

  auto q2 = [](std::span<const double> x) { return x[0] * x[0] * x[1] - 2.0 * x[1] * x[1] + x[0]; };
  const int e = 6;
  const auto p = l2_project(q2, mesh, e, basis);
  const auto o = mesh.origin(e);
  for (double s : {0.1, 0.5, 0.9}) {
    const std::array<double, 2> x{o[0] + s * 0.25, o[1] + (1 - s) * 0.25};
    CHECK(basis.evaluate(p, x, o, {0.25, 0.25}) == doctest::Approx(q2(x)).epsilon(1e-13));
  }

  // sin(2 pi x) with k = 2 decays as h^3.
  const LocalBasis b1(2, 1);
  std::vector<double> errors;
  for (int n : {8, 16, 32, 64, 128}) {
    const auto m = build_mesh(1, {n});
    double s = 0.0;
    for (int el = 0; el < n; ++el) {
      const auto coeffs = l2_project([](std::span<const double> x) { return std::sin(kTwoPi * x[0]); }, m, el, b1);
      const Interval cell{m.origin(el)[0], m.origin(el)[0] + m.width(0)};
      s += integrate([&](double x) { return std::pow(std::sin(kTwoPi * x) - evaluate_interval(coeffs, cell, x), 2); },
                     cell);
    }
    errors.push_back(std::sqrt(s));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) CHECK(std::log2(errors[i - 1] / errors[i]) == doctest::Approx(3.0).epsilon(0.1 / 3.0));
}

TEST_CASE("radau projection of x^2 with k = 1") {
  const Interval ref{-1.0, 1.0};
  auto f = [](double x) { return x * x; };
  const auto right = radau_project(f, ref, 1, Outflow::right);
  const auto left = radau_project(f, ref, 1, Outflow::left);
  for (double x : {-1.0, -0.3, 0.0, 0.6, 1.0}) {
    CHECK(evaluate_interval(right, ref, x) == doctest::Approx(1.0 / 3.0 + 2.0 * x / 3.0).epsilon(1e-14));
    CHECK(evaluate_interval(left, ref, x) == doctest::Approx(1.0 / 3.0 - 2.0 * x / 3.0).epsilon(1e-14));
  }
  CHECK(evaluate_interval(right, ref, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(integrate([&](double x) { return f(x) - evaluate_interval(right, ref, x); }, ref)) <= 1e-14);
}

TEST_CASE("radau projection properties") {
  const Interval cell{0.25, 0.375};
  auto g = [](double x) { return std::exp(x) * std::cos(3.0 * x); };
  for (int k : {1, 2, 3, 4}) {
    // Reproduces P_k.
    auto p = [k](double x) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += (j + 1) * std::pow(x - 0.3, j);
      return s;
    };
    for (auto outflow : {Outflow::left, Outflow::right, Outflow::none}) {
      const auto c = radau_project(p, cell, k, outflow);
      for (double x : {0.25, 0.3, 0.375}) CHECK(evaluate_interval(c, cell, x) == doctest::Approx(p(x)).epsilon(1e-13));
    }
    for (auto outflow : {Outflow::left, Outflow::right}) {
      const auto c = radau_project(g, cell, k, outflow);
      const double end = outflow == Outflow::right ? cell.upper : cell.lower;
      CHECK(std::abs(evaluate_interval(c, cell, end) - g(end)) <= 1e-13);
      for (int j = 0; j < k; ++j) {
        const double moment = integrate(
            [&](double x) {
              const double xi = 2.0 * (x - cell.lower) / cell.width() - 1.0;
              return (g(x) - evaluate_interval(c, cell, x)) * legendre_orthonormal(j, xi);
            },
            cell);
        CHECK(std::abs(moment) <= 1e-13);
      }
    }
  }
  CHECK_THROWS_AS(radau_project(g, cell, 0, Outflow::right), InputError);
}

TEST_CASE("radau projection decay") {
  for (int k : {1, 2, 3}) {
    for (auto outflow : {Outflow::left, Outflow::right}) {
      double prev = radau_l2_error(k, outflow, 8);
      for (int n : {16, 32, 64, 128}) {
        const double e = radau_l2_error(k, outflow, n);
        CHECK(std::log2(prev / e) == doctest::Approx(k + 1.0).epsilon(0.1 / (k + 1.0)));
        prev = e;
      }
    }
  }
}

TEST_CASE("tensor radau projection") {
  const Interval ref{-1.0, 1.0};
  auto f = [](double x, double y) { return x * x * y * y; };
  for (auto ox : {Outflow::left, Outflow::right}) {
    for (auto oy : {Outflow::left, Outflow::right}) {
      const auto c = tensor_radau_project(f, ref, ref, 1, {ox, oy});
      const double sx = ox == Outflow::right ? 1.0 : -1.0;
      const double sy = oy == Outflow::right ? 1.0 : -1.0;
      for (double x : {-0.7, 0.2, 1.0}) {
        for (double y : {-1.0, 0.4}) {
          const double expect = (1.0 / 3.0 + sx * 2.0 * x / 3.0) * (1.0 / 3.0 + sy * 2.0 * y / 3.0);
          CHECK(evaluate_rectangle(c, ref, ref, 1, x, y) == doctest::Approx(expect).epsilon(1e-13));
        }
      }
      const auto swapped = tensor_radau_project(f, ref, ref, 1, {ox, oy}, true);
      CHECK((c - swapped).cwiseAbs().maxCoeff() <= 1e-13);
    }
  }
  const Interval jx{0.0, 0.5}, jy{0.25, 0.5};
  auto q = [](double x, double y) { return (1 + x - 2 * x * x) * (y * y - y + 3); };
  const auto c = tensor_radau_project(q, jx, jy, 2, {Outflow::right, Outflow::none});
  CHECK(evaluate_rectangle(c, jx, jy, 2, 0.1, 0.3) == doctest::Approx(q(0.1, 0.3)).epsilon(1e-13));
  auto g = [](double x, double y) { return std::sin(x + 2.0 * y); };
  const auto gc = tensor_radau_project(g, jx, jy, 2, {Outflow::left, Outflow::right});
  const auto gs = tensor_radau_project(g, jx, jy, 2, {Outflow::left, Outflow::right}, true);
  CHECK((gc - gs).cwiseAbs().maxCoeff() <= 1e-13);
}
