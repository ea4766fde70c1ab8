#include "pndg/basis.hpp"

#include "pndg/errors.hpp"
#include "pndg/harmonics.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>

namespace pndg {

double legendre_orthonormal(int j, double xi) {
  return std::sqrt(j + 0.5) * boost::math::legendre_p(j, xi);
}

double legendre_orthonormal_derivative(int j, double xi) {
  if (j == 0) return 0.0;
  return std::sqrt(j + 0.5) * boost::math::legendre_p_prime(j, xi);
}

TensorRule tensor_gauss_rule(int dim, int points_per_axis) {
  TensorRule rule;
  rule.dim = dim;
  if (dim == 0) {
    rule.points.push_back({0.0, 0.0});
    rule.weights.push_back(1.0);
    return rule;
  }
  const auto [x, w] = gauss_legendre(points_per_axis);
  if (dim == 1) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      rule.points.push_back({x[i], 0.0});
      rule.weights.push_back(w[i]);
    }
    return rule;
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      rule.points.push_back({x[i], x[j]});
      rule.weights.push_back(w[i] * w[j]);
    }
  }
  return rule;
}

LocalBasis::LocalBasis(int degree, int dim, int points_per_axis)
    : degree_(degree), dim_(dim), size_(1) {
  if (degree < 0) throw InputError("polynomial degree must be nonnegative");
  if (dim != 1 && dim != 2) throw InputError("local basis dimension must be 1 or 2");
  for (int a = 0; a < dim; ++a) size_ *= degree + 1;
  const int points = points_per_axis > 0 ? points_per_axis : degree + 2;
  element_rule_ = tensor_gauss_rule(dim, points);
  face_rule_ = tensor_gauss_rule(dim - 1, points);
  element_values_.resize(static_cast<Eigen::Index>(element_rule_.size()), size_);
  for (std::size_t q = 0; q < element_rule_.size(); ++q) {
    for (int j = 0; j < size_; ++j) {
      element_values_(static_cast<Eigen::Index>(q), j) = reference_value(j, element_rule_.points[q]);
    }
  }
}

std::array<int, 2> LocalBasis::multi_index(int j) const {
  if (dim_ == 1) return {j, 0};
  return {j % (degree_ + 1), j / (degree_ + 1)};
}

double LocalBasis::reference_value(int j, std::array<double, 2> xi) const {
  const auto mi = multi_index(j);
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= legendre_orthonormal(mi[a], xi[a]);
  return v;
}

double LocalBasis::reference_derivative(int j, int axis, std::array<double, 2> xi) const {
  const auto mi = multi_index(j);
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) {
    v *= a == axis ? legendre_orthonormal_derivative(mi[a], xi[a]) : legendre_orthonormal(mi[a], xi[a]);
  }
  return v;
}

double LocalBasis::value(int j, std::span<const double> x, std::array<double, 2> origin,
                         std::array<double, 2> widths) const {
  std::array<double, 2> xi{0.0, 0.0};
  double scale = 1.0;
  for (int a = 0; a < dim_; ++a) {
    xi[a] = 2.0 * (x[a] - origin[a]) / widths[a] - 1.0;
    scale *= std::sqrt(2.0 / widths[a]);
  }
  return scale * reference_value(j, xi);
}

double LocalBasis::evaluate(const Eigen::Ref<const Eigen::VectorXd>& coeffs, std::span<const double> x,
                            std::array<double, 2> origin, std::array<double, 2> widths) const {
  double s = 0.0;
  for (int j = 0; j < size_; ++j) s += coeffs[j] * value(j, x, origin, widths);
  return s;
}

Eigen::VectorXd l2_project(const ScalarFunction& f, const PeriodicCartesianMesh& mesh, int element,
                           const LocalBasis& basis, int points) {
  const auto rule = tensor_gauss_rule(basis.dim(), points);
  const auto origin = mesh.origin(element);
  double scale = 1.0;
  std::array<double, 2> widths{1.0, 1.0};
  for (int a = 0; a < mesh.dim(); ++a) {
    widths[a] = mesh.width(a);
    scale *= std::sqrt(widths[a] / 2.0);
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(basis.size());
  std::array<double, 2> x{0.0, 0.0};
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (int a = 0; a < mesh.dim(); ++a) x[a] = origin[a] + 0.5 * widths[a] * (rule.points[q][a] + 1.0);
    const double fq = f(std::span<const double>(x.data(), mesh.dim()));
    for (int j = 0; j < basis.size(); ++j) c[j] += rule.weights[q] * fq * basis.reference_value(j, rule.points[q]);
  }
  return scale * c;
}

double evaluate_interval(const Eigen::Ref<const Eigen::VectorXd>& coeffs, Interval cell, double x) {
  const double xi = 2.0 * (x - cell.lower) / cell.width() - 1.0;
  const double scale = std::sqrt(2.0 / cell.width());
  double s = 0.0;
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) s += coeffs[j] * legendre_orthonormal(static_cast<int>(j), xi);
  return scale * s;
}

namespace {

// Radau (or L2) coefficients from samples of f at the Gauss nodes of the
// cell and its value at the outflow endpoint.
Eigen::VectorXd radau_from_samples(const std::vector<double>& samples, const std::vector<double>& nodes,
                                   const std::vector<double>& weights, double outflow_value,
                                   double width, int degree, Outflow outflow) {
  const int exact_moments = outflow == Outflow::none ? degree + 1 : degree;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(degree + 1);
  const double scale = std::sqrt(width / 2.0);
  for (int j = 0; j < exact_moments; ++j) {
    double s = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) s += weights[q] * samples[q] * legendre_orthonormal(j, nodes[q]);
    c[j] = scale * s;
  }
  if (outflow != Outflow::none) {
    const double xi_out = outflow == Outflow::right ? 1.0 : -1.0;
    const double psi = 1.0 / scale;  // sqrt(2 / width)
    double partial = 0.0;
    for (int j = 0; j < degree; ++j) partial += c[j] * psi * legendre_orthonormal(j, xi_out);
    c[degree] = (outflow_value - partial) / (psi * legendre_orthonormal(degree, xi_out));
  }
  return c;
}

void require_radau_degree(int degree) {
  if (degree < 1) {
    throw InputError("Radau projection is defined for k >= 1; use l2_project for k = 0");
  }
}

double endpoint(Interval cell, Outflow outflow) {
  return outflow == Outflow::left ? cell.lower : cell.upper;
}

}  // namespace

Eigen::VectorXd radau_project(const std::function<double(double)>& f, Interval cell, int degree,
                              Outflow outflow, int points) {
  require_radau_degree(degree);
  const auto [nodes, weights] = gauss_legendre(points);
  std::vector<double> samples(nodes.size());
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    samples[q] = f(cell.lower + 0.5 * cell.width() * (nodes[q] + 1.0));
  }
  const double out = outflow == Outflow::none ? 0.0 : f(endpoint(cell, outflow));
  return radau_from_samples(samples, nodes, weights, out, cell.width(), degree, outflow);
}

Eigen::VectorXd tensor_radau_project(const std::function<double(double, double)>& f, Interval x_cell,
                                     Interval y_cell, int degree, std::array<Outflow, 2> outflow,
                                     bool y_first, int points) {
  require_radau_degree(degree);
  const auto [nodes, weights] = gauss_legendre(points);
  const int n = degree + 1;
  const std::array<Interval, 2> cells{x_cell, y_cell};
  // `inner` is projected first, along lines of constant `outer` coordinate.
  const int inner = y_first ? 1 : 0;
  const int outer = 1 - inner;
  auto point = [&](double t_inner, double t_outer) {
    return inner == 0 ? f(t_inner, t_outer) : f(t_outer, t_inner);
  };
  auto inner_project = [&](double t_outer) {
    std::vector<double> samples(nodes.size());
    const Interval c = cells[inner];
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      samples[q] = point(c.lower + 0.5 * c.width() * (nodes[q] + 1.0), t_outer);
    }
    const double out = outflow[inner] == Outflow::none ? 0.0 : point(endpoint(c, outflow[inner]), t_outer);
    return radau_from_samples(samples, nodes, weights, out, c.width(), degree, outflow[inner]);
  };

  const Interval oc = cells[outer];
  std::vector<Eigen::VectorXd> lines;
  lines.reserve(nodes.size());
  for (double node : nodes) lines.push_back(inner_project(oc.lower + 0.5 * oc.width() * (node + 1.0)));
  const Eigen::VectorXd at_out =
      outflow[outer] == Outflow::none ? Eigen::VectorXd::Zero(n) : inner_project(endpoint(oc, outflow[outer]));

  Eigen::VectorXd coeffs(n * n);
  std::vector<double> samples(nodes.size());
  for (int i = 0; i < n; ++i) {
    for (std::size_t q = 0; q < nodes.size(); ++q) samples[q] = lines[q][i];
    const Eigen::VectorXd c =
        radau_from_samples(samples, nodes, weights, at_out[i], oc.width(), degree, outflow[outer]);
    for (int j = 0; j < n; ++j) {
      // i indexes the inner axis, j the outer one.
      const int jx = inner == 0 ? i : j;
      const int jy = inner == 0 ? j : i;
      coeffs[jx + n * jy] = c[j];
    }
  }
  return coeffs;
}

double evaluate_rectangle(const Eigen::Ref<const Eigen::VectorXd>& coeffs, Interval x_cell,
                          Interval y_cell, int degree, double x, double y) {
  const int n = degree + 1;
  const double xi = 2.0 * (x - x_cell.lower) / x_cell.width() - 1.0;
  const double eta = 2.0 * (y - y_cell.lower) / y_cell.width() - 1.0;
  const double scale = std::sqrt(4.0 / (x_cell.width() * y_cell.width()));
  double s = 0.0;
  for (int jy = 0; jy < n; ++jy) {
    for (int jx = 0; jx < n; ++jx) {
      s += coeffs[jx + n * jy] * legendre_orthonormal(jx, xi) * legendre_orthonormal(jy, eta);
    }
  }
  return scale * s;
}

}  // namespace pndg
