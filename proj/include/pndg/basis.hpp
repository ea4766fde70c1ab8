#pragma once

// Local polynomial spaces on cells of a Cartesian grid: P_k on intervals and
// tensor-product Q_k on rectangles, built from Legendre polynomials that are
// orthonormal on the physical cell. Also the L2 and Radau projections.

#include "pndg/geometry.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace pndg {

/// Legendre polynomial of degree j scaled to unit L2 norm on [-1, 1].
double legendre_orthonormal(int j, double xi);
double legendre_orthonormal_derivative(int j, double xi);

/// Tensor Gauss rule on [-1,1]^dim (dim may be 0 for the face of an interval).
struct TensorRule {
  int dim = 0;
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
};

TensorRule tensor_gauss_rule(int dim, int points_per_axis);

class LocalBasis {
 public:
  /// Degree k >= 0 in each variable, dim in {1, 2}. The element rule uses
  /// k+2 Gauss points per axis unless `points_per_axis` is given.
  LocalBasis(int degree, int dim, int points_per_axis = 0);

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  int size() const { return size_; }
  /// Per-axis degrees of local function j (first axis fastest).
  std::array<int, 2> multi_index(int j) const;

  /// Product of reference orthonormal Legendre factors at xi.
  double reference_value(int j, std::array<double, 2> xi) const;
  /// d/dxi_axis of reference_value.
  double reference_derivative(int j, int axis, std::array<double, 2> xi) const;

  const TensorRule& element_rule() const { return element_rule_; }
  /// Rule on the faces normal to `axis`, with points given in the full
  /// reference coordinates of the cell (xi_axis is left for the caller).
  const TensorRule& face_rule() const { return face_rule_; }

  /// Reference values at the element rule points: (point, function).
  const Eigen::MatrixXd& element_values() const { return element_values_; }

  /// Value of the physically orthonormal basis function j at a point of the
  /// cell with given lower corner and widths.
  double value(int j, std::span<const double> x, std::array<double, 2> origin,
               std::array<double, 2> widths) const;

  /// Evaluate sum_j c_j psi_j at x.
  double evaluate(const Eigen::Ref<const Eigen::VectorXd>& coeffs, std::span<const double> x,
                  std::array<double, 2> origin, std::array<double, 2> widths) const;

 private:
  int degree_;
  int dim_;
  int size_;
  TensorRule element_rule_;
  TensorRule face_rule_;
  Eigen::MatrixXd element_values_;
};

/// Scalar field on the physical domain; x has one entry per dimension.
using ScalarFunction = std::function<double(std::span<const double>)>;

/// L2 projection of f onto the local space of one cell: the inner products of
/// f with the orthonormal basis, by a Gauss rule with `points` per axis.
Eigen::VectorXd l2_project(const ScalarFunction& f, const PeriodicCartesianMesh& mesh, int element,
                           const LocalBasis& basis, int points = 16);

struct Interval {
  double lower = -1.0;
  double upper = 1.0;
  double width() const { return upper - lower; }
};

/// Which endpoint a Radau projection interpolates. `none` selects the plain
/// L2 projection, used for directions that do not advect.
enum class Outflow { left, right, none };

/// Coefficients of sum_j c_j psi_j, psi_j = sqrt(2/|J|) legendre_orthonormal(j, xi).
double evaluate_interval(const Eigen::Ref<const Eigen::VectorXd>& coeffs, Interval cell, double x);

/// One-dimensional Radau projection onto P_k(J): orthogonal to P_{k-1} and
/// exact at the outflow endpoint. Requires k >= 1.
Eigen::VectorXd radau_project(const std::function<double(double)>& f, Interval cell, int degree,
                              Outflow outflow, int points = 16);

/// R_x (x) R_y on a rectangle; coefficients indexed jx + (k+1) jy.
/// `y_first` applies the y-projection first (the result is the same).
Eigen::VectorXd tensor_radau_project(const std::function<double(double, double)>& f, Interval x_cell,
                                     Interval y_cell, int degree, std::array<Outflow, 2> outflow,
                                     bool y_first = false, int points = 16);

double evaluate_rectangle(const Eigen::Ref<const Eigen::VectorXd>& coeffs, Interval x_cell,
                          Interval y_cell, int degree, double x, double y);

}  // namespace pndg
