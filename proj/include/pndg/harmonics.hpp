#pragma once

// Real spherical harmonics, product quadrature on the unit sphere and the
// P_N moment matrices A(i) = <omega_i m m^T>.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pndg {

using Vec3 = std::array<double, 3>;

/// Index bookkeeping for the harmonics m_l^kappa, 0 <= l <= N, |kappa| <= l.
/// Flat indices are zero-based, degree-major, kappa ascending from -l to l.
class MomentBasis {
 public:
  explicit MomentBasis(int order);

  int order() const { return order_; }
  int size() const { return (order_ + 1) * (order_ + 1); }

  static int flat_index(int degree, int kappa) { return degree * degree + kappa + degree; }
  /// Inverse of flat_index: (degree, kappa).
  static std::pair<int, int> degree_order(int flat);
  /// Flat index range [begin, end) of degree l.
  static std::pair<int, int> degree_range(int degree) {
    return {degree * degree, (degree + 1) * (degree + 1)};
  }

 private:
  int order_;
};

/// m(omega) in flat-index order. Throws InputError if |omega| deviates from 1
/// by more than 1e-12.
Eigen::VectorXd eval_basis(const Vec3& omega, const MomentBasis& basis);

struct SphereQuadrature {
  std::vector<Vec3> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  /// Sum of weight * f(node).
  template <class F>
  auto integrate(F&& f) const {
    auto acc = weights[0] * f(nodes[0]);
    for (std::size_t q = 1; q < nodes.size(); ++q) acc += weights[q] * f(nodes[q]);
    return acc;
  }
};

/// Gauss-Legendre in mu (N+2 points) times the trapezoid rule in phi
/// (2N+3 points). Exact for spherical polynomials of degree <= 2N+2.
SphereQuadrature sphere_quadrature(int order);

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int points);

/// Operator absolute value Q |Lambda| Q^T of a symmetric matrix.
/// Throws InputError if max |M - M^T| exceeds 1e-10.
Eigen::MatrixXd abs_matrix(const Eigen::MatrixXd& m);

struct MomentMatrices {
  int order = 0;
  std::array<Eigen::MatrixXd, 3> a;
  std::array<Eigen::MatrixXd, 3> eigenvectors;
  std::array<Eigen::VectorXd, 3> eigenvalues;
  std::array<Eigen::MatrixXd, 3> abs_a;

  int size() const { return static_cast<int>(a[0].rows()); }
  /// Upwind splitting (A + |A|)/2 and (A - |A|)/2.
  Eigen::MatrixXd positive_part(int direction) const { return 0.5 * (a[direction] + abs_a[direction]); }
  Eigen::MatrixXd negative_part(int direction) const { return 0.5 * (a[direction] - abs_a[direction]); }
};

/// Entries of magnitude below this are snapped to exact zero.
inline constexpr double kMatrixZeroSnap = 1e-13;

/// Builds A(1..3) by quadrature, then their eigendecompositions and |A(i)|.
MomentMatrices moment_matrices(const MomentBasis& basis);

/// Diagonal of the scattering matrix Q: first entry eps*sigma_a, the rest
/// sigma_t/eps. Also carries its entrywise square root.
struct ScatteringDiagonal {
  Eigen::VectorXd q;
  Eigen::VectorXd sqrt_q;
};

/// Checks the cross-section assumptions for one point; throws ConfigError
/// naming the violated inequality.
void check_cross_sections(double sigma_t, double sigma_a, double eps);

ScatteringDiagonal scattering_q(double sigma_t, double sigma_a, double eps, int moments);

struct InvariantCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

/// Invariant suite of the order-N harmonics and moment matrices: quadrature
/// weights and exactness, symmetry, degree-block sparsity, the three-term
/// recursion omega_i m = A(i) m at `samples` random directions, spectral
/// bounds and the eigendecompositions.
std::vector<InvariantCheck> verify_moment_matrices(int order, int samples = 100, std::uint64_t seed = 20240611);

}  // namespace pndg
