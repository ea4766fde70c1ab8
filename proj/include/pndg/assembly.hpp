#pragma once

// Upwind DG discretization of the P_N system
//   A . grad u + Q u = eps f   on the periodic unit square / interval,
// and the norms used to measure its solutions.

#include "pndg/basis.hpp"
#include "pndg/geometry.hpp"
#include "pndg/harmonics.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <memory>
#include <optional>
#include <span>

namespace pndg {

/// Physical direction (0, 1, 2 for x, y, z) carried by a mesh axis. The slab
/// problem (dim 1) advects along z, the plane-parallel one along x and y.
inline int physical_direction(int dim, int axis) { return dim == 1 ? 2 : axis; }

/// Cross sections sigma_t(x), sigma_a(x) and the scaling parameter eps.
class MaterialField {
 public:
  static MaterialField constant(double sigma_t, double sigma_a, double eps);
  static MaterialField variable(ScalarFunction sigma_t, ScalarFunction sigma_a, double eps);

  double eps() const { return eps_; }
  bool is_constant() const { return constant_t_.has_value(); }
  double sigma_t(std::span<const double> x) const { return constant_t_ ? *constant_t_ : sigma_t_(x); }
  double sigma_a(std::span<const double> x) const { return constant_a_ ? *constant_a_ : sigma_a_(x); }
  /// Q(x) diagonal entries: (eps sigma_a, sigma_t/eps).
  std::array<double, 2> q_entries(std::span<const double> x) const;
  /// Throws ConfigError if the cross-section assumptions fail at x.
  void validate_at(std::span<const double> x) const;
  MaterialField with_eps(double eps) const;

 private:
  MaterialField() = default;
  ScalarFunction sigma_t_;
  ScalarFunction sigma_a_;
  std::optional<double> constant_t_;
  std::optional<double> constant_a_;
  double eps_ = 1.0;
};

/// Degree-of-freedom layout: element-major, then moment, then local basis.
struct DofLayout {
  std::shared_ptr<const PeriodicCartesianMesh> mesh;
  std::shared_ptr<const LocalBasis> basis;
  int moment_order = 0;

  int num_moments() const { return (moment_order + 1) * (moment_order + 1); }
  int block_size() const { return num_moments() * basis->size(); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(mesh->num_elements()) * block_size(); }
  Eigen::Index index(int element, int moment, int j) const {
    return (static_cast<Eigen::Index>(element) * num_moments() + moment) * basis->size() + j;
  }
};

DofLayout make_layout(const PeriodicCartesianMesh& mesh, int degree, int moment_order);

/// A DG function with values in R^L.
struct MomentField {
  DofLayout layout;
  Eigen::VectorXd coefficients;

  explicit MomentField(DofLayout l) : layout(std::move(l)), coefficients(Eigen::VectorXd::Zero(layout.size())) {}
  MomentField(DofLayout l, Eigen::VectorXd c);

  /// Local coefficients of one moment on one element.
  Eigen::Map<const Eigen::VectorXd> local(int element, int moment) const {
    return {coefficients.data() + layout.index(element, moment, 0), layout.basis->size()};
  }
  /// Moment vector at a point of a given element (reference coordinates).
  Eigen::VectorXd value_reference(int element, std::array<double, 2> xi) const;
  /// Moment vector at a physical point (owning cell located by coordinates).
  Eigen::VectorXd value(std::span<const double> x) const;
};

/// Vector-valued source f(x) in R^L (the moments <m f>); empty means zero.
using VectorFunction = std::function<Eigen::VectorXd(std::span<const double>)>;

struct GlobalSystem {
  DofLayout layout;
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Eigen::VectorXd rhs;
};

struct SignedAxis {
  int direction = 0;  // 0, 1, 2
  int sign = 1;       // +1 or -1
};

/// n.A {{u}} - 1/2 |n|.|A| [[u]] with [[u]] = u_plus - u_minus.
Eigen::VectorXd numerical_flux(const Eigen::VectorXd& u_minus, const Eigen::VectorXd& u_plus,
                               SignedAxis normal, const MomentMatrices& matrices);

/// Assembles a_h (rows: test functions, columns: trial functions) and the load
/// eps * sum_K (f, v)_K.
GlobalSystem assemble(const PeriodicCartesianMesh& mesh, const LocalBasis& basis,
                      const MomentMatrices& matrices, const MaterialField& materials,
                      const VectorFunction& forcing);

/// a_h(u, v) = v^T M u.
double bilinear_form(const GlobalSystem& system, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

double l2_norm(const MomentField& field);
double q_norm(const MomentField& field, const MaterialField& materials);
/// (1/4 sum_K (|n|.D [[v]], [[v]])_dK + (Q v, v))^(1/2)
double triple_norm(const MomentField& field, const MaterialField& materials, const MomentMatrices& matrices);
/// Sum over faces of (|A| [[v]], [[v]])_e; each face counted once.
double jump_energy(const MomentField& field, const MomentMatrices& matrices);

}  // namespace pndg
