#include "pndg/assembly.hpp"

#include "pndg/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace pndg {

MaterialField MaterialField::constant(double sigma_t, double sigma_a, double eps) {
  check_cross_sections(sigma_t, sigma_a, eps);
  MaterialField m;
  m.constant_t_ = sigma_t;
  m.constant_a_ = sigma_a;
  m.eps_ = eps;
  return m;
}

MaterialField MaterialField::variable(ScalarFunction sigma_t, ScalarFunction sigma_a, double eps) {
  if (!sigma_t || !sigma_a) throw InputError("variable materials need both cross sections");
  if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("scaling parameter eps must lie in (0, 1]");
  MaterialField m;
  m.sigma_t_ = std::move(sigma_t);
  m.sigma_a_ = std::move(sigma_a);
  m.eps_ = eps;
  return m;
}

std::array<double, 2> MaterialField::q_entries(std::span<const double> x) const {
  return {eps_ * sigma_a(x), sigma_t(x) / eps_};
}

void MaterialField::validate_at(std::span<const double> x) const {
  check_cross_sections(sigma_t(x), sigma_a(x), eps_);
}

MaterialField MaterialField::with_eps(double eps) const {
  MaterialField m = *this;
  m.eps_ = eps;
  if (m.is_constant()) check_cross_sections(*m.constant_t_, *m.constant_a_, eps);
  return m;
}

DofLayout make_layout(const PeriodicCartesianMesh& mesh, int degree, int moment_order) {
  if (moment_order < 0) throw InputError("moment order must be nonnegative");
  return DofLayout{std::make_shared<const PeriodicCartesianMesh>(mesh),
                   std::make_shared<const LocalBasis>(degree, mesh.dim()), moment_order};
}

MomentField::MomentField(DofLayout l, Eigen::VectorXd c) : layout(std::move(l)), coefficients(std::move(c)) {
  if (coefficients.size() != layout.size()) {
    throw InputError("coefficient count does not match the degree-of-freedom layout");
  }
}

Eigen::VectorXd MomentField::value_reference(int element, std::array<double, 2> xi) const {
  const auto& basis = *layout.basis;
  const auto& mesh = *layout.mesh;
  double scale = 1.0;
  for (int a = 0; a < mesh.dim(); ++a) scale *= std::sqrt(2.0 / mesh.width(a));
  Eigen::VectorXd phi(basis.size());
  for (int j = 0; j < basis.size(); ++j) phi[j] = scale * basis.reference_value(j, xi);
  Eigen::VectorXd u(layout.num_moments());
  for (int p = 0; p < layout.num_moments(); ++p) u[p] = local(element, p).dot(phi);
  return u;
}

Eigen::VectorXd MomentField::value(std::span<const double> x) const {
  const auto& mesh = *layout.mesh;
  std::array<int, 2> c{0, 0};
  std::array<double, 2> xi{0.0, 0.0};
  for (int a = 0; a < mesh.dim(); ++a) {
    const double t = (x[a] - std::floor(x[a])) * mesh.cells_per_axis()[a];
    c[a] = std::min(static_cast<int>(t), mesh.cells_per_axis()[a] - 1);
    xi[a] = 2.0 * (t - c[a]) - 1.0;
  }
  return value_reference(mesh.element_at(c), xi);
}

Eigen::VectorXd numerical_flux(const Eigen::VectorXd& u_minus, const Eigen::VectorXd& u_plus,
                               SignedAxis normal, const MomentMatrices& matrices) {
  if (normal.direction < 0 || normal.direction > 2 || (normal.sign != 1 && normal.sign != -1)) {
    throw InputError("normal must be one of +-e1, +-e2, +-e3");
  }
  const auto& a = matrices.a[normal.direction];
  const auto& d = matrices.abs_a[normal.direction];
  return normal.sign * (a * (0.5 * (u_plus + u_minus))) - 0.5 * (d * (u_plus - u_minus));
}

namespace {

// Reference point on the face normal to `axis` at side xi_axis = side.
std::array<double, 2> face_point(int dim, int axis, double side, const std::array<double, 2>& fp) {
  std::array<double, 2> xi{0.0, 0.0};
  xi[axis] = side;
  if (dim == 2) xi[1 - axis] = fp[0];
  return xi;
}

// Physical point of the reference coordinate xi in an element.
std::array<double, 2> physical_point(const PeriodicCartesianMesh& mesh, int element, const std::array<double, 2>& xi) {
  const auto o = mesh.origin(element);
  std::array<double, 2> x{0.0, 0.0};
  for (int a = 0; a < mesh.dim(); ++a) x[a] = o[a] + 0.5 * mesh.width(a) * (xi[a] + 1.0);
  return x;
}

// Matrices shared by every cell of a uniform grid.
struct AxisCoupling {
  Eigen::MatrixXd upper_self;     // row cell is the lower cell of the face
  Eigen::MatrixXd upper_other;
  Eigen::MatrixXd lower_self;     // row cell is the upper cell of the face
  Eigen::MatrixXd lower_other;
};

struct ColumnBlock {
  int element;
  Eigen::MatrixXd block;
};

void add_column_block(std::vector<ColumnBlock>& row, int element, const Eigen::MatrixXd& block) {
  for (auto& cb : row) {
    if (cb.element == element) {
      cb.block += block;
      return;
    }
  }
  row.push_back({element, block});
}

}  // namespace

GlobalSystem assemble(const PeriodicCartesianMesh& mesh, const LocalBasis& basis,
                      const MomentMatrices& matrices, const MaterialField& materials,
                      const VectorFunction& forcing) {
  const int dim = mesh.dim();
  if (basis.dim() != dim) throw InputError("basis and mesh dimensions differ");
  GlobalSystem sys;
  sys.layout = DofLayout{std::make_shared<const PeriodicCartesianMesh>(mesh),
                         std::make_shared<const LocalBasis>(basis), matrices.order};
  const auto& layout = sys.layout;
  const int nb = basis.size();
  const int nm = layout.num_moments();
  const int bs = layout.block_size();
  if (matrices.size() != nm) throw InputError("moment matrices do not match the moment order");

  const auto& rule = basis.element_rule();
  const auto& frule = basis.face_rule();
  const auto nq = static_cast<Eigen::Index>(rule.size());

  // Volume advection: -sum_a (A u, d_a v)_K.
  Eigen::MatrixXd volume = Eigen::MatrixXd::Zero(bs, bs);
  for (int axis = 0; axis < dim; ++axis) {
    Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(nb, nb);  // (i, j) = int psi_j d_a psi_i
    for (Eigen::Index q = 0; q < nq; ++q) {
      for (int i = 0; i < nb; ++i) {
        const double di = basis.reference_derivative(i, axis, rule.points[q]);
        for (int j = 0; j < nb; ++j) stiff(i, j) += rule.weights[q] * di * basis.element_values()(q, j);
      }
    }
    stiff *= 2.0 / mesh.width(axis);
    volume -= Eigen::kroneckerProduct(matrices.a[physical_direction(dim, axis)], stiff).eval();
  }

  // Face coupling through the upwind flux, per axis.
  std::vector<AxisCoupling> coupling(dim);
  for (int axis = 0; axis < dim; ++axis) {
    Eigen::MatrixXd up(frule.size(), nb), low(frule.size(), nb);
    for (std::size_t q = 0; q < frule.size(); ++q) {
      for (int j = 0; j < nb; ++j) {
        up(static_cast<Eigen::Index>(q), j) = basis.reference_value(j, face_point(dim, axis, 1.0, frule.points[q]));
        low(static_cast<Eigen::Index>(q), j) = basis.reference_value(j, face_point(dim, axis, -1.0, frule.points[q]));
      }
    }
    Eigen::VectorXd w(static_cast<Eigen::Index>(frule.size()));
    for (std::size_t q = 0; q < frule.size(); ++q) w[static_cast<Eigen::Index>(q)] = frule.weights[q];
    const double s = 2.0 / mesh.width(axis);
    const Eigen::MatrixXd ll = s * up.transpose() * w.asDiagonal() * up;
    const Eigen::MatrixXd lr = s * up.transpose() * w.asDiagonal() * low;
    const Eigen::MatrixXd rl = s * low.transpose() * w.asDiagonal() * up;
    const Eigen::MatrixXd rr = s * low.transpose() * w.asDiagonal() * low;
    const int dir = physical_direction(dim, axis);
    const Eigen::MatrixXd plus = matrices.positive_part(dir);
    const Eigen::MatrixXd minus = matrices.negative_part(dir);
    // Seen from the lower cell the flux is A+ u_L + A- u_R; the upper cell
    // receives the negative of the same flux.
    coupling[axis].upper_self = Eigen::kroneckerProduct(plus, ll);
    coupling[axis].upper_other = Eigen::kroneckerProduct(minus, lr);
    coupling[axis].lower_self = -Eigen::kroneckerProduct(minus, rr).eval();
    coupling[axis].lower_other = -Eigen::kroneckerProduct(plus, rl).eval();
  }

  const double volume_scale = [&] {
    double s = 1.0;
    for (int a = 0; a < dim; ++a) s *= std::sqrt(mesh.width(a) / 2.0);
    return s;
  }();

  Eigen::VectorXi row_capacity(layout.size());
  for (Eigen::Index r = 0; r < layout.size(); ++r) row_capacity[r] = (1 + 2 * dim) * bs;
  sys.matrix.resize(layout.size(), layout.size());
  sys.matrix.reserve(row_capacity);
  sys.rhs = Eigen::VectorXd::Zero(layout.size());

  const Eigen::MatrixXd identity_nb = Eigen::MatrixXd::Identity(nb, nb);
  std::vector<ColumnBlock> row;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    // Reaction term (Q u, v)_K and load, from the element quadrature.
    Eigen::MatrixXd mass_a = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::MatrixXd mass_t = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd load = Eigen::VectorXd::Zero(bs);
    for (Eigen::Index q = 0; q < nq; ++q) {
      const auto x = physical_point(mesh, e, rule.points[q]);
      const std::span<const double> xs(x.data(), dim);
      if (!materials.is_constant()) materials.validate_at(xs);
      const auto phi = basis.element_values().row(q);
      if (!materials.is_constant()) {
        const auto qe = materials.q_entries(xs);
        mass_a.noalias() += (rule.weights[q] * qe[0]) * phi.transpose() * phi;
        mass_t.noalias() += (rule.weights[q] * qe[1]) * phi.transpose() * phi;
      }
      if (forcing) {
        const Eigen::VectorXd f = forcing(xs);
        if (f.size() != nm) throw InputError("forcing must return one value per moment");
        for (int p = 0; p < nm; ++p) {
          load.segment(p * nb, nb) += (rule.weights[q] * f[p]) * phi.transpose();
        }
      }
    }
    if (materials.is_constant()) {
      const auto qe = materials.q_entries({});
      mass_a = qe[0] * identity_nb;
      mass_t = qe[1] * identity_nb;
    }
    sys.rhs.segment(static_cast<Eigen::Index>(e) * bs, bs) = (materials.eps() * volume_scale) * load;

    Eigen::MatrixXd diag = volume;
    diag.topLeftCorner(nb, nb) += mass_a;
    for (int p = 1; p < nm; ++p) diag.block(p * nb, p * nb, nb, nb) += mass_t;

    row.clear();
    row.push_back({e, std::move(diag)});
    for (int axis = 0; axis < dim; ++axis) {
      const auto& c = coupling[axis];
      const int upper = mesh.neighbor(e, 2 * axis + 1).element;
      const int lower = mesh.neighbor(e, 2 * axis).element;
      add_column_block(row, e, c.upper_self);
      add_column_block(row, upper, c.upper_other);
      add_column_block(row, e, c.lower_self);
      add_column_block(row, lower, c.lower_other);
    }
    std::sort(row.begin(), row.end(), [](const ColumnBlock& a, const ColumnBlock& b) { return a.element < b.element; });

    for (int r = 0; r < bs; ++r) {
      const Eigen::Index grow = static_cast<Eigen::Index>(e) * bs + r;
      for (const auto& cb : row) {
        const Eigen::Index col0 = static_cast<Eigen::Index>(cb.element) * bs;
        for (int c = 0; c < bs; ++c) {
          const double v = cb.block(r, c);
          if (v != 0.0) sys.matrix.insert(grow, col0 + c) = v;
        }
      }
    }
  }
  sys.matrix.makeCompressed();
  return sys;
}

double bilinear_form(const GlobalSystem& system, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return v.dot(system.matrix * u);
}

double l2_norm(const MomentField& field) {
  // The local basis is orthonormal on each cell.
  return field.coefficients.norm();
}

double q_norm(const MomentField& field, const MaterialField& materials) {
  const auto& layout = field.layout;
  const auto& mesh = *layout.mesh;
  const auto& basis = *layout.basis;
  const int nm = layout.num_moments();
  if (materials.is_constant()) {
    const auto qe = materials.q_entries({});
    double s = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      for (int p = 0; p < nm; ++p) s += (p == 0 ? qe[0] : qe[1]) * field.local(e, p).squaredNorm();
    }
    return std::sqrt(s);
  }
  const auto& rule = basis.element_rule();
  double s = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto x = physical_point(mesh, e, rule.points[q]);
      const auto qe = materials.q_entries(std::span<const double>(x.data(), mesh.dim()));
      const Eigen::VectorXd u = field.value_reference(e, rule.points[q]);
      const double w = rule.weights[q] * mesh.element_volume() / std::pow(2.0, mesh.dim());
      s += w * (qe[0] * u[0] * u[0] + qe[1] * u.tail(nm - 1).squaredNorm());
    }
  }
  return std::sqrt(s);
}

double jump_energy(const MomentField& field, const MomentMatrices& matrices) {
  const auto& mesh = *field.layout.mesh;
  const auto& frule = field.layout.basis->face_rule();
  const int dim = mesh.dim();
  double s = 0.0;
  for (const auto& f : mesh.faces()) {
    const auto& absa = matrices.abs_a[physical_direction(dim, f.axis)];
    const double scale = f.measure / std::pow(2.0, dim - 1);
    for (std::size_t q = 0; q < frule.size(); ++q) {
      const Eigen::VectorXd jump = field.value_reference(f.right, face_point(dim, f.axis, -1.0, frule.points[q])) -
                                   field.value_reference(f.left, face_point(dim, f.axis, 1.0, frule.points[q]));
      s += scale * frule.weights[q] * jump.dot(absa * jump);
    }
  }
  return s;
}

double triple_norm(const MomentField& field, const MaterialField& materials, const MomentMatrices& matrices) {
  const double q = q_norm(field, materials);
  // Each face appears twice in the sum over element boundaries.
  return std::sqrt(0.5 * jump_energy(field, matrices) + q * q);
}

}  // namespace pndg
