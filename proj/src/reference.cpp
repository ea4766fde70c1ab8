#include "pndg/reference.hpp"

#include "pndg/errors.hpp"

#include <cmath>
#include <numbers>

namespace pndg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

WaveVector negate(const WaveVector& k) { return {-k[0], -k[1]}; }

double phase(const WaveVector& k, std::span<const double> x, int dim) {
  double s = k[0] * x[0];
  if (dim == 2) s += k[1] * x[1];
  return kTwoPi * s;
}

void check_wave_vector(const WaveVector& k, int dim) {
  if (dim != 1 && dim != 2) throw InputError("Fourier data must be one- or two-dimensional");
  if (dim == 1 && k[1] != 0) throw InputError("one-dimensional wave vectors must have a zero second entry");
}

}  // namespace

void FourierForcing::validate() const {
  for (const auto& [k, f] : modes) {
    check_wave_vector(k, dim);
    auto it = modes.find(negate(k));
    if (it == modes.end() || it->second.size() != f.size() ||
        (it->second - f.conjugate()).cwiseAbs().maxCoeff() > 1e-14) {
      throw InputError("Fourier forcing must satisfy fhat(-kappa) = conj(fhat(kappa))");
    }
  }
}

FourierForcing FourierForcing::cosine(int dim, WaveVector kappa, const Eigen::VectorXd& amplitude) {
  check_wave_vector(kappa, dim);
  FourierForcing f;
  f.dim = dim;
  const Eigen::VectorXcd half = (0.5 * amplitude).cast<Complex>();
  if (kappa == WaveVector{0, 0}) {
    f.modes[kappa] = amplitude.cast<Complex>();
  } else {
    f.modes[kappa] = half;
    f.modes[negate(kappa)] = half;
  }
  return f;
}

Eigen::VectorXd FourierForcing::value(std::span<const double> x) const {
  Eigen::VectorXd v;
  for (const auto& [k, f] : modes) {
    const Complex e = std::polar(1.0, phase(k, x, dim));
    const Eigen::VectorXd term = (f * e).real();
    if (v.size() == 0) v = term; else v += term;
  }
  return v;
}

void ScalarFourier::validate() const {
  for (const auto& [k, f] : modes) {
    check_wave_vector(k, dim);
    auto it = modes.find(negate(k));
    if (it == modes.end() || std::abs(it->second - std::conj(f)) > 1e-14) {
      throw InputError("Fourier forcing must satisfy fhat(-kappa) = conj(fhat(kappa))");
    }
  }
}

ScalarFourier ScalarFourier::cosine(int dim, WaveVector kappa, double amplitude) {
  check_wave_vector(kappa, dim);
  ScalarFourier f;
  f.dim = dim;
  if (kappa == WaveVector{0, 0}) {
    f.modes[kappa] = amplitude;
  } else {
    f.modes[kappa] = 0.5 * amplitude;
    f.modes[negate(kappa)] = 0.5 * amplitude;
  }
  return f;
}

double ScalarFourier::value(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& [k, f] : modes) s += (f * std::polar(1.0, phase(k, x, dim))).real();
  return s;
}

FourierForcing ScalarFourier::moments(int num_moments) const {
  FourierForcing f;
  f.dim = dim;
  const double c = std::sqrt(4.0 * std::numbers::pi);
  for (const auto& [k, fh] : modes) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(num_moments);
    v[0] = c * fh;
    f.modes[k] = v;
  }
  return f;
}

Eigen::VectorXd ReferenceSolution::value(std::span<const double> x) const {
  Eigen::VectorXcd s;
  for (const auto& [k, u] : modes) {
    const Complex e = std::polar(1.0, phase(k, x, dim));
    if (s.size() == 0) s = u * e; else s += u * e;
  }
  return s.real();
}

Eigen::VectorXd ReferenceSolution::derivative(std::span<const double> x, int axis) const {
  Eigen::VectorXcd s;
  for (const auto& [k, u] : modes) {
    const Complex e = std::polar(1.0, phase(k, x, dim)) * Complex(0.0, kTwoPi * k[axis]);
    if (s.size() == 0) s = u * e; else s += u * e;
  }
  return s.real();
}

double ReferenceSolution::distance(const ReferenceSolution& other) const {
  double s = 0.0;
  for (const auto& [k, u] : modes) {
    auto it = other.modes.find(k);
    if (it == other.modes.end()) {
      s += u.squaredNorm();
    } else {
      const auto n = std::min(u.size(), it->second.size());
      s += (u.head(n) - it->second.head(n)).squaredNorm();
      s += u.tail(u.size() - n).squaredNorm() + it->second.tail(it->second.size() - n).squaredNorm();
    }
  }
  for (const auto& [k, u] : other.modes) {
    if (!modes.contains(k)) s += u.squaredNorm();
  }
  return std::sqrt(s);
}

double ReferenceSolution::norm() const {
  double s = 0.0;
  for (const auto& [k, u] : modes) s += u.squaredNorm();
  return std::sqrt(s);
}

double ReferenceSolution::component_norm(int component) const {
  double s = 0.0;
  for (const auto& [k, u] : modes) s += std::norm(u[component]);
  return std::sqrt(s);
}

SmoothField ReferenceSolution::as_field() const {
  return {[self = *this](std::span<const double> x) { return self.value(x); },
          [self = *this](std::span<const double> x, int axis) { return self.derivative(x, axis); }};
}

ReferenceSolution pn_fourier_solve(double eps, double sigma_t, double sigma_a, const FourierForcing& forcing,
                                   const MomentMatrices& matrices) {
  forcing.validate();
  const int n = matrices.size();
  const auto q = scattering_q(sigma_t, sigma_a, eps, n);
  ReferenceSolution sol;
  sol.dim = forcing.dim;
  for (const auto& [k, fh] : forcing.modes) {
    if (fh.size() != n) throw InputError("forcing modes must have one entry per moment");
    Eigen::MatrixXcd m = q.q.cast<Complex>().asDiagonal();
    for (int axis = 0; axis < forcing.dim; ++axis) {
      if (k[axis] != 0) {
        m += Complex(0.0, kTwoPi * k[axis]) * matrices.a[physical_direction(forcing.dim, axis)].cast<Complex>();
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    Eigen::VectorXcd u = lu.solve(eps * fh);
    if (!u.allFinite()) throw InternalError("singular modal P_N system");
    sol.modes[k] = u;
  }
  return sol;
}

KineticSolution::KineticSolution(double eps, double sigma_t, double sigma_a, ScalarFourier forcing,
                                 SphereQuadrature quadrature)
    : eps_(eps), sigma_t_(sigma_t), sigma_a_(sigma_a), forcing_(std::move(forcing)), quadrature_(std::move(quadrature)) {
  check_cross_sections(sigma_t, sigma_a, eps);
  forcing_.validate();
  // ubar = (c ubar + eps f) G with c = sigma_t/eps - eps sigma_a and G the mean resolvent,
  // so ubar = eps f G / (1 - c G).
  for (const auto& [k, f] : forcing_.modes) {
    const Complex g = mean_resolvent(k);
    // 1 - c G = (1 - a G) + eps sigma_a G with a = sigma_t/eps; the first part
    // is averaged directly since it is O(eps^2) and cancels when formed.
    const double a = sigma_t_ / eps_;
    const Complex streaming = quadrature_.integrate([&](const Vec3& w) {
      const Complex ik(0.0, kTwoPi * k_dot_omega(k, w));
      return ik / (a + ik);
    }) / (4.0 * std::numbers::pi);
    const Complex denom = streaming + eps_ * sigma_a_ * g;
    if (std::abs(denom) == 0.0) throw InternalError("kinetic consistency condition is singular");
    scalar_flux_[k] = eps_ * f * g / denom;
  }
}

double KineticSolution::k_dot_omega(const WaveVector& kappa, const Vec3& omega) const {
  if (forcing_.dim == 1) return kappa[0] * omega[2];
  return kappa[0] * omega[0] + kappa[1] * omega[1];
}

Complex KineticSolution::mean_resolvent(const WaveVector& kappa) const {
  const double a = sigma_t_ / eps_;
  const Complex s = quadrature_.integrate([&](const Vec3& w) {
    return 1.0 / Complex(a, kTwoPi * k_dot_omega(kappa, w));
  });
  return s / (4.0 * std::numbers::pi);
}

Complex KineticSolution::mode(const WaveVector& kappa, const Vec3& omega) const {
  auto it = scalar_flux_.find(kappa);
  if (it == scalar_flux_.end()) return 0.0;
  const double c = sigma_t_ / eps_ - eps_ * sigma_a_;
  return (c * it->second + eps_ * forcing_.modes.at(kappa)) /
         Complex(sigma_t_ / eps_, kTwoPi * k_dot_omega(kappa, omega));
}

double KineticSolution::value(std::span<const double> x, const Vec3& omega) const {
  double s = 0.0;
  for (const auto& [k, f] : forcing_.modes) s += (mode(k, omega) * std::polar(1.0, phase(k, x, forcing_.dim))).real();
  return s;
}

ReferenceSolution KineticSolution::moments(int order) const {
  const MomentBasis basis(order);
  ReferenceSolution sol;
  sol.dim = forcing_.dim;
  std::vector<Eigen::VectorXd> m;
  m.reserve(quadrature_.size());
  for (const auto& w : quadrature_.nodes) m.push_back(eval_basis(w, basis));
  for (const auto& [k, f] : forcing_.modes) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(basis.size());
    for (std::size_t q = 0; q < quadrature_.size(); ++q) {
      acc += (quadrature_.weights[q] * mode(k, quadrature_.nodes[q])) * m[q].cast<Complex>();
    }
    sol.modes[k] = acc;
  }
  return sol;
}

double KineticSolution::angular_distance(const ReferenceSolution& pn) const {
  int moments = 0;
  for (const auto& [k, u] : pn.modes) moments = static_cast<int>(u.size());
  const int order = static_cast<int>(std::lround(std::sqrt(static_cast<double>(moments)))) - 1;
  const MomentBasis basis(std::max(order, 0));
  double s = 0.0;
  for (std::size_t q = 0; q < quadrature_.size(); ++q) {
    const auto& w = quadrature_.nodes[q];
    const Eigen::VectorXd m = eval_basis(w, basis);
    for (const auto& [k, f] : forcing_.modes) {
      Complex approx = 0.0;
      if (auto it = pn.modes.find(k); it != pn.modes.end()) approx = m.cast<Complex>().dot(it->second);
      s += quadrature_.weights[q] * std::norm(mode(k, w) - approx);
    }
  }
  return std::sqrt(s);
}

KineticSolution kinetic_fourier_solve(double eps, double sigma_t, double sigma_a, const ScalarFourier& forcing,
                                      const SphereQuadrature& quadrature) {
  return KineticSolution(eps, sigma_t, sigma_a, forcing, quadrature);
}

VectorFunction manufactured_forcing(const SmoothField& exact, const MaterialField& materials,
                                    const MomentMatrices& matrices, int dim) {
  return [exact, materials, matrices, dim](std::span<const double> x) -> Eigen::VectorXd {
    const Eigen::VectorXd u = exact.value(x);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(u.size());
    for (int axis = 0; axis < dim; ++axis) r += matrices.a[physical_direction(dim, axis)] * exact.derivative(x, axis);
    const auto qe = materials.q_entries(x);
    r[0] += qe[0] * u[0];
    r.tail(u.size() - 1) += qe[1] * u.tail(u.size() - 1);
    return r / materials.eps();
  };
}

}  // namespace pndg
