#pragma once

// Semi-analytic reference solutions for constant cross sections, built mode
// by mode from Fourier series on the periodic unit cell, and manufactured
// forcing for variable coefficients.

#include "pndg/assembly.hpp"
#include "pndg/harmonics.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <span>

namespace pndg {

using WaveVector = std::array<int, 2>;
using Complex = std::complex<double>;

/// f(x) = sum_kappa fhat_kappa exp(2 pi i kappa.x) with fhat_{-kappa} = conj(fhat_kappa).
/// For dim 1 the second wave-vector entry is zero.
struct FourierForcing {
  int dim = 1;
  std::map<WaveVector, Eigen::VectorXcd> modes;

  /// Throws InputError unless conjugate symmetry holds to 1e-14.
  void validate() const;
  /// a cos(2 pi kappa.x) in every component, scaled by `amplitude`.
  static FourierForcing cosine(int dim, WaveVector kappa, const Eigen::VectorXd& amplitude);
  Eigen::VectorXd value(std::span<const double> x) const;
};

/// Scalar isotropic forcing f(x) (independent of direction), same convention.
struct ScalarFourier {
  int dim = 1;
  std::map<WaveVector, Complex> modes;

  void validate() const;
  static ScalarFourier cosine(int dim, WaveVector kappa, double amplitude);
  double value(std::span<const double> x) const;
  /// Moments <m f> = sqrt(4 pi) f e_1 of the isotropic source.
  FourierForcing moments(int num_moments) const;
};

/// Smooth R^L-valued field with first derivatives.
struct SmoothField {
  std::function<Eigen::VectorXd(std::span<const double>)> value;
  std::function<Eigen::VectorXd(std::span<const double>, int axis)> derivative;
};

struct ReferenceSolution {
  int dim = 1;
  std::map<WaveVector, Eigen::VectorXcd> modes;

  Eigen::VectorXd value(std::span<const double> x) const;
  Eigen::VectorXd derivative(std::span<const double> x, int axis) const;
  /// L2(X) norm of the difference to another modal field (Parseval).
  double distance(const ReferenceSolution& other) const;
  double norm() const;
  /// L2(X) norm of selected components.
  double component_norm(int component) const;
  SmoothField as_field() const;
};

/// Solves (2 pi i kappa.A + Q) uhat = eps fhat mode by mode.
ReferenceSolution pn_fourier_solve(double eps, double sigma_t, double sigma_a, const FourierForcing& forcing,
                                   const MomentMatrices& matrices);

/// Exact solution of the kinetic equation for isotropic forcing.
class KineticSolution {
 public:
  KineticSolution(double eps, double sigma_t, double sigma_a, ScalarFourier forcing, SphereQuadrature quadrature);

  /// u(x, omega).
  double value(std::span<const double> x, const Vec3& omega) const;
  /// Modal amplitude uhat_kappa(omega).
  Complex mode(const WaveVector& kappa, const Vec3& omega) const;
  /// Scalar flux amplitude (1/4pi) <uhat_kappa>.
  Complex scalar_flux(const WaveVector& kappa) const { return scalar_flux_.at(kappa); }
  /// Exact angular moments <m u> up to the given order.
  ReferenceSolution moments(int order) const;
  /// || u - m^T u_pn ||_{L2(X x S)} for a P_N modal solution.
  double angular_distance(const ReferenceSolution& pn) const;

  const SphereQuadrature& quadrature() const { return quadrature_; }
  /// (1/4pi) <1/(sigma_t/eps + 2 pi i kappa.omega)> by quadrature.
  Complex mean_resolvent(const WaveVector& kappa) const;

 private:
  double k_dot_omega(const WaveVector& kappa, const Vec3& omega) const;

  double eps_, sigma_t_, sigma_a_;
  ScalarFourier forcing_;
  SphereQuadrature quadrature_;
  std::map<WaveVector, Complex> scalar_flux_;
};

KineticSolution kinetic_fourier_solve(double eps, double sigma_t, double sigma_a, const ScalarFourier& forcing,
                                      const SphereQuadrature& quadrature);

/// f = (A . grad u + Q u) / eps, so that u is the exact P_N solution.
VectorFunction manufactured_forcing(const SmoothField& exact, const MaterialField& materials,
                                    const MomentMatrices& matrices, int dim);

}  // namespace pndg
