#pragma once

// Helpers shared by the unit and acceptance suites.

#include "pndg/assembly.hpp"
#include "pndg/reference.hpp"

#include <random>

namespace pndg::testing {

/// Elementwise L2 projection of every component of a smooth field.
inline MomentField project_field(const SmoothField& exact, const DofLayout& layout, int points = 20) {
  MomentField out(layout);
  const auto& mesh = *layout.mesh;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int p = 0; p < layout.num_moments(); ++p) {
      const auto c = l2_project([&](std::span<const double> x) { return exact.value(x)[p]; }, mesh, e,
                                *layout.basis, points);
      out.coefficients.segment(layout.index(e, p, 0), layout.basis->size()) = c;
    }
  }
  return out;
}

/// Uniform random coefficients in [-1, 1].
inline MomentField random_field(const DofLayout& layout, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd c(layout.size());
  for (auto& v : c) v = u(rng);
  return MomentField(layout, c);
}

struct ConsistencyResult {
  /// max over coarse test functions v of |a_h(u*, v) - f(v)| / ||v||_Q.
  double worst = 0.0;
  int tested = 0;
};

/// Galerkin consistency of the 1D scheme. The exact P_N solution is
/// represented by its L2 projection onto a fine degree (error far below the
/// tolerance); the rows of the fine operator belonging to the degree-k test
/// functions then give a_h(u*, v) - f(v). The orthonormal Legendre basis is
/// hierarchical, so the first k+1 fine functions are the coarse ones.
inline ConsistencyResult consistency_1d(const ReferenceSolution& exact, const VectorFunction& forcing,
                                        const MaterialField& materials, const MomentMatrices& matrices, int cells,
                                        int degree, int fine_degree = 12) {
  const auto mesh = build_mesh(1, {cells});
  const LocalBasis fine(fine_degree, 1);
  const auto system = assemble(mesh, fine, matrices, materials, forcing);
  const auto u = project_field(exact.as_field(), system.layout, fine_degree + 8);
  const Eigen::VectorXd r = system.matrix * u.coefficients - system.rhs;
  const auto q = scattering_q(materials.sigma_t(std::array{0.5}), materials.sigma_a(std::array{0.5}), materials.eps(),
                              matrices.size())
                     .q;
  ConsistencyResult out;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int p = 0; p < matrices.size(); ++p) {
      for (int j = 0; j <= degree; ++j) {
        // v = psi_j e_p has ||v||_Q = sqrt(q_p).
        out.worst = std::max(out.worst, std::abs(r[system.layout.index(e, p, j)]) / std::sqrt(q[p]));
        ++out.tested;
      }
    }
  }
  return out;
}

}  // namespace pndg::testing
