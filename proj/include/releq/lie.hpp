#pragma once

// Cocycles, modified coadjoint actions, isotropy and Casimirs for the two
// symmetry groups used here: SE(2) acting on point vortices and SO(3) x SO(3)
// acting on the affine rigid body.

#include "releq/se2.hpp"
#include "releq/so3_pair.hpp"
#include "releq/vortex.hpp"

#include <array>

namespace releq {

namespace detail {
/// A fixed collision-free configuration; the cocycle does not depend on it.
inline VortexState cocycle_base_point(std::size_t n) {
  VortexState z(n);
  for (std::size_t k = 0; k < n; ++k)
    z[k] = std::polar(1.0 + 0.25 * static_cast<double>(k), 0.7 * static_cast<double>(k));
  return z;
}
}  // namespace detail

/// theta(g) = Phi(g . z) - Coad_g Phi(z) at the given base point.
inline SE2Momentum se2_cocycle_at(const Vorticities& gamma, const SE2Element& g, std::span<const Complex> base) {
  return vortex_momentum(gamma, act(g, base)) - se2_coad(g, vortex_momentum(gamma, base));
}

inline SE2Momentum se2_cocycle(const Vorticities& gamma, const SE2Element& g) {
  return se2_cocycle_at(gamma, g, detail::cocycle_base_point(gamma.size()));
}

/// Coad^theta_g(mu) = Coad_g(mu) + theta(g).
inline SE2Momentum se2_coad_modified(const Vorticities& gamma, const SE2Element& g, const SE2Momentum& mu) {
  return se2_coad(g, mu) + se2_cocycle(gamma, g);
}

struct Isotropy {
  int dimension = 0;
  bool compact = false;

  bool operator==(const Isotropy&) const = default;
};

/**
 * Isotropy subgroup of mu for the action that makes the vortex momentum map
 * equivariant. Balanced vorticity uses the standard coadjoint action:
 * axis points are fixed by all of SE(2); off-axis points by the translations
 * along c. Otherwise the modified orbits are paraboloids and every isotropy
 * group is a circle of rotations about -i c / Gamma.
 */
inline Isotropy se2_isotropy(const Vorticities& gamma, const SE2Momentum& mu) {
  if (!gamma.balanced()) return {1, true};
  if (mu.c == Complex{}) return {3, false};
  return {1, false};
}

/**
 * Orbit invariant: |c| for balanced vorticity, r - |c|^2 / (2 Gamma) otherwise.
 */
inline double se2_casimir(const Vorticities& gamma, const SE2Momentum& mu) {
  if (gamma.balanced()) return std::abs(mu.c);
  return mu.r - std::norm(mu.c) / (2.0 * gamma.total());
}

/// Basis (columns) of the isotropy algebra of (mu_L, mu_R) under (A mu_L, B mu_R).
inline Mat so3_pair_isotropy_algebra(const SO3PairMomentum& mu, double tol = 1e-9) {
  Mat l = Mat::Zero(6, 6);
  // d/dt (exp(t xiL) muL) = xiL x muL = -hat(muL) xiL
  l.topLeftCorner<3, 3>() = -hat(mu.muL);
  l.bottomRightCorner<3, 3>() = -hat(mu.muR);
  return null_space(l, 1e-10, tol);
}

}  // namespace releq
