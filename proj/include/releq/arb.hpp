#pragma once

#include "releq/gsystem.hpp"
#include "releq/lie.hpp"
#include "releq/so3_pair.hpp"

#include <string>
#include <vector>

namespace releq {

/// Saint-Venant type elastic potential V(Q) = (kappa / 4) ||Q^T Q - I||_F^2.
struct ElasticPotential {
  double kappa = 1.0;

  double value(const Mat3& q) const { return kappa / 4.0 * (q.transpose() * q - Mat3::Identity()).squaredNorm(); }
  Mat3 gradient(const Mat3& q) const { return kappa * q * (q.transpose() * q - Mat3::Identity()); }
};

inline double arb_energy(const ARBState& s, const ElasticPotential& pot) {
  return 0.5 * s.P.squaredNorm() + pot.value(s.Q);
}

/// Phi_L = (P Q^T - Q P^T) / 2, Phi_R = (P^T Q - Q^T P) / 2, as 3-vectors.
inline SO3PairMomentum arb_momentum(const ARBState& s) {
  return {vee(0.5 * (s.P * s.Q.transpose() - s.Q * s.P.transpose())),
          vee(0.5 * (s.P.transpose() * s.Q - s.Q.transpose() * s.P))};
}

/// Canonical flow: Q' = P, P' = -grad V(Q).
inline ARBState arb_field(const ARBState& s, const ElasticPotential& pot) {
  return {s.P, -pot.gradient(s.Q)};
}

/// Cotangent-lifted generator: Q' = hat(xiL) Q - Q hat(xiR), P' likewise.
inline ARBState arb_generator(const Vec3& xi_l, const Vec3& xi_r, const ARBState& s) {
  const Mat3 l = hat(xi_l), r = hat(xi_r);
  return {l * s.Q - s.Q * r, l * s.P - s.P * r};
}

/**
 * Affine rigid body on T*GL+(3) with flat kinetic metric and an elastic
 * potential, as a GSystem under SO(3) x SO(3). State is ARBState::to_vector().
 */
class ArbSystem {
 public:
  explicit ArbSystem(ElasticPotential pot = {}) : pot_(pot) {
    if (!(pot_.kappa > 0.0)) throw InputError("stiffness must be positive");
    symplectic_ = Mat::Zero(18, 18);
    symplectic_.topRightCorner(9, 9) = Mat::Identity(9, 9);
    symplectic_.bottomLeftCorner(9, 9) = -Mat::Identity(9, 9);
  }

  const ElasticPotential& potential() const { return pot_; }
  int state_dim() const { return 18; }
  int group_dim() const { return 6; }
  const Mat& symplectic_matrix() const { return symplectic_; }

  /// Trace pairing tr(A^T B) on so(3)* x so(3)*, i.e. twice the dot product
  /// of hat-map vectors (Phi_L carries a factor 1/2).
  Mat pairing_matrix() const { return 2.0 * Mat::Identity(6, 6); }

  double energy(const Vec& x) const { return arb_energy(ARBState::from_vector(x), pot_); }

  Vec energy_gradient(const Vec& x) const {
    const ARBState s = ARBState::from_vector(x);
    return ARBState{pot_.gradient(s.Q), s.P}.to_vector();
  }

  Vec momentum(const Vec& x) const { return arb_momentum(ARBState::from_vector(x)).to_vector(); }

  Mat momentum_jacobian(const Vec& x) const {
    const ARBState s = ARBState::from_vector(x);
    Mat jac(6, 18);
    // Phi is bilinear in (Q, P); differentiate along each coordinate direction.
    for (int i = 0; i < 18; ++i) {
      Vec e = Vec::Zero(18);
      e[i] = 1.0;
      const ARBState d = ARBState::from_vector(e);
      const SO3PairMomentum m1 = arb_momentum({d.Q, s.P});
      const SO3PairMomentum m2 = arb_momentum({s.Q, d.P});
      jac.col(i) = m1.to_vector() + m2.to_vector();
    }
    return jac;
  }

  Vec generator(const Vec& xi, const Vec& x) const {
    return arb_generator(xi.head<3>(), xi.tail<3>(), ARBState::from_vector(x)).to_vector();
  }

  Vec group_motion(const Vec& xi, const Vec& x, double t) const {
    const ARBState s = ARBState::from_vector(x);
    const Mat3 a = so3_exp(t * Vec3(xi.head<3>()));
    const Mat3 b = so3_exp(t * Vec3(xi.tail<3>()));
    return ARBState{a * s.Q * b.transpose(), a * s.P * b.transpose()}.to_vector();
  }

  Mat isotropy_algebra(const Vec& mu) const { return so3_pair_isotropy_algebra(SO3PairMomentum::from_vector(mu)); }

  /// Phase space is T*GL+(3).
  bool in_domain(const Vec& x) const {
    return x.size() == 18 && x.allFinite() && ARBState::from_vector(x).Q.determinant() > 0.0;
  }

  void check_domain(const Vec& x) const {
    if (x.size() != 18) throw InputError("ARB state has wrong dimension");
    if (!in_domain(x)) throw DomainError("ARB state outside GL+(3)");
  }

  std::vector<std::string> component_names() const {
    std::vector<std::string> names;
    for (const char* m : {"Q", "P"})
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) names.push_back(std::string(m) + std::to_string(i) + std::to_string(j));
    return names;
  }

 private:
  ElasticPotential pot_;
  Mat symplectic_;
};

static_assert(GSystem<ArbSystem>);

}  // namespace releq
