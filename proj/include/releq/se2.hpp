#pragma once

#include "releq/common.hpp"

#include <cmath>

namespace releq {

/// Reduces an angle to (-pi, pi].
inline double wrap_angle(double phi) {
  double r = std::remainder(phi, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

/**
 * Element of SE(2) = R^2 x| SO(2) acting on the plane by z -> e^{i phi} z + v.
 */
struct SE2Element {
  Complex v{0.0, 0.0};
  double phi = 0.0;

  SE2Element() = default;
  SE2Element(Complex translation, double angle) : v(translation), phi(wrap_angle(angle)) {}

  static SE2Element identity() { return {}; }
  Complex rotation() const { return std::polar(1.0, phi); }
};

/// Element of se(2): infinitesimal translation w and angular velocity omega.
/// Generates the vector field z' = w + i omega z.
struct SE2Algebra {
  Complex w{0.0, 0.0};
  double omega = 0.0;

  SE2Algebra operator+(const SE2Algebra& o) const { return {w + o.w, omega + o.omega}; }
  SE2Algebra operator-(const SE2Algebra& o) const { return {w - o.w, omega - o.omega}; }
  SE2Algebra operator*(double s) const { return {s * w, s * omega}; }

  Vec to_vector() const { return Vec3(w.real(), w.imag(), omega); }
  static SE2Algebra from_vector(const Vec& x) { return {{x[0], x[1]}, x[2]}; }
};

/// Element of se(2)* identified with C x R.
struct SE2Momentum {
  Complex c{0.0, 0.0};
  double r = 0.0;

  SE2Momentum operator+(const SE2Momentum& o) const { return {c + o.c, r + o.r}; }
  SE2Momentum operator-(const SE2Momentum& o) const { return {c - o.c, r - o.r}; }

  Vec to_vector() const { return Vec3(c.real(), c.imag(), r); }
  static SE2Momentum from_vector(const Vec& x) { return {{x[0], x[1]}, x[2]}; }
};

inline double distance(const SE2Momentum& a, const SE2Momentum& b) {
  return (a.to_vector() - b.to_vector()).norm();
}

/// <(c, r), (w, omega)> = Re(conj(c) w) + r omega.
inline double pairing(const SE2Momentum& mu, const SE2Algebra& xi) {
  return (std::conj(mu.c) * xi.w).real() + mu.r * xi.omega;
}

inline Complex se2_act(const SE2Element& g, Complex z) { return g.rotation() * z + g.v; }

inline SE2Element se2_compose(const SE2Element& g1, const SE2Element& g2) {
  return {g1.v + g1.rotation() * g2.v, g1.phi + g2.phi};
}

inline SE2Element se2_inverse(const SE2Element& g) {
  return {-std::conj(g.rotation()) * g.v, -g.phi};
}

/// exp(t xi): the time-t flow of z' = w + i omega z.
inline SE2Element se2_exp(const SE2Algebra& xi, double t = 1.0) {
  const double angle = xi.omega * t;
  Complex v;
  if (std::abs(angle) < 1e-8) {
    // series of (e^{i a} - 1) / (i a) = 1 + i a / 2 - a^2 / 6
    const Complex ia{0.0, angle};
    v = xi.w * t * (1.0 + ia / 2.0 + ia * ia / 6.0);
  } else {
    v = xi.w * (std::polar(1.0, angle) - 1.0) / Complex(0.0, xi.omega);
  }
  return {v, angle};
}

/// Ad_{(v, phi)}(w, omega) = (e^{i phi} w - i omega v, omega).
inline SE2Algebra se2_adjoint(const SE2Element& g, const SE2Algebra& xi) {
  return {g.rotation() * xi.w - Complex(0.0, xi.omega) * g.v, xi.omega};
}

/// Standard coadjoint action Coad_g = Ad*_{g^{-1}}: (c, r) -> (e^{i phi} c, r - Im(conj(c') v)).
inline SE2Momentum se2_coad(const SE2Element& g, const SE2Momentum& mu) {
  const Complex c = g.rotation() * mu.c;
  return {c, mu.r - (std::conj(c) * g.v).imag()};
}

}  // namespace releq
