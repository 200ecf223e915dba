#pragma once

// Random samplers and independent oracles shared by the test suites.

#include "releq/io.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

namespace releq::testing {

inline constexpr Complex I{0.0, 1.0};

inline SE2Element random_se2(Rng& rng, double scale = 2.0) {
  return {{uniform(rng, -scale, scale), uniform(rng, -scale, scale)}, uniform(rng, -kPi, kPi)};
}

inline SE2Algebra random_se2_algebra(Rng& rng) {
  return {{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}, uniform(rng, -1.0, 1.0)};
}

inline SE2Momentum random_se2_momentum(Rng& rng) {
  return {{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)}, uniform(rng, -2.0, 2.0)};
}

/// Points uniform in the unit disc with pairwise distances at least min_sep.
inline VortexState random_vortex_state(Rng& rng, std::size_t n, double min_sep = 0.5) {
  VortexState z;
  do {
    z.clear();
    for (std::size_t k = 0; k < n; ++k) z.push_back(std::polar(std::sqrt(uniform(rng, 0.0, 1.0)), uniform(rng, -kPi, kPi)));
  } while (min_pair_distance(z) < min_sep);
  return z;
}

inline std::vector<double> random_gamma(Rng& rng, std::size_t n) {
  std::vector<double> g;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = uniform(rng, 0.3, 2.0);
    g.push_back(uniform(rng, 0.0, 1.0) < 0.5 ? -v : v);
  }
  return g;
}

/// Vorticities summing to zero.
inline std::vector<double> random_balanced_gamma(Rng& rng, std::size_t n) {
  std::vector<double> g = random_gamma(rng, n - 1);
  double s = 0.0;
  for (double v : g) s += v;
  if (std::abs(s) < 0.3) {
    g[0] += 1.0;
    s += 1.0;
  }
  g.push_back(-s);
  return g;
}

inline ARBState random_arb_state(Rng& rng, double spread = 0.3) {
  ARBState s;
  do {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        s.Q(i, j) = (i == j ? 1.0 : 0.0) + uniform(rng, -spread, spread);
        s.P(i, j) = uniform(rng, -1.0, 1.0);
      }
  } while (s.Q.determinant() <= 0.1);
  return s;
}

// --- SE(2) as 3x3 homogeneous matrices -------------------------------------

inline Mat3 homogeneous(const SE2Element& g) {
  Mat3 m;
  m << std::cos(g.phi), -std::sin(g.phi), g.v.real(), std::sin(g.phi), std::cos(g.phi), g.v.imag(), 0, 0, 1;
  return m;
}

inline Mat3 homogeneous(const SE2Algebra& xi) {
  Mat3 m;
  m << 0, -xi.omega, xi.w.real(), xi.omega, 0, xi.w.imag(), 0, 0, 0;
  return m;
}

inline SE2Element from_homogeneous(const Mat3& m) { return {{m(0, 2), m(1, 2)}, std::atan2(m(1, 0), m(0, 0))}; }

inline SE2Algebra algebra_from_homogeneous(const Mat3& m) { return {{m(0, 2), m(1, 2)}, m(1, 0)}; }

inline double element_distance(const SE2Element& a, const SE2Element& b) {
  return std::abs(a.v - b.v) + std::abs(wrap_angle(a.phi - b.phi));
}

// --- vortex oracles --------------------------------------------------------

/// Term-by-term h = -(1/2pi) sum_{k<l} Gamma_k Gamma_l log|z_k - z_l|.
inline double energy_oracle(const std::vector<double>& g, const VortexState& z) {
  double h = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k)
    for (std::size_t l = k + 1; l < z.size(); ++l) h -= g[k] * g[l] * std::log(std::abs(z[k] - z[l])) / (2.0 * kPi);
  return h;
}

/// Biot-Savart: conj(dz_k/dt) = (1 / 2 pi i) sum_{l != k} Gamma_l / (z_k - z_l).
inline VortexState velocity_oracle(const std::vector<double>& g, const VortexState& z) {
  VortexState v(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    Complex s{};
    for (std::size_t l = 0; l < z.size(); ++l)
      if (l != k) s += g[l] / (z[k] - z[l]);
    v[k] = std::conj(s / (2.0 * kPi * I));
  }
  return v;
}

/// Minimum over g in SE(2) of the Euclidean distance between g.z and w (closed-form Procrustes).
inline double orbit_distance(const VortexState& z, const VortexState& w) {
  Complex mz{}, mw{};
  for (std::size_t k = 0; k < z.size(); ++k) {
    mz += z[k];
    mw += w[k];
  }
  mz /= static_cast<double>(z.size());
  mw /= static_cast<double>(w.size());
  Complex cross{};
  for (std::size_t k = 0; k < z.size(); ++k) cross += std::conj(z[k] - mz) * (w[k] - mw);
  const Complex rot = std::abs(cross) > 0.0 ? cross / std::abs(cross) : Complex(1.0, 0.0);
  double d = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) d += std::norm(rot * (z[k] - mz) + mw - w[k]);
  return std::sqrt(d);
}

/// Central-difference directional derivative of f at x along v.
inline double directional_fd(const std::function<double(const Vec&)>& f, const Vec& x, const Vec& v, double h = 1e-6) {
  return (f(x + h * v) - f(x - h * v)) / (2.0 * h);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline double rel_err(const Vec& a, const Vec& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace releq::testing
