#pragma once

#include "releq/gsystem.hpp"
#include "releq/se2.hpp"

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace releq {

/// Pairwise distance below which vortex positions count as a collision.
inline constexpr double kCollisionTolerance = 1e-8;

/// Vortex strengths Gamma_1..Gamma_N (N >= 2, all nonzero).
class Vorticities {
 public:
  explicit Vorticities(std::vector<double> gamma) : gamma_(std::move(gamma)) {
    if (gamma_.size() < 2) throw InputError("need at least two vortices");
    for (double g : gamma_)
      if (g == 0.0 || !std::isfinite(g)) throw InputError("vorticities must be finite and nonzero");
    total_ = std::accumulate(gamma_.begin(), gamma_.end(), 0.0);
  }

  std::size_t size() const { return gamma_.size(); }
  double operator[](std::size_t k) const { return gamma_[k]; }
  double total() const { return total_; }
  const std::vector<double>& values() const { return gamma_; }

  /// Total vorticity vanishes (standard coadjoint equivariance).
  bool balanced() const { return std::abs(total_) <= 1e-12; }

 private:
  std::vector<double> gamma_;
  double total_ = 0.0;
};

using VortexState = std::vector<Complex>;

inline double min_pair_distance(std::span<const Complex> z) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < z.size(); ++k)
    for (std::size_t l = k + 1; l < z.size(); ++l) d = std::min(d, std::abs(z[k] - z[l]));
  return d;
}

inline bool collision_free(std::span<const Complex> z) {
  return min_pair_distance(z) > kCollisionTolerance;
}

namespace detail {
inline void check_sizes(const Vorticities& gamma, std::span<const Complex> z) {
  if (gamma.size() != z.size()) throw InputError("vorticity and position counts differ");
}
inline void check_collision_free(std::span<const Complex> z) {
  if (!collision_free(z)) throw DomainError("vortex collision");
}
}  // namespace detail

/// h = -(1/2pi) sum_{k<l} Gamma_k Gamma_l log|z_k - z_l|.
inline double vortex_energy(const Vorticities& gamma, std::span<const Complex> z) {
  detail::check_sizes(gamma, z);
  detail::check_collision_free(z);
  double sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k)
    for (std::size_t l = k + 1; l < z.size(); ++l)
      sum += gamma[k] * gamma[l] * 0.5 * std::log(std::norm(z[k] - z[l]));
  return -sum / (2.0 * kPi);
}

/// dz_k/dt = -(1 / 2 pi i) sum_{l != k} Gamma_l / conj(z_k - z_l).
inline VortexState vortex_field(const Vorticities& gamma, std::span<const Complex> z) {
  detail::check_sizes(gamma, z);
  detail::check_collision_free(z);
  const Complex coef = -1.0 / Complex(0.0, 2.0 * kPi);
  VortexState vel(z.size(), Complex{});
  for (std::size_t k = 0; k < z.size(); ++k) {
    Complex s{};
    for (std::size_t l = 0; l < z.size(); ++l)
      if (l != k) s += gamma[l] / std::conj(z[k] - z[l]);
    vel[k] = coef * s;
  }
  return vel;
}

/// (Phi_C, Phi_R) = (i sum Gamma_k z_k, sum Gamma_k |z_k|^2 / 2).
inline SE2Momentum vortex_momentum(const Vorticities& gamma, std::span<const Complex> z) {
  detail::check_sizes(gamma, z);
  Complex c{};
  double r = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    c += gamma[k] * z[k];
    r += gamma[k] * std::norm(z[k]) / 2.0;
  }
  return {Complex(0.0, 1.0) * c, r};
}

/// Rows: gradients of Re Phi_C, Im Phi_C, Phi_R in (x_1, y_1, ..., x_N, y_N).
inline Mat vortex_momentum_jacobian(const Vorticities& gamma, std::span<const Complex> z) {
  detail::check_sizes(gamma, z);
  const int n = static_cast<int>(z.size());
  Mat jac = Mat::Zero(3, 2 * n);
  for (int k = 0; k < n; ++k) {
    jac(0, 2 * k + 1) = -gamma[k];
    jac(1, 2 * k) = gamma[k];
    jac(2, 2 * k) = gamma[k] * z[k].real();
    jac(2, 2 * k + 1) = gamma[k] * z[k].imag();
  }
  return jac;
}

/// z_k' = w + i omega z_k.
inline VortexState vortex_generator(const SE2Algebra& xi, std::span<const Complex> z) {
  VortexState v(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) v[k] = xi.w + Complex(0.0, xi.omega) * z[k];
  return v;
}

inline VortexState act(const SE2Element& g, std::span<const Complex> z) {
  VortexState out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = se2_act(g, z[k]);
  return out;
}

inline Vec to_real(std::span<const Complex> z) {
  Vec x(2 * z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    x[2 * k] = z[k].real();
    x[2 * k + 1] = z[k].imag();
  }
  return x;
}

inline VortexState to_complex(const Vec& x) {
  if (x.size() % 2 != 0) throw InputError("vortex state vector must have even length");
  VortexState z(x.size() / 2);
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = {x[2 * k], x[2 * k + 1]};
  return z;
}

/**
 * Linearisation at mu of the coadjoint action made equivariant by the vortex
 * momentum map: (w, omega) -> (i omega c + i Gamma w, -Im(conj(c) w)),
 * Gamma the total vorticity. Columns act on (Re w, Im w, omega).
 */
inline Mat se2_coad_linearization(double total_gamma, const SE2Momentum& mu) {
  const double cr = mu.c.real(), ci = mu.c.imag();
  Mat l(3, 3);
  // d c = i omega c + i Gamma w ; d r = -Im(conj(c) w) = ci * wr - cr * wi
  l << 0.0, -total_gamma, -ci,
       total_gamma, 0.0, cr,
       ci, -cr, 0.0;
  return l;
}

/**
 * N point vortices in the plane as a GSystem with the diagonal SE(2) action.
 * State: (x_1, y_1, ..., x_N, y_N).
 */
class VortexSystem {
 public:
  explicit VortexSystem(Vorticities gamma) : gamma_(std::move(gamma)) {
    const int n = static_cast<int>(gamma_.size());
    symplectic_ = Mat::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
      symplectic_(2 * k, 2 * k + 1) = gamma_[k];
      symplectic_(2 * k + 1, 2 * k) = -gamma_[k];
    }
  }

  const Vorticities& vorticities() const { return gamma_; }
  int state_dim() const { return 2 * static_cast<int>(gamma_.size()); }
  int group_dim() const { return 3; }
  const Mat& symplectic_matrix() const { return symplectic_; }

  /// The Hamiltonian of xi_M for the generator convention z' = w + i omega z
  /// is -(Re(conj(c) w) + r omega).
  Mat pairing_matrix() const { return -Mat::Identity(3, 3); }

  double energy(const Vec& x) const { return vortex_energy(gamma_, to_complex(x)); }

  Vec energy_gradient(const Vec& x) const {
    const VortexState z = to_complex(x);
    detail::check_sizes(gamma_, z);
    detail::check_collision_free(z);
    Vec g = Vec::Zero(x.size());
    for (std::size_t k = 0; k < z.size(); ++k)
      for (std::size_t l = k + 1; l < z.size(); ++l) {
        const Complex d = z[k] - z[l];
        const double f = -gamma_[k] * gamma_[l] / (2.0 * kPi * std::norm(d));
        g[2 * k] += f * d.real();
        g[2 * k + 1] += f * d.imag();
        g[2 * l] -= f * d.real();
        g[2 * l + 1] -= f * d.imag();
      }
    return g;
  }

  Vec momentum(const Vec& x) const { return vortex_momentum(gamma_, to_complex(x)).to_vector(); }

  Mat momentum_jacobian(const Vec& x) const { return vortex_momentum_jacobian(gamma_, to_complex(x)); }

  Vec generator(const Vec& xi, const Vec& x) const {
    return to_real(vortex_generator(SE2Algebra::from_vector(xi), to_complex(x)));
  }

  Vec group_motion(const Vec& xi, const Vec& x, double t) const {
    return to_real(act(se2_exp(SE2Algebra::from_vector(xi), t), to_complex(x)));
  }

  Vec act_on(const SE2Element& g, const Vec& x) const { return to_real(act(g, to_complex(x))); }

  Mat isotropy_algebra(const Vec& mu) const {
    const Mat l = se2_coad_linearization(gamma_.balanced() ? 0.0 : gamma_.total(), SE2Momentum::from_vector(mu));
    return null_space(l, 1e-10, 1e-9);
  }

  bool in_domain(const Vec& x) const {
    return x.size() == state_dim() && x.allFinite() && collision_free(to_complex(x));
  }

  void check_domain(const Vec& x) const {
    if (x.size() != state_dim()) throw InputError("vortex state has wrong dimension");
    if (!in_domain(x)) throw DomainError("vortex collision");
  }

  std::vector<std::string> component_names() const {
    std::vector<std::string> names;
    for (std::size_t k = 1; k <= gamma_.size(); ++k) {
      names.push_back("x" + std::to_string(k));
      names.push_back("y" + std::to_string(k));
    }
    return names;
  }

 private:
  Vorticities gamma_;
  Mat symplectic_;
};

static_assert(GSystem<VortexSystem>);

}  // namespace releq
