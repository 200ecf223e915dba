#pragma once

#include "releq/common.hpp"

#include <concepts>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace releq {

/**
 * A Hamiltonian system with constant symplectic structure and a Hamiltonian
 * action of a Lie group G.
 *
 * Conventions shared by every implementation:
 *  - omega(u, v) = u^T S v with S = symplectic_matrix();
 *  - the Hamiltonian vector field of f solves S^T X_f = grad f, i.e. omega(X_f, .) = df;
 *  - algebra elements and momenta are coordinate vectors of length group_dim();
 *    the function generating xi_M is <Phi, xi> = Phi^T K xi with K = pairing_matrix(),
 *    so S^T generator(xi, x) = grad <Phi(x), xi>;
 *  - group_motion(xi, x, t) = exp(t xi) . x;
 *  - isotropy_algebra(mu) returns a basis (columns) of the isotropy algebra of mu
 *    for the (modified) coadjoint action that makes Phi equivariant.
 */
template <class S>
concept GSystem = requires(const S& s, const Vec& x, const Vec& xi, double t) {
  { s.state_dim() } -> std::convertible_to<int>;
  { s.group_dim() } -> std::convertible_to<int>;
  { s.symplectic_matrix() } -> std::convertible_to<Mat>;
  { s.pairing_matrix() } -> std::convertible_to<Mat>;
  { s.energy(x) } -> std::convertible_to<double>;
  { s.energy_gradient(x) } -> std::convertible_to<Vec>;
  { s.momentum(x) } -> std::convertible_to<Vec>;
  { s.momentum_jacobian(x) } -> std::convertible_to<Mat>;
  { s.generator(xi, x) } -> std::convertible_to<Vec>;
  { s.group_motion(xi, x, t) } -> std::convertible_to<Vec>;
  { s.isotropy_algebra(xi) } -> std::convertible_to<Mat>;
  { s.in_domain(x) } -> std::convertible_to<bool>;
  s.check_domain(x);
  { s.component_names() } -> std::convertible_to<std::vector<std::string>>;
};

/// <Phi(x), xi> for the system's pairing.
template <GSystem S>
double momentum_pairing(const S& sys, const Vec& x, const Vec& xi) {
  return sys.momentum(x).dot(sys.pairing_matrix() * xi);
}

/// grad <Phi(x), xi> = J_Phi(x)^T K xi.
template <GSystem S>
Vec momentum_pairing_gradient(const S& sys, const Vec& x, const Vec& xi) {
  return sys.momentum_jacobian(x).transpose() * (sys.pairing_matrix() * xi);
}

/// Solves S^T X = grad h(x).
template <GSystem S>
Vec hamiltonian_field(const S& sys, const Vec& x) {
  sys.check_domain(x);
  return sys.symplectic_matrix().transpose().partialPivLu().solve(sys.energy_gradient(x));
}

/// Central finite-difference gradient of a scalar function.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  Vec xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = xm[i] = x[i];
  }
  return g;
}

/// Central finite-difference Jacobian of a vector function (columns = partials).
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h = 1e-6) {
  Mat jac;
  Vec xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    Vec col = (f(xp) - f(xm)) / (2.0 * h);
    if (i == 0) jac.resize(col.size(), x.size());
    jac.col(i) = col;
    xp[i] = xm[i] = x[i];
  }
  return jac;
}

enum class Method { rk4, implicit_midpoint };

inline std::string to_string(Method m) {
  return m == Method::rk4 ? "rk4" : "implicit_midpoint";
}

inline Method method_from_string(const std::string& s) {
  if (s == "rk4") return Method::rk4;
  if (s == "implicit_midpoint" || s == "midpoint") return Method::implicit_midpoint;
  throw InputError("unknown integration method '" + s + "'");
}

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  Method method = Method::rk4;
  double dt = 0.0;
};

struct MidpointConfig {
  double tol = 1e-12;
  int max_iter = 50;
};

/**
 * Fixed-step integration of X_h from x0. Throws DomainError when a stage
 * leaves the phase space and ConvergenceError when the implicit midpoint
 * fixed-point iteration does not reach `mid.tol` within `mid.max_iter`.
 */
template <GSystem S>
Trajectory integrate(const S& sys, const Vec& x0, double dt, long steps, Method method,
                     MidpointConfig mid = {}) {
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  if (steps < 0) throw InputError("steps must be nonnegative");
  sys.check_domain(x0);

  Trajectory traj;
  traj.method = method;
  traj.dt = dt;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  auto field = [&](const Vec& y, long step) {
    if (!sys.in_domain(y)) throw DomainError("trajectory left the domain at step " + std::to_string(step));
    return hamiltonian_field(sys, y);
  };

  Vec x = x0;
  for (long n = 0; n < steps; ++n) {
    Vec next;
    if (method == Method::rk4) {
      const Vec k1 = field(x, n);
      const Vec k2 = field(x + 0.5 * dt * k1, n);
      const Vec k3 = field(x + 0.5 * dt * k2, n);
      const Vec k4 = field(x + dt * k3, n);
      next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      // x_{n+1} = x_n + dt X((x_n + x_{n+1}) / 2), solved by fixed-point iteration
      next = x + dt * field(x, n);
      bool converged = false;
      for (int it = 0; it < mid.max_iter; ++it) {
        const Vec update = x + dt * field(0.5 * (x + next), n);
        const double change = (update - next).lpNorm<Eigen::Infinity>();
        next = update;
        if (change <= mid.tol) {
          converged = true;
          break;
        }
      }
      if (!converged) throw ConvergenceError("implicit midpoint did not converge", n);
    }
    if (!sys.in_domain(next)) throw DomainError("trajectory left the domain at step " + std::to_string(n));
    x = std::move(next);
    traj.times.push_back(static_cast<double>(n + 1) * dt);
    traj.states.push_back(x);
  }
  return traj;
}

struct ConservationReport {
  double max_energy_drift = 0.0;
  double max_momentum_drift = 0.0;
};

template <GSystem S>
ConservationReport conservation_report(const S& sys, const Trajectory& traj) {
  if (traj.states.empty()) throw InputError("empty trajectory");
  const double h0 = sys.energy(traj.states.front());
  const Vec mu0 = sys.momentum(traj.states.front());
  ConservationReport rep;
  for (const Vec& x : traj.states) {
    rep.max_energy_drift = std::max(rep.max_energy_drift, std::abs(sys.energy(x) - h0));
    rep.max_momentum_drift =
        std::max(rep.max_momentum_drift, (sys.momentum(x) - mu0).template lpNorm<Eigen::Infinity>());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Openness probe

struct ProbeConfig {
  double delta = 0.05;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  double tol = 1e-3;
  bool saturate = false;
};

struct ProbeTargetResult {
  Vec target;
  bool hit = false;
  double min_distance = std::numeric_limits<double>::infinity();
};

struct ProbeReport {
  ProbeConfig config;
  Vec center;
  std::vector<ProbeTargetResult> targets;
};

/// Random group element applied to a state (used to G-saturate probe samples).
using StateTransform = std::function<Vec(const Vec&, Rng&)>;

/**
 * Samples the ball of radius delta around `center` uniformly (optionally moved
 * by random group elements) and records, per target, the closest image under
 * `map`.
 */
inline ProbeReport openness_probe(const std::function<Vec(const Vec&)>& map, const Vec& center,
                                  const std::vector<Vec>& targets, const ProbeConfig& cfg,
                                  const StateTransform& group_sampler = {}) {
  if (!(cfg.delta > 0.0)) throw InputError("probe delta must be positive");
  if (cfg.samples < 1) throw InputError("probe needs at least one sample");
  if (cfg.saturate && !group_sampler) throw InputError("saturated probe needs a group sampler");

  ProbeReport rep;
  rep.config = cfg;
  rep.center = center;
  for (const Vec& t : targets) rep.targets.push_back({t, false, std::numeric_limits<double>::infinity()});

  Rng rng(cfg.seed);
  const int n = static_cast<int>(center.size());
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    Vec dir = gaussian_vector(rng, n);
    const double norm = dir.norm();
    const double radius = cfg.delta * std::pow(uniform(rng, 0.0, 1.0), 1.0 / n);
    Vec x = center + (norm > 0.0 ? radius / norm : 0.0) * dir;
    if (cfg.saturate) x = group_sampler(x, rng);
    const Vec image = map(x);
    for (auto& t : rep.targets) t.min_distance = std::min(t.min_distance, (image - t.target).norm());
  }
  for (auto& t : rep.targets) t.hit = t.min_distance <= cfg.tol;
  return rep;
}

}  // namespace releq
