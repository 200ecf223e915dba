#pragma once

// Relative equilibria: the augmented critical-point system, a damped Newton
// solver with gauge rows, Synge classification for three vortices, dynamic
// verification and the symplectic-slice extremality test.

#include "releq/arb.hpp"
#include "releq/gsystem.hpp"
#include "releq/vortex.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace releq {

enum class Classification { Collinear, Equilateral, Other, NA };

inline std::string to_string(Classification c) {
  switch (c) {
    case Classification::Collinear: return "Collinear";
    case Classification::Equilateral: return "Equilateral";
    case Classification::Other: return "Other";
    case Classification::NA: break;
  }
  return "NA";
}

inline Classification classification_from_string(const std::string& s) {
  if (s == "Collinear") return Classification::Collinear;
  if (s == "Equilateral") return Classification::Equilateral;
  if (s == "Other") return Classification::Other;
  if (s == "NA") return Classification::NA;
  throw InputError("unknown classification '" + s + "'");
}

/**
 * Synge's dichotomy for three vortices: Collinear if the triangle area over
 * the squared longest side is below tol, Equilateral if the side lengths agree
 * to relative tol, Other otherwise.
 */
inline Classification synge_classify(std::span<const Complex> z, double tol = 1e-8) {
  if (z.size() != 3) throw InputError("Synge classification needs exactly 3 vortices");
  if (!collision_free(z)) throw DomainError("vortex collision");
  const double a = std::abs(z[1] - z[0]), b = std::abs(z[2] - z[1]), c = std::abs(z[0] - z[2]);
  const double longest = std::max({a, b, c});
  const double shortest = std::min({a, b, c});
  const double area = 0.5 * std::abs((std::conj(z[1] - z[0]) * (z[2] - z[0])).imag());
  if (area / (longest * longest) < tol) return Classification::Collinear;
  if ((longest - shortest) / longest < tol) return Classification::Equilateral;
  return Classification::Other;
}

template <class S>
Classification classify_state(const S&, const Vec&) {
  return Classification::NA;
}

inline Classification classify_state(const VortexSystem& sys, const Vec& x) {
  if (sys.vorticities().size() != 3) return Classification::NA;
  return synge_classify(to_complex(x));
}

/// Affine constraints rows * x = rhs removing the group degeneracy.
struct Gauge {
  Mat rows;
  Vec rhs;
  std::string label;

  int size() const { return static_cast<int>(rows.rows()); }
  static Gauge none(int state_dim) { return {Mat(0, state_dim), Vec(0), "none"}; }
};

/// Orbit directions of the isotropy group of mu at x0, pinned through x0.
template <GSystem S>
Gauge slice_gauge(const S& sys, const Vec& mu, const Vec& x0) {
  const Mat basis = sys.isotropy_algebra(mu);
  Mat tangents(sys.state_dim(), basis.cols());
  for (int i = 0; i < basis.cols(); ++i) tangents.col(i) = sys.generator(basis.col(i), x0);
  const Mat range = orthonormal_range(tangents, 1e-8);
  Gauge g{range.transpose(), Vec(), "slice"};
  g.rhs = g.rows * x0;
  return g;
}

/**
 * Coordinate gauges for vortex problems.
 *  - balanced, axis mu:      Re z_N = Im z_N = 0, Im z_1 = 0;
 *  - balanced, off-axis mu:  component of z_1 along c is held at its guess value;
 *  - unbalanced:             slice through the guess along the rotation about -i c / Gamma.
 */
inline Gauge vortex_gauge(const VortexSystem& sys, const SE2Momentum& mu, const Vec& guess) {
  const int dim = sys.state_dim();
  const int last = dim / 2 - 1;
  if (sys.vorticities().balanced()) {
    if (std::abs(mu.c) <= 1e-12) {
      Gauge g{Mat::Zero(3, dim), Vec::Zero(3), "pin Re z_N, Im z_N, Im z_1"};
      g.rows(0, 2 * last) = 1.0;
      g.rows(1, 2 * last + 1) = 1.0;
      g.rows(2, 1) = 1.0;
      return g;
    }
    // the isotropy orbit is translation along c; pinning through the guess keeps it feasible
    Gauge g{Mat::Zero(1, dim), Vec::Zero(1), "pin z_1 along c"};
    const Complex u = mu.c / std::abs(mu.c);
    g.rows(0, 0) = u.real();
    g.rows(0, 1) = u.imag();
    g.rhs[0] = g.rows.row(0).dot(guess);
    return g;
  }
  const Complex centre = -Complex(0.0, 1.0) * mu.c / sys.vorticities().total();
  const SE2Algebra rotation{-Complex(0.0, 1.0) * centre, 1.0};
  Vec row = sys.generator(rotation.to_vector(), guess);
  row.normalize();
  Gauge g{row.transpose(), Vec(1), "slice along isotropy rotation"};
  g.rhs[0] = row.dot(guess);
  return g;
}

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 50;
  double damping = 0.5;
  int max_damping_steps = 20;
  double rank_tol = 1e-12;
  double fd_step = 1e-6;
};

template <GSystem S>
struct REProblem {
  const S& system;
  Vec target_mu;
  Gauge gauge;
  SolverConfig config{};
};

struct RESolution {
  Vec x;
  Vec xi;
  Vec target_mu;
  Vec mu;
  double energy = 0.0;
  double residual_norm = 0.0;
  double gauge_violation = 0.0;
  Classification classification = Classification::NA;
  int iterations = 0;
  /// Numerical nullity of the augmented Jacobian at the solution; nonzero at non-free points.
  int jacobian_nullity = 0;
};

enum class FailureKind { NotConverged, DomainExit, GaugeDeficient };

inline std::string to_string(FailureKind k) {
  switch (k) {
    case FailureKind::NotConverged: return "not-converged";
    case FailureKind::DomainExit: return "domain-exit";
    case FailureKind::GaugeDeficient: break;
  }
  return "gauge-deficient";
}

struct REFailure {
  FailureKind kind = FailureKind::NotConverged;
  std::string message;
  Vec best_x;
  Vec best_xi;
  double best_residual = 0.0;
  int iterations = 0;
};

using REOutcome = std::variant<RESolution, REFailure>;

inline bool converged(const REOutcome& o) { return std::holds_alternative<RESolution>(o); }

/// [grad h - grad <Phi, xi> ; Phi - mu].
template <GSystem S>
Vec re_residual(const S& sys, const Vec& x, const Vec& xi, const Vec& mu) {
  sys.check_domain(x);
  const int n = sys.state_dim(), d = sys.group_dim();
  Vec r(n + d);
  r.head(n) = sys.energy_gradient(x) - momentum_pairing_gradient(sys, x, xi);
  r.tail(d) = sys.momentum(x) - mu;
  return r;
}

namespace detail {

template <GSystem S>
Vec augmented_residual(const REProblem<S>& p, const Vec& u) {
  const int n = p.system.state_dim(), d = p.system.group_dim(), k = p.gauge.size();
  const Vec x = u.head(n), xi = u.tail(d);
  Vec f(n + d + k);
  f.head(n + d) = re_residual(p.system, x, xi, p.target_mu);
  if (k > 0) f.tail(k) = p.gauge.rows * x - p.gauge.rhs;
  return f;
}

template <GSystem S>
Mat augmented_jacobian(const REProblem<S>& p, const Vec& u) {
  const S& sys = p.system;
  const int n = sys.state_dim(), d = sys.group_dim(), k = p.gauge.size();
  const Vec x = u.head(n), xi = u.tail(d);
  const Mat jphi = sys.momentum_jacobian(x);
  Mat jac = Mat::Zero(n + d + k, n + d);
  jac.topLeftCorner(n, n) = fd_jacobian(
      [&](const Vec& y) -> Vec { return sys.energy_gradient(y) - momentum_pairing_gradient(sys, y, xi); }, x,
      p.config.fd_step);
  jac.topRightCorner(n, d) = -jphi.transpose() * sys.pairing_matrix();
  jac.block(n, 0, d, n) = jphi;
  if (k > 0) jac.bottomLeftCorner(k, n) = p.gauge.rows;
  return jac;
}

inline int numerical_nullity(const Mat& jac, double rank_tol) {
  Eigen::JacobiSVD<Mat> svd(jac);
  const auto& s = svd.singularValues();
  const int cols = static_cast<int>(jac.cols());
  if (s.size() == 0 || s[0] == 0.0) return cols;
  int rank = 0;
  while (rank < s.size() && s[rank] > rank_tol * s[0]) ++rank;
  return cols - rank;
}

}  // namespace detail

/**
 * Damped Newton on [re_residual; gauge] from (x0, xi0). Steps solve the
 * Levenberg-Marquardt system with lambda = ||F||^2 and are halved until the
 * residual norm decreases. Nonconvergence is returned as data.
 */
template <GSystem S>
REOutcome re_solve(const REProblem<S>& p, const Vec& x0, const Vec& xi0) {
  const S& sys = p.system;
  const SolverConfig& cfg = p.config;
  const int n = sys.state_dim(), d = sys.group_dim();
  if (x0.size() != n || xi0.size() != d || p.target_mu.size() != d)
    throw InputError("guess or momentum has wrong dimension");
  if (p.gauge.size() > 0 && p.gauge.rows.cols() != n) throw InputError("gauge rows have wrong width");

  auto fail = [&](FailureKind kind, std::string msg, const Vec& u, double res, int it) -> REOutcome {
    return REFailure{kind, std::move(msg), u.head(n), u.tail(d), res, it};
  };

  Vec u(n + d);
  u << x0, xi0;
  if (!sys.in_domain(x0))
    return fail(FailureKind::DomainExit, "guess outside the domain", u, std::numeric_limits<double>::infinity(), 0);
  Vec f = detail::augmented_residual(p, u);
  double norm = f.norm();
  int it = 0;
  for (; norm > cfg.tol; ++it) {
    if (it >= cfg.max_iter)
      return fail(FailureKind::NotConverged, "iteration limit reached", u, norm, it);

    Mat jac;
    try {
      jac = detail::augmented_jacobian(p, u);
    } catch (const DomainError& e) {
      return fail(FailureKind::DomainExit, e.what(), u, norm, it);
    }
    const double lambda = norm * norm;
    Mat stacked(jac.rows() + jac.cols(), jac.cols());
    stacked << jac, std::sqrt(lambda) * Mat::Identity(jac.cols(), jac.cols());
    Vec rhs = Vec::Zero(stacked.rows());
    rhs.head(jac.rows()) = -f;
    const Vec step = stacked.completeOrthogonalDecomposition().solve(rhs);

    double t = 1.0;
    bool accepted = false, any_in_domain = false;
    for (int k = 0; k <= cfg.max_damping_steps; ++k, t *= cfg.damping) {
      const Vec trial = u + t * step;
      if (!sys.in_domain(trial.head(n))) continue;
      any_in_domain = true;
      const Vec ft = detail::augmented_residual(p, trial);
      const double nt = ft.norm();
      if (nt < norm) {
        u = trial;
        f = ft;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!any_in_domain) return fail(FailureKind::DomainExit, "every damped step left the domain", u, norm, it + 1);
      if (detail::numerical_nullity(jac, cfg.rank_tol) > 0)
        return fail(FailureKind::GaugeDeficient, "singular Jacobian and no descent", u, norm, it + 1);
      return fail(FailureKind::NotConverged, "damping exhausted without descent", u, norm, it + 1);
    }
  }

  RESolution sol;
  sol.x = u.head(n);
  sol.xi = u.tail(d);
  sol.target_mu = p.target_mu;
  sol.mu = sys.momentum(sol.x);
  sol.energy = sys.energy(sol.x);
  sol.residual_norm = re_residual(sys, sol.x, sol.xi, p.target_mu).norm();
  sol.gauge_violation = p.gauge.size() > 0 ? (p.gauge.rows * sol.x - p.gauge.rhs).norm() : 0.0;
  sol.classification = classify_state(sys, sol.x);
  sol.iterations = it;
  sol.jacobian_nullity = detail::numerical_nullity(detail::augmented_jacobian(p, u), cfg.rank_tol);
  return sol;
}

/// Least-squares xi with generator(xi, x) closest to X_h(x); a default guess for re_solve.
template <GSystem S>
Vec estimate_generator(const S& sys, const Vec& x) {
  const int d = sys.group_dim();
  Mat g(sys.state_dim(), d);
  for (int i = 0; i < d; ++i) g.col(i) = sys.generator(Vec::Unit(d, i), x);
  return g.completeOrthogonalDecomposition().solve(hamiltonian_field(sys, x));
}

/// Sup over the run of |x(t) - exp(t xi) x(0)|, integrating with rk4.
template <GSystem S>
double re_verify_dynamic(const S& sys, const RESolution& sol, double horizon = 1.0, double dt = 1e-3) {
  const long steps = std::lround(horizon / dt);
  const Trajectory traj = integrate(sys, sol.x, dt, steps, Method::rk4);
  double dev = 0.0;
  for (std::size_t i = 0; i < traj.states.size(); ++i)
    dev = std::max(dev, (traj.states[i] - sys.group_motion(sol.xi, sol.x, traj.times[i])).norm());
  return dev;
}

enum class Verdict { Min, Max, Saddle, Degenerate };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Min: return "Min";
    case Verdict::Max: return "Max";
    case Verdict::Saddle: return "Saddle";
    case Verdict::Degenerate: break;
  }
  return "Degenerate";
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "Min") return Verdict::Min;
  if (s == "Max") return Verdict::Max;
  if (s == "Saddle") return Verdict::Saddle;
  if (s == "Degenerate") return Verdict::Degenerate;
  throw InputError("unknown verdict '" + s + "'");
}

struct ExtremalityConfig {
  double rank_tol = 1e-10;
  double hessian_step = 1e-5;
  double degeneracy_tol = 1e-8;
};

struct ExtremalityReport {
  int kernel_dim = 0;
  int orbit_dim = 0;
  int slice_dim = 0;
  std::vector<double> eigenvalues;
  Verdict verdict = Verdict::Min;
  std::vector<std::string> warnings;
};

/// Sign pattern of eigenvalues at the degeneracy tolerance; an empty list is Min.
inline Verdict classify_eigenvalues(const std::vector<double>& eig, double tol) {
  bool pos = false, neg = false, zero = false;
  for (double e : eig) {
    if (e > tol) pos = true;
    else if (e < -tol) neg = true;
    else zero = true;
  }
  if (pos && neg) return Verdict::Saddle;
  if (zero) return Verdict::Degenerate;
  if (neg) return Verdict::Max;
  return Verdict::Min;
}

namespace detail {
inline void rank_warning(const Eigen::VectorXd& s, double tol, const std::string& what,
                         std::vector<std::string>& warnings) {
  if (s.size() == 0 || s[0] == 0.0) return;
  for (int i = 0; i < s.size(); ++i) {
    const double rel = s[i] / s[0];
    if (rel > tol / 10.0 && rel <= tol * 10.0) {
      warnings.push_back("ambiguous rank in " + what + ": singular value ratio " + std::to_string(rel));
      return;
    }
  }
}
}  // namespace detail

/**
 * Second-order test of h - <Phi, xi> on the slice ker dPhi(x) minus the
 * isotropy-orbit directions T0 = g_mu . x. Assumes the action near x is free;
 * otherwise the slice also contains stabiliser directions and a warning is added.
 */
template <GSystem S>
ExtremalityReport extremality_test(const S& sys, const RESolution& sol, const ExtremalityConfig& cfg = {}) {
  ExtremalityReport rep;
  const int n = sys.state_dim();
  const Vec& x = sol.x;

  const Mat jphi = sys.momentum_jacobian(x);
  Eigen::JacobiSVD<Mat> svd(jphi, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv[rank] > cfg.rank_tol * sv[0]) ++rank;
  detail::rank_warning(sv, cfg.rank_tol, "dPhi", rep.warnings);
  const Mat kernel = svd.matrixV().rightCols(n - rank);
  rep.kernel_dim = static_cast<int>(kernel.cols());
  if (rank < jphi.rows()) rep.warnings.push_back("dPhi not surjective: action not free at x");

  const Mat iso = sys.isotropy_algebra(sol.target_mu);
  Mat tangents(n, iso.cols());
  for (int i = 0; i < iso.cols(); ++i) tangents.col(i) = sys.generator(iso.col(i), x);
  Mat orbit(n, 0);
  if (tangents.cols() > 0) {
    Eigen::JacobiSVD<Mat> tsvd(tangents, Eigen::ComputeThinU);
    const auto& ts = tsvd.singularValues();
    int trank = 0;
    while (trank < ts.size() && ts[0] > 0.0 && ts[trank] > cfg.rank_tol * ts[0]) ++trank;
    detail::rank_warning(ts, cfg.rank_tol, "isotropy orbit", rep.warnings);
    orbit = tsvd.matrixU().leftCols(trank);
  }
  rep.orbit_dim = static_cast<int>(orbit.cols());
  if (orbit.cols() > 0 && (jphi * orbit).norm() > 1e-6 * std::max(1.0, sv.size() ? sv[0] : 1.0))
    rep.warnings.push_back("isotropy orbit not tangent to the momentum level set");

  rep.slice_dim = std::max(0, rep.kernel_dim - rep.orbit_dim);
  if (rep.slice_dim == 0) {
    rep.verdict = Verdict::Min;
    return rep;
  }
  const Mat projected = kernel - orbit * (orbit.transpose() * kernel);
  Eigen::JacobiSVD<Mat> psvd(projected, Eigen::ComputeThinU);
  const Mat slice = psvd.matrixU().leftCols(rep.slice_dim);

  auto aug_grad = [&](const Vec& y) -> Vec {
    return sys.energy_gradient(y) - momentum_pairing_gradient(sys, y, sol.xi);
  };
  Mat hess = fd_jacobian(aug_grad, x, cfg.hessian_step);
  hess = 0.5 * (hess + hess.transpose()).eval();
  const Mat restricted = slice.transpose() * hess * slice;
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (restricted + restricted.transpose()));
  rep.eigenvalues.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
  rep.verdict = classify_eigenvalues(rep.eigenvalues, cfg.degeneracy_tol);
  return rep;
}

}  // namespace releq
