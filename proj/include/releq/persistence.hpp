#pragma once

// Continuation scans over momentum values and the persistence experiments for
// the 1, 1, -2 vortex triple and the affine rigid body.

#include "releq/arb.hpp"
#include "releq/lie.hpp"
#include "releq/solver.hpp"
#include "releq/vortex.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace releq {

struct ScanEntry {
  Vec target;
  bool converged = false;
  int attempts = 0;
  std::optional<RESolution> solution;
  double best_residual = 0.0;
  std::string failure;  // empty when converged
  Classification classification = Classification::NA;
  double energy = 0.0;
  std::optional<double> exp2pih;
  std::optional<bool> in_U;
  std::optional<Isotropy> isotropy;
  std::optional<ExtremalityReport> extremality;
};

struct ScanReport {
  std::string experiment;
  std::uint64_t seed = 0;
  nlohmann::json provenance;
  std::optional<RESolution> seed_solution;
  std::vector<ScanEntry> entries;
  double elapsed_seconds = 0.0;

  int converged_count() const {
    int n = 0;
    for (const auto& e : entries) n += e.converged ? 1 : 0;
    return n;
  }
};

/// Extra guesses (x, xi) for a target momentum, tried after the continuation predictor.
using GuessFactory = std::function<std::vector<std::pair<Vec, Vec>>(const Vec& mu)>;
using GaugeFactory = std::function<Gauge(const Vec& mu, const Vec& guess)>;

struct ScanConfig {
  SolverConfig solver{};
  GaugeFactory gauge;
  GuessFactory extra_guesses;
  /// When set, in_U = e^{2 pi h} > threshold is recorded (vortex scans).
  std::optional<double> exp2pih_threshold;
  bool test_extremality = false;
};

inline double exp2pih(double energy) { return std::exp(2.0 * kPi * energy); }

namespace detail {

template <GSystem S>
void annotate(const S& sys, ScanEntry& e, const ScanConfig& cfg) {
  const RESolution& s = *e.solution;
  e.classification = s.classification;
  e.energy = s.energy;
  if constexpr (std::is_same_v<S, VortexSystem>) {
    e.exp2pih = exp2pih(s.energy);
    e.isotropy = se2_isotropy(sys.vorticities(), SE2Momentum::from_vector(e.target));
  }
  if (cfg.exp2pih_threshold) e.in_U = exp2pih(s.energy) > *cfg.exp2pih_threshold;
  if (cfg.test_extremality) e.extremality = extremality_test(sys, s);
}

inline std::chrono::steady_clock::time_point now() { return std::chrono::steady_clock::now(); }
inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(now() - t0).count();
}

}  // namespace detail

/**
 * Natural-parameter continuation: targets are visited in grid order and each
 * solve starts from the converged solution (seed included) whose momentum is
 * closest to the target. Failures are recorded, never thrown.
 */
template <GSystem S>
ScanReport momentum_scan(const S& sys, const RESolution& seed, const std::vector<Vec>& grid, const ScanConfig& cfg) {
  const auto t0 = detail::now();
  ScanReport rep;
  rep.experiment = "momentum";
  rep.seed_solution = seed;
  std::vector<const RESolution*> known{&seed};
  rep.entries.reserve(grid.size());

  for (const Vec& mu : grid) {
    ScanEntry e;
    e.target = mu;
    const RESolution* pred = known.front();
    for (const RESolution* k : known)
      if ((k->mu - mu).norm() < (pred->mu - mu).norm()) pred = k;

    std::vector<std::pair<Vec, Vec>> guesses{{pred->x, pred->xi}};
    if (cfg.extra_guesses)
      for (auto& g : cfg.extra_guesses(mu)) guesses.push_back(std::move(g));

    e.best_residual = std::numeric_limits<double>::infinity();
    for (const auto& [x0, xi0] : guesses) {
      ++e.attempts;
      const Gauge gauge = cfg.gauge ? cfg.gauge(mu, x0) : Gauge::none(sys.state_dim());
      REOutcome out = re_solve(REProblem<S>{sys, mu, gauge, cfg.solver}, x0, xi0);
      if (auto* s = std::get_if<RESolution>(&out)) {
        e.converged = true;
        e.solution = *s;
        e.best_residual = s->residual_norm;
        e.failure.clear();
        break;
      }
      const auto& f = std::get<REFailure>(out);
      if (f.best_residual < e.best_residual) {
        e.best_residual = f.best_residual;
        e.failure = to_string(f.kind) + ": " + f.message;
      }
    }
    if (e.converged) detail::annotate(sys, e, cfg);
    rep.entries.push_back(std::move(e));
    if (rep.entries.back().converged) known.push_back(&*rep.entries.back().solution);
  }
  rep.elapsed_seconds = detail::seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Three vortices with vorticities (1, 1, -2)

inline Vorticities synge_vorticities() { return Vorticities({1.0, 1.0, -2.0}); }

/// Collinear configuration (a, -a, 0); rotates rigidly with omega = -3 / (4 pi a^2).
inline VortexState collinear_configuration(double a) { return {{a, 0.0}, {-a, 0.0}, {0.0, 0.0}}; }

inline SE2Algebra collinear_generator(double a) { return {{0.0, 0.0}, -3.0 / (4.0 * kPi * a * a)}; }

/**
 * Equilateral configuration with momentum (c, r) for vorticities (1, 1, -2),
 * orientation z_2 - z_3 = e^{i orientation pi/3} (z_1 - z_3), translated so
 * that the component of z_1 along c vanishes. All three vortices translate
 * with the common velocity returned as the generator.
 */
inline std::pair<VortexState, SE2Algebra> equilateral_configuration(const SE2Momentum& mu, int orientation = 1) {
  const Complex c = mu.c;
  if (std::abs(c) == 0.0) throw InputError("equilateral relative equilibria need c != 0");
  const Complex rot = std::polar(1.0, orientation * kPi / 3.0);
  const Complex u = c / (Complex(0.0, std::sqrt(3.0)) * std::polar(1.0, orientation * kPi / 6.0));
  // Phi_R = Im(conj(z_3) c) + |u|^2; move z_3 along i c / |c| to hit r.
  const Complex dir = Complex(0.0, 1.0) * c / std::abs(c);
  const double beta = (std::norm(u) - mu.r) / std::abs(c);
  VortexState z{beta * dir + u, beta * dir + rot * u, beta * dir};
  const Complex along = c / std::abs(c);
  const double shift = (std::conj(along) * z[0]).real();
  for (auto& p : z) p -= shift * along;
  const Vorticities gamma = synge_vorticities();
  return {z, {vortex_field(gamma, z)[0], 0.0}};
}

struct Prop71Config {
  double separation = 1.0;
  int n_offaxis = 100;
  int restarts = 10;
  std::uint64_t seed = 1;
  /// Relative half-width of the random r offsets around a^2.
  double r_spread = 0.5;
  double law_tol = 1e-8;
  double energy_slack = 1e-9;
  int axis_points = 20;
  SolverConfig solver{};
};

struct Prop71Target {
  Vec target;
  int attempts = 0;
  int converged = 0;
  int equilateral = 0;
  int other = 0;
  int in_U = 0;
  double predicted_exp2pih = 0.0;
  double max_exp2pih = 0.0;
  double max_law_error = 0.0;
  std::optional<RESolution> example;
};

struct Prop71Report {
  std::vector<double> gamma{1.0, 1.0, -2.0};
  Prop71Config config;
  RESolution collinear;
  ExtremalityReport collinear_extremality;
  double exp2pih_gamma = 0.0;
  double energy_threshold = 0.0;
  double disc_radius = 0.0;
  std::vector<Prop71Target> offaxis;
  ScanReport axis;
  int targets_without_solution = 0;
  int solutions_in_U = 0;
  int non_equilateral_solutions = 0;
  double max_law_error = 0.0;
  bool pass = false;
  double elapsed_seconds = 0.0;
};

struct AxisScanConfig {
  double a_min = 0.5;
  double a_max = 2.0;
  int n = 20;
  SolverConfig solver{};
};

/// Axis scan summary values computed from a ScanReport over collinear solutions.
struct AxisSummary {
  double omega_a2_mean = 0.0;
  double omega_a2_rel_spread = 0.0;
  double max_momentum_error = 0.0;
  double max_energy_law_error = 0.0;
};

inline AxisSummary summarize_axis(const ScanReport& rep) {
  AxisSummary s;
  double lo = INFINITY, hi = -INFINITY, sum = 0.0;
  int n = 0;
  for (const auto& e : rep.entries) {
    if (!e.converged) continue;
    const double r = e.target[2];
    const double a = std::sqrt(r);
    const double w = e.solution->xi[2] * r;
    lo = std::min(lo, w);
    hi = std::max(hi, w);
    sum += w;
    ++n;
    s.max_momentum_error = std::max(s.max_momentum_error, (e.solution->mu - e.target).norm());
    const double law = a * a * a / 2.0;
    s.max_energy_law_error = std::max(s.max_energy_law_error, std::abs(exp2pih(e.energy) - law) / law);
  }
  if (n > 0) {
    s.omega_a2_mean = sum / n;
    s.omega_a2_rel_spread = (hi - lo) / std::abs(s.omega_a2_mean);
  }
  return s;
}

/**
 * Collinear relative equilibria along the axis c = 0, r = a^2, continued from
 * the a = 1 solution in grid order.
 */
inline ScanReport axis_scan(const AxisScanConfig& cfg) {
  if (!(cfg.a_min > 0.0) || !(cfg.a_max >= cfg.a_min) || cfg.n < 1) throw InputError("axis range must lie in (0, inf)");
  const auto t0 = detail::now();
  const VortexSystem sys(synge_vorticities());
  const Vec mu1 = Vec3(0.0, 0.0, 1.0);
  const Vec x1 = to_real(collinear_configuration(1.0));
  REOutcome seed = re_solve(REProblem<VortexSystem>{sys, mu1, vortex_gauge(sys, {}, x1), cfg.solver}, x1,
                            collinear_generator(1.0).to_vector());
  if (!converged(seed)) throw std::runtime_error("axis seed did not converge");

  std::vector<Vec> grid;
  const double r0 = cfg.a_min * cfg.a_min, r1 = cfg.a_max * cfg.a_max;
  for (int i = 0; i < cfg.n; ++i) {
    const double r = cfg.n == 1 ? r0 : r0 + (r1 - r0) * i / (cfg.n - 1);
    grid.push_back(Vec3(0.0, 0.0, r));
  }
  ScanConfig sc;
  sc.solver = cfg.solver;
  sc.gauge = [&sys](const Vec& mu, const Vec& guess) {
    return vortex_gauge(sys, SE2Momentum::from_vector(mu), guess);
  };
  ScanReport rep = momentum_scan(sys, std::get<RESolution>(seed), grid, sc);
  rep.experiment = "axis";
  rep.provenance = {{"a_min", cfg.a_min}, {"a_max", cfg.a_max}, {"n", cfg.n}, {"gamma", {1.0, 1.0, -2.0}}};
  rep.elapsed_seconds = detail::seconds_since(t0);
  return rep;
}

/**
 * Off-axis search around the collinear equilibrium (a, -a, 0): the targets
 * fill the punctured disc |c| < (sqrt(3) e^{2 pi h(gamma)})^{1/3} with random r
 * near a^2. Each target is solved from both equilateral predictors and from
 * `restarts` random perturbations of them. PASS iff no solution has
 * e^{2 pi h} above e^{2 pi h(gamma)} / 3, every solution is equilateral and
 * satisfies the equilateral energy law, and gamma itself is extremal.
 */
inline Prop71Report prop71_experiment(const Prop71Config& cfg) {
  if (!(cfg.separation > 0.0)) throw InputError("separation must be positive");
  if (cfg.n_offaxis < 1 || cfg.restarts < 0) throw InputError("need at least one off-axis target");
  const auto t0 = detail::now();
  const double a = cfg.separation;
  const VortexSystem sys(synge_vorticities());

  Prop71Report rep;
  rep.config = cfg;
  const Vec mu_axis = Vec3(0.0, 0.0, a * a);
  const Vec xg = to_real(collinear_configuration(a));
  REOutcome gout = re_solve(REProblem<VortexSystem>{sys, mu_axis, vortex_gauge(sys, {}, xg), cfg.solver}, xg,
                            collinear_generator(a).to_vector());
  if (!converged(gout)) throw std::runtime_error("collinear relative equilibrium did not converge");
  rep.collinear = std::get<RESolution>(gout);
  rep.collinear_extremality = extremality_test(sys, rep.collinear);
  rep.exp2pih_gamma = exp2pih(rep.collinear.energy);
  rep.energy_threshold = rep.exp2pih_gamma / 3.0;
  rep.disc_radius = std::cbrt(std::sqrt(3.0) * rep.exp2pih_gamma);

  const int n_ang = std::min(cfg.n_offaxis, 10);
  const int n_rad = (cfg.n_offaxis + n_ang - 1) / n_ang;
  std::vector<Vec> targets;
  for (int k = 0; k < cfg.n_offaxis; ++k) {
    const int ring = k / n_ang, slot = k % n_ang;
    const double frac = 0.999 * (ring + 1) / n_rad;
    const double angle = 2.0 * kPi * (slot + 0.5 * (ring % 2)) / n_ang;
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    const double r = a * a * (1.0 + uniform(rng, -cfg.r_spread, cfg.r_spread));
    const Complex c = std::polar(frac * rep.disc_radius, angle);
    targets.push_back(Vec3(c.real(), c.imag(), r));
  }

  rep.offaxis.resize(targets.size());
  parallel_for(targets.size(), [&](std::size_t k) {
    Prop71Target& t = rep.offaxis[k];
    t.target = targets[k];
    const SE2Momentum mu = SE2Momentum::from_vector(targets[k]);
    t.predicted_exp2pih = std::pow(std::abs(mu.c), 3) / (3.0 * std::sqrt(3.0));
    Rng rng(mix_seed(cfg.seed ^ 0x5bd1e995ULL, k));

    std::vector<std::pair<Vec, Vec>> guesses;
    for (int orientation : {1, -1}) {
      auto [z, xi] = equilateral_configuration(mu, orientation);
      guesses.emplace_back(to_real(z), xi.to_vector());
    }
    for (int i = 0; i < cfg.restarts; ++i) {
      const auto& [xb, xib] = guesses[i % 2];
      const double side = std::abs(mu.c) / std::sqrt(3.0);
      Vec x = xb + 0.3 * side * gaussian_vector(rng, 6);
      Vec xi = xib + 0.3 * xib.norm() * gaussian_vector(rng, 3);
      guesses.emplace_back(std::move(x), std::move(xi));
    }

    for (const auto& [x0, xi0] : guesses) {
      ++t.attempts;
      if (!sys.in_domain(x0)) continue;
      REOutcome out = re_solve(REProblem<VortexSystem>{sys, targets[k], vortex_gauge(sys, mu, x0), cfg.solver}, x0, xi0);
      const auto* s = std::get_if<RESolution>(&out);
      if (!s) continue;
      ++t.converged;
      const double e = exp2pih(s->energy);
      t.max_exp2pih = std::max(t.max_exp2pih, e);
      if (s->classification == Classification::Equilateral) ++t.equilateral;
      else ++t.other;
      const double law = std::pow(std::abs(SE2Momentum::from_vector(s->mu).c), 3) / (3.0 * std::sqrt(3.0));
      t.max_law_error = std::max(t.max_law_error, std::abs(e - law) / e);
      if (e > rep.energy_threshold + cfg.energy_slack) ++t.in_U;
      if (!t.example) t.example = *s;
    }
  });

  for (const auto& t : rep.offaxis) {
    if (t.converged == 0) ++rep.targets_without_solution;
    rep.solutions_in_U += t.in_U;
    rep.non_equilateral_solutions += t.other;
    rep.max_law_error = std::max(rep.max_law_error, t.max_law_error);
  }

  rep.axis = axis_scan({0.5 * a, 2.0 * a, cfg.axis_points, cfg.solver});
  rep.pass = rep.solutions_in_U == 0 && rep.non_equilateral_solutions == 0 && rep.max_law_error <= cfg.law_tol &&
             rep.collinear_extremality.verdict == Verdict::Min;
  rep.elapsed_seconds = detail::seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Compact isotropy: vortices with nonzero total vorticity

/// Equilateral triangle of circumradius `radius` centred at `centre`, with
/// rigid rotation rate for equal unit vorticities.
inline std::pair<VortexState, SE2Algebra> equal_vortex_triangle(Complex centre, double radius) {
  VortexState z;
  for (int k = 0; k < 3; ++k) z.push_back(centre + std::polar(radius, 2.0 * kPi * k / 3.0));
  // rate read off the induced velocity of the first vortex, which is i omega (z_0 - centre)
  const Vorticities gamma({1.0, 1.0, 1.0});
  const Complex v0 = vortex_field(gamma, z)[0];
  const double omega = (v0 / (Complex(0.0, 1.0) * (z[0] - centre))).real();
  return {z, {-Complex(0.0, omega) * centre, omega}};
}

/// Box grid of `per_axis`^3 momenta with the given half-width around `centre`.
inline std::vector<Vec> momentum_box(const Vec& centre, double half_width, int per_axis) {
  std::vector<Vec> grid;
  auto offset = [&](int i) { return per_axis == 1 ? 0.0 : -half_width + 2.0 * half_width * i / (per_axis - 1); };
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j)
      for (int k = 0; k < per_axis; ++k) grid.push_back(centre + Vec3(offset(i), offset(j), offset(k)));
  return grid;
}

// ---------------------------------------------------------------------------
// Affine rigid body

/**
 * Leading-order relative equilibrium near (I, 0) with momentum (s e3, t e3).
 * A pi-rotation about e1 on the right flips the sign seen by mu_R; it is used
 * when that brings the effective momenta closer to mu_R = -mu_L. Equal
 * effective magnitudes give an axisymmetric state; otherwise the triaxial
 * branch with xi_L + xi_R close to +-sqrt(2 kappa).
 */
inline std::pair<ARBState, Vec> arb_predictor_e3(double s, double t, double kappa) {
  ARBState st;
  Vec xi = Vec::Zero(6);
  if (s == 0.0 && t == 0.0) return {st, xi};
  Mat3 flip = Mat3::Identity();
  double te = t;
  if (std::abs(s + t) > std::abs(s - t)) {
    flip = Vec3(1.0, -1.0, -1.0).asDiagonal();
    te = -t;
  }
  const double sum = s + te, diff = (s - te) / 2.0;
  double a1, a2, om, la;
  if (std::abs(sum) < 1e-14) {
    a1 = a2 = std::sqrt(1.0 + diff * diff / kappa);
    om = diff / 2.0;
    la = -diff / 2.0;
  } else {
    const double spin = std::copysign(std::sqrt(2.0 * kappa), sum);
    const double gap = std::sqrt(2.0 * std::abs(sum) / std::sqrt(2.0 * kappa));
    a1 = 1.0 + gap / 2.0;
    a2 = 1.0 - gap / 2.0;
    om = (spin + diff) / 2.0;
    la = (spin - diff) / 2.0;
  }
  const Mat3 qd = Vec3(a1, a2, 1.0).asDiagonal();
  const Mat3 e = hat(Vec3::UnitZ());
  st.Q = qd * flip.transpose();
  st.P = (om * e * qd - la * qd * e) * flip.transpose();
  xi << 0.0, 0.0, om, flip * Vec3(0.0, 0.0, la);
  return {st, xi};
}

/// Some rotation mapping e3 onto the unit vector `dir`.
inline Mat3 rotation_to(const Vec3& dir) {
  return Eigen::Quaterniond::FromTwoVectors(Vec3::UnitZ(), dir.normalized()).toRotationMatrix();
}

/// Predictor for arbitrary (mu_L, mu_R): the e3 predictor moved by (A, B).
inline std::pair<Vec, Vec> arb_predictor(const SO3PairMomentum& mu, double kappa) {
  const double s = mu.muL.norm(), t = mu.muR.norm();
  const Mat3 a = s > 0.0 ? rotation_to(mu.muL) : Mat3::Identity();
  const Mat3 b = t > 0.0 ? rotation_to(mu.muR) : Mat3::Identity();
  auto [st, xi] = arb_predictor_e3(s, t, kappa);
  Vec xi_out(6);
  xi_out << a * xi.head<3>(), b * xi.tail<3>();
  return {so3_pair_act(a, b, st).to_vector(), xi_out};
}

struct ArbScanConfig {
  double radius = 0.1;
  int per_axis = 5;
  int skew_samples = 5;
  double kappa = 1.0;
  std::uint64_t seed = 1;
  SolverConfig solver{};
};

/**
 * Grid mu_L = s e3, mu_R = t e3 over [-radius, radius]^2 plus random skew
 * pairs with norms at most radius. Each target is solved from its (I, 0)-based
 * predictor and extremality-tested.
 */
inline ScanReport arb_scan(const ArbScanConfig& cfg) {
  if (!(cfg.radius > 0.0) || cfg.per_axis < 1) throw InputError("ARB scan radius must be positive");
  const auto t0 = detail::now();
  const ArbSystem sys(ElasticPotential{cfg.kappa});

  std::vector<Vec> grid;
  for (int i = 0; i < cfg.per_axis; ++i)
    for (int j = 0; j < cfg.per_axis; ++j) {
      auto value = [&](int k) {
        return cfg.per_axis == 1 ? 0.0 : -cfg.radius + 2.0 * cfg.radius * k / (cfg.per_axis - 1);
      };
      Vec mu(6);
      mu << 0.0, 0.0, value(i), 0.0, 0.0, value(j);
      grid.push_back(mu);
    }
  Rng rng(cfg.seed);
  for (int k = 0; k < cfg.skew_samples; ++k) {
    Vec mu(6);
    mu << gaussian_vector(rng, 3).normalized() * uniform(rng, 0.0, cfg.radius),
        gaussian_vector(rng, 3).normalized() * uniform(rng, 0.0, cfg.radius);
    grid.push_back(mu);
  }

  ScanReport rep;
  rep.experiment = "arb";
  rep.seed = cfg.seed;
  rep.provenance = {{"radius", cfg.radius},
                    {"per_axis", cfg.per_axis},
                    {"skew_samples", cfg.skew_samples},
                    {"kappa", cfg.kappa},
                    {"predictor", "(I,0)-based leading-order family"},
                    {"gauge", "none"}};
  rep.entries.resize(grid.size());
  ScanConfig sc;
  sc.solver = cfg.solver;
  sc.test_extremality = true;
  parallel_for(grid.size(), [&](std::size_t k) {
    ScanEntry& e = rep.entries[k];
    e.target = grid[k];
    auto [x0, xi0] = arb_predictor(SO3PairMomentum::from_vector(grid[k]), cfg.kappa);
    e.attempts = 1;
    REOutcome out = re_solve(REProblem<ArbSystem>{sys, grid[k], Gauge::none(18), cfg.solver}, x0, xi0);
    if (auto* s = std::get_if<RESolution>(&out)) {
      e.converged = true;
      e.solution = *s;
      e.best_residual = s->residual_norm;
      detail::annotate(sys, e, sc);
    } else {
      const auto& f = std::get<REFailure>(out);
      e.best_residual = f.best_residual;
      e.failure = to_string(f.kind) + ": " + f.message;
    }
  });
  rep.elapsed_seconds = detail::seconds_since(t0);
  return rep;
}

}  // namespace releq
