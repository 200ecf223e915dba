// releq: batch front end for relative-equilibrium experiments.
//
// Exit codes: 0 success, 1 input error (message on stderr), 2 clean
// nonconvergence of re-find, 3 prop71 verdict FAIL.

#include "releq/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace releq;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string output = "-";
  std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, bool csv_allowed) {
  cmd->add_option("--seed", c.seed, "Random seed (recorded in the report)")->capture_default_str();
  cmd->add_option("--output,-o", c.output, "Output path, '-' for stdout")->capture_default_str();
  auto* fmt = cmd->add_option("--format", c.format, "Output format")->capture_default_str();
  fmt->check(CLI::IsMember(csv_allowed ? std::vector<std::string>{"json", "csv"} : std::vector<std::string>{"json"}));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Comma/space separated numbers or a JSON array; a leading [re, im] pair is expanded.
Vec parse_list(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '[') {
    const Json j = io::parse_argument(text);
    std::vector<double> v;
    for (const auto& e : j) {
      if (e.is_array()) {
        const Complex c = io::complex_from(e);
        v.push_back(c.real());
        v.push_back(c.imag());
      } else {
        v.push_back(io::real_from(e));
      }
    }
    return Eigen::Map<Vec>(v.data(), static_cast<int>(v.size()));
  }
  std::string s = text;
  for (char& ch : s)
    if (ch == ',') ch = ' ';
  std::istringstream in(s);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + tok + "'");
    }
  }
  if (v.empty()) throw InputError("empty number list");
  return Eigen::Map<Vec>(v.data(), static_cast<int>(v.size()));
}

/// Vortex momentum: (Re c, Im c, r), or (c, r) with real c.
Vec vortex_mu(const Vec& v) {
  if (v.size() == 3) return v;
  if (v.size() == 2) return Vec3(v[0], 0.0, v[1]);
  throw InputError("vortex momentum needs 2 or 3 numbers");
}

Vorticities vortex_params(const std::string& params) {
  const auto doc = parse_vortex_doc(io::parse_argument(params));
  if (!doc.gamma) throw InputError("vortex parameters need 'gamma'");
  return *doc.gamma;
}

double arb_params(const std::string& params) {
  if (params.empty()) return 1.0;
  const Json j = io::parse_argument(params);
  io::check_keys(j, {"kappa"}, "ARB parameters");
  const double kappa = j.contains("kappa") ? io::get_real(j, "kappa", "ARB parameters") : 1.0;
  if (!(kappa > 0.0)) throw InputError("kappa must be positive");
  return kappa;
}

// ---------------------------------------------------------------------------

struct ReFindArgs {
  std::string system, params, mu, guess;
  SolverConfig solver;
  Common common;
};

template <GSystem S>
int finish_re_find(const S& sys, const ReFindArgs& a, Json report, const Vec& mu, const Vec& x0,
                   std::optional<Vec> xi0, const Gauge& gauge) {
  if (x0.size() != sys.state_dim()) throw InputError("guess has the wrong dimension");
  if (mu.size() != sys.group_dim()) throw InputError("momentum has the wrong dimension");
  if (!sys.in_domain(x0)) throw InputError("guess lies outside the phase space");
  const Vec xi = xi0 ? *xi0 : estimate_generator(sys, x0);
  if (xi.size() != sys.group_dim()) throw InputError("guess xi has the wrong dimension");

  report["guess"] = {{"x", io::vec(x0)}, {"xi", io::vec(xi)}};
  report["gauge"] = gauge;
  report["config"] = a.solver;
  report["target_mu"] = io::vec(mu);

  const REOutcome out = re_solve(REProblem<S>{sys, mu, gauge, a.solver}, x0, xi);
  int code = 0;
  if (const auto* s = std::get_if<RESolution>(&out)) {
    report["outcome"] = "converged";
    report["solution"] = *s;
    report["classification"] = to_string(s->classification);
    report["extremality"] = extremality_test(sys, *s);
    report["dynamic_deviation"] = io::real(re_verify_dynamic(sys, *s));
  } else {
    report["outcome"] = "nonconverged";
    report["failure"] = std::get<REFailure>(out);
    code = 2;
  }
  emit(a.common.output, dump(report));
  return code;
}

int run_re_find(const ReFindArgs& a) {
  Json report = {{"command", "re-find"}, {"system", a.system}, {"seed", a.common.seed}};
  const Vec mu_list = parse_list(a.mu);
  const Json guess = io::parse_argument(a.guess);
  if (a.system == "vortex") {
    const Vorticities gamma = vortex_params(a.params);
    const auto doc = parse_vortex_doc(guess);
    if (!doc.z) throw InputError("vortex guess needs 'z'");
    if (doc.z->size() != gamma.size()) throw InputError("guess and gamma sizes differ");
    const VortexSystem sys(gamma);
    const Vec mu = vortex_mu(mu_list);
    const Vec x0 = to_real(*doc.z);
    report["params"] = {{"gamma", gamma.values()}};
    return finish_re_find(sys, a, report, mu, x0, doc.xi, vortex_gauge(sys, SE2Momentum::from_vector(mu), x0));
  }
  const double kappa = arb_params(a.params);
  const auto doc = parse_arb_doc(guess);
  const ArbSystem sys(ElasticPotential{kappa});
  report["params"] = {{"kappa", kappa}};
  return finish_re_find(sys, a, report, mu_list, doc.state.to_vector(), doc.xi, Gauge::none(sys.state_dim()));
}

// ---------------------------------------------------------------------------

struct Prop71Args {
  Prop71Config cfg;
  Common common;
};

int run_prop71(Prop71Args& a) {
  a.cfg.seed = a.common.seed;
  const Prop71Report rep = prop71_experiment(a.cfg);
  if (a.common.format == "csv") {
    std::ostringstream out;
    write_prop71_csv(out, rep);
    emit(a.common.output, out.str());
  } else {
    emit(a.common.output, dump(Json(rep)));
  }
  return rep.pass ? 0 : 3;
}

// ---------------------------------------------------------------------------

struct ScanArgs {
  std::string experiment = "axis";
  AxisScanConfig axis;
  ArbScanConfig arb;
  std::string params = R"({"gamma":[1,1,1]})";
  std::string seed_state;
  double half_width = 0.05;
  int per_axis = 3;
  std::optional<double> threshold;
  SolverConfig solver;
  Common common;
};

ScanReport run_momentum_scan(const ScanArgs& a) {
  const Vorticities gamma = vortex_params(a.params);
  const VortexSystem sys(gamma);
  Vec x0;
  std::optional<Vec> xi0;
  if (a.seed_state.empty()) {
    if (gamma.size() != 3) throw InputError("the default seed state needs three vortices");
    x0 = to_real(equal_vortex_triangle({0.0, 0.0}, 1.0).first);
  } else {
    const auto doc = parse_vortex_doc(io::parse_argument(a.seed_state));
    if (!doc.z || doc.z->size() != gamma.size()) throw InputError("seed state needs 'z' matching gamma");
    x0 = to_real(*doc.z);
    xi0 = doc.xi;
  }
  if (!sys.in_domain(x0)) throw InputError("seed state lies outside the phase space");
  if (a.per_axis < 1 || !(a.half_width >= 0.0)) throw InputError("bad grid size");
  const Vec mu0 = sys.momentum(x0);
  const Vec xi = xi0 ? *xi0 : estimate_generator(sys, x0);
  const REOutcome seed =
      re_solve(REProblem<VortexSystem>{sys, mu0, vortex_gauge(sys, SE2Momentum::from_vector(mu0), x0), a.solver}, x0, xi);
  if (!converged(seed)) throw InputError("seed state does not converge to a relative equilibrium");

  ScanConfig sc;
  sc.solver = a.solver;
  sc.exp2pih_threshold = a.threshold;
  sc.gauge = [&sys](const Vec& mu, const Vec& guess) {
    return vortex_gauge(sys, SE2Momentum::from_vector(mu), guess);
  };
  ScanReport rep = momentum_scan(sys, std::get<RESolution>(seed), momentum_box(mu0, a.half_width, a.per_axis), sc);
  rep.experiment = "momentum";
  rep.seed = a.common.seed;
  rep.provenance = {{"gamma", gamma.values()},
                    {"seed_state", io::vec(x0)},
                    {"half_width", a.half_width},
                    {"per_axis", a.per_axis},
                    {"solver", a.solver}};
  return rep;
}

int run_scan(ScanArgs& a) {
  ScanReport rep;
  if (a.experiment == "axis") {
    a.axis.solver = a.solver;
    rep = axis_scan(a.axis);
    rep.seed = a.common.seed;
  } else if (a.experiment == "arb") {
    a.arb.seed = a.common.seed;
    a.arb.solver = a.solver;
    rep = arb_scan(a.arb);
  } else {
    rep = run_momentum_scan(a);
  }
  if (a.common.format == "csv") {
    std::ostringstream out;
    write_scan_csv(out, rep);
    emit(a.common.output, out.str());
  } else {
    emit(a.common.output, dump(Json(rep)));
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct IntegrateArgs {
  std::string system = "vortex", params, state, method = "implicit_midpoint", trajectory;
  double t = 1.0, dt = 1e-2;
  MidpointConfig mid;
  Common common;
};

template <GSystem S>
int finish_integrate(const S& sys, const IntegrateArgs& a, Json report, const Vec& x0) {
  if (!(a.t >= 0.0)) throw InputError("t must be nonnegative");
  const Method method = method_from_string(a.method);
  if (!sys.in_domain(x0)) throw InputError("initial state lies outside the phase space");
  const long steps = std::lround(a.t / a.dt);
  const Trajectory traj = integrate(sys, x0, a.dt, steps, method, a.mid);
  report["method"] = to_string(method);
  report["dt"] = a.dt;
  report["steps"] = steps;
  report["initial_state"] = io::vec(x0);
  report["final_state"] = io::vec(traj.states.back());
  report["conservation"] = conservation_report(sys, traj);
  if (!a.trajectory.empty()) {
    std::ostringstream out;
    write_trajectory_csv(out, traj, sys.component_names());
    emit(a.trajectory, out.str());
  }
  if (a.common.format == "csv") {
    std::ostringstream out;
    write_trajectory_csv(out, traj, sys.component_names());
    emit(a.common.output, out.str());
  } else {
    emit(a.common.output, dump(report));
  }
  return 0;
}

int run_integrate(const IntegrateArgs& a) {
  if (!(a.dt > 0.0)) throw InputError("dt must be positive");
  Json report = {{"command", "integrate"}, {"system", a.system}, {"seed", a.common.seed}};
  const Json state = io::parse_argument(a.state);
  if (a.system == "vortex") {
    const auto doc = parse_vortex_doc(state);
    const Vorticities gamma = !a.params.empty() ? vortex_params(a.params)
                              : doc.gamma     ? *doc.gamma
                                              : throw InputError("vortex integration needs 'gamma'");
    if (!doc.z || doc.z->size() != gamma.size()) throw InputError("state needs 'z' matching gamma");
    report["params"] = {{"gamma", gamma.values()}};
    return finish_integrate(VortexSystem(gamma), a, report, to_real(*doc.z));
  }
  const double kappa = arb_params(a.params);
  report["params"] = {{"kappa", kappa}};
  return finish_integrate(ArbSystem(ElasticPotential{kappa}), a, report, parse_arb_doc(state).state.to_vector());
}

// ---------------------------------------------------------------------------

struct ProbeArgs {
  ProbeConfig cfg;
  std::string center = "1,0,0,1,0,0";
  std::string targets = "0.01,0,0";
  double grid_scale = 0.0;
  Common common;
};

int run_probe(ProbeArgs& a) {
  a.cfg.seed = a.common.seed;
  const Vec center = parse_list(a.center);
  if (center.size() != 6) throw InputError("probe center is (q, p) in R^6");
  std::vector<Vec> targets;
  if (a.grid_scale > 0.0) {
    for (const Vec& d : grid_directions_26()) targets.push_back(a.grid_scale * d);
  } else {
    const Vec flat = parse_list(a.targets);
    if (flat.size() == 0 || flat.size() % 3 != 0) throw InputError("targets are 3-vectors");
    for (int i = 0; i < flat.size(); i += 3) targets.push_back(flat.segment(i, 3));
  }
  const ProbeReport rep = openness_probe(cross_momentum, center, targets, a.cfg, random_diagonal_rotation);
  Json j = rep;
  j["map"] = "q x p";
  if (a.common.format == "csv") {
    std::ostringstream out;
    out << "target_1,target_2,target_3,hit,min_distance\n";
    for (const auto& t : rep.targets)
      out << io::format_real(t.target[0]) << ',' << io::format_real(t.target[1]) << ','
          << io::format_real(t.target[2]) << ',' << (t.hit ? "true" : "false") << ','
          << io::format_real(t.min_distance) << '\n';
    emit(a.common.output, out.str());
  } else {
    emit(a.common.output, dump(j));
  }
  return 0;
}

void add_solver_options(CLI::App* cmd, SolverConfig& s) {
  cmd->add_option("--tol", s.tol, "Newton residual tolerance")->capture_default_str();
  cmd->add_option("--max-iter", s.max_iter, "Newton iteration cap")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative equilibria of symmetric Hamiltonian systems"};
  app.require_subcommand(1);

  ReFindArgs re;
  auto* c_re = app.add_subcommand("re-find", "Solve for a relative equilibrium at a momentum value");
  c_re->add_option("--system", re.system, "vortex or arb")->required()->check(CLI::IsMember({"vortex", "arb"}));
  c_re->add_option("--params", re.params, "JSON (inline or file): {\"gamma\": [...]} or {\"kappa\": k}");
  c_re->add_option("--mu", re.mu, "Target momentum: Re c, Im c, r (vortex) or muL, muR (arb)")->required();
  c_re->add_option("--guess", re.guess, "JSON (inline or file): {\"z\": ...} or {\"Q\": ..., \"P\": ...}, optional xi")
      ->required();
  add_solver_options(c_re, re.solver);
  add_common(c_re, re.common, false);

  Prop71Args pr;
  auto* c_pr = app.add_subcommand("prop71", "Search for relative equilibria off the axis near the collinear one");
  c_pr->add_option("--separation,-a", pr.cfg.separation, "Half-distance a of the collinear pair")->capture_default_str();
  c_pr->add_option("--n-offaxis", pr.cfg.n_offaxis, "Number of off-axis targets")->capture_default_str();
  c_pr->add_option("--restarts", pr.cfg.restarts, "Random restarts per target")->capture_default_str();
  c_pr->add_option("--axis-points", pr.cfg.axis_points, "Axis scan size")->capture_default_str();
  add_common(c_pr, pr.common, true);

  ScanArgs sc;
  auto* c_sc = app.add_subcommand("scan", "Continuation scan over momentum values");
  c_sc->add_option("--experiment", sc.experiment, "momentum, axis or arb")
      ->capture_default_str()
      ->check(CLI::IsMember({"momentum", "axis", "arb"}));
  c_sc->add_option("--a-min", sc.axis.a_min, "axis: smallest a")->capture_default_str();
  c_sc->add_option("--a-max", sc.axis.a_max, "axis: largest a")->capture_default_str();
  c_sc->add_option("--n", sc.axis.n, "axis: number of values")->capture_default_str();
  c_sc->add_option("--radius", sc.arb.radius, "arb: momentum radius")->capture_default_str();
  c_sc->add_option("--grid", sc.arb.per_axis, "arb: grid points per axis")->capture_default_str();
  c_sc->add_option("--skew", sc.arb.skew_samples, "arb: random skew targets")->capture_default_str();
  c_sc->add_option("--kappa", sc.arb.kappa, "arb: elastic stiffness")->capture_default_str();
  c_sc->add_option("--params", sc.params, "momentum: vortex parameters JSON")->capture_default_str();
  c_sc->add_option("--seed-state", sc.seed_state, "momentum: seed configuration JSON (default unit triangle)");
  c_sc->add_option("--half-width", sc.half_width, "momentum: box half-width")->capture_default_str();
  c_sc->add_option("--per-axis", sc.per_axis, "momentum: box points per axis")->capture_default_str();
  c_sc->add_option("--threshold", sc.threshold, "momentum: record in_U as exp(2 pi h) > threshold");
  add_solver_options(c_sc, sc.solver);
  add_common(c_sc, sc.common, true);

  IntegrateArgs in;
  auto* c_in = app.add_subcommand("integrate", "Integrate Hamilton's equations and report conservation");
  c_in->add_option("--system", in.system, "vortex or arb")->capture_default_str()->check(CLI::IsMember({"vortex", "arb"}));
  c_in->add_option("--params", in.params, "System parameters JSON");
  c_in->add_option("--state", in.state, "Initial state JSON")->required();
  c_in->add_option("--t", in.t, "Final time")->capture_default_str();
  c_in->add_option("--dt", in.dt, "Step size")->capture_default_str();
  c_in->add_option("--method", in.method, "rk4 or implicit_midpoint")->capture_default_str();
  c_in->add_option("--mid-tol", in.mid.tol, "Midpoint fixed-point tolerance")->capture_default_str();
  c_in->add_option("--trajectory", in.trajectory, "Also write the trajectory CSV here");
  add_common(c_in, in.common, true);

  ProbeArgs pb;
  auto* c_pb = app.add_subcommand("probe", "Sample the momentum image q x p of a ball");
  c_pb->add_option("--delta", pb.cfg.delta, "Ball radius")->capture_default_str();
  c_pb->add_option("--samples", pb.cfg.samples, "Number of samples")->capture_default_str();
  c_pb->add_option("--tol", pb.cfg.tol, "Hit tolerance")->capture_default_str();
  c_pb->add_flag("--saturate", pb.cfg.saturate, "Apply a random rotation to each sample");
  c_pb->add_option("--center", pb.center, "Centre (q, p)")->capture_default_str();
  c_pb->add_option("--targets", pb.targets, "Target 3-vectors, flattened")->capture_default_str();
  c_pb->add_option("--grid26", pb.grid_scale, "Use the 26 grid directions scaled by this value as targets");
  add_common(c_pb, pb.common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*c_re) return run_re_find(re);
    if (*c_pr) return run_prop71(pr);
    if (*c_sc) return run_scan(sc);
    if (*c_in) return run_integrate(in);
    if (*c_pb) return run_probe(pb);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
