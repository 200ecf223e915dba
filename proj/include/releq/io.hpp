#pragma once

// JSON and CSV serialization. Complex numbers are [re, im] pairs; non-finite
// reals are the strings "inf", "-inf" and "nan". Parsing rejects unknown keys.

#include "releq/persistence.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>

namespace releq {

using Json = nlohmann::json;

namespace io {

inline Json real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double real_from(const Json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw InputError("expected a number, got '" + s + "'");
  }
  if (!j.is_number()) throw InputError("expected a number, got " + j.dump());
  return j.get<double>();
}

inline Json vec(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(real(v[i]));
  return a;
}

inline Vec vec_from(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of numbers, got " + j.dump());
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = real_from(j[i]);
  return v;
}

inline Json complex(Complex c) { return Json::array({real(c.real()), real(c.imag())}); }

inline Complex complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("complex numbers are [re, im] pairs, got " + j.dump());
  return {real_from(j[0]), real_from(j[1])};
}

inline Json matrix(const Mat& m) {
  Json a = Json::array();
  for (int i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i).transpose()));
  return a;
}

inline Mat matrix_from(const Json& j, int cols) {
  if (!j.is_array()) throw InputError("expected a matrix (array of rows)");
  Mat m(static_cast<int>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vec row = vec_from(j[i]);
    if (row.size() != cols) throw InputError("matrix row has wrong length");
    m.row(static_cast<int>(i)) = row.transpose();
  }
  return m;
}

inline Mat3 matrix3_from(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw InputError(what + " must be a 3x3 row-major matrix");
  return matrix_from(j, 3);
}

inline void require_object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw InputError(what + " must be a JSON object");
}

/// Throws InputError on keys outside `allowed`.
inline void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  require_object(j, what);
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InputError("unknown field '" + key + "' in " + what);
  }
}

inline const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw InputError("missing field '" + std::string(key) + "' in " + what);
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* key, const std::string& what) {
  try {
    return field(j, key, what).get<T>();
  } catch (const Json::exception& e) {
    throw InputError("bad field '" + std::string(key) + "' in " + what + ": " + e.what());
  }
}

inline double get_real(const Json& j, const char* key, const std::string& what) {
  return real_from(field(j, key, what));
}

inline std::optional<double> optional_real(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return real_from(j.at(key));
}

/// Parses inline JSON text, or reads the file it names when it does not start with '{' or '['.
inline Json parse_argument(const std::string& text) {
  std::string body = text;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InputError("empty JSON argument");
  if (text[first] != '{' && text[first] != '[') {
    std::ifstream in(text);
    if (!in) throw InputError("cannot open '" + text + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

/// Shortest round-trip decimal form.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace io

// ---------------------------------------------------------------------------
// Input documents

/// {"gamma": [...], "z": [[re, im], ...]}; either key may be absent when not needed.
struct VortexConfigDoc {
  std::optional<Vorticities> gamma;
  std::optional<VortexState> z;
  std::optional<Vec> xi;
};

inline VortexConfigDoc parse_vortex_doc(const Json& j) {
  io::check_keys(j, {"gamma", "z", "xi"}, "vortex configuration");
  VortexConfigDoc d;
  if (j.contains("gamma")) {
    const Vec g = io::vec_from(j.at("gamma"));
    d.gamma = Vorticities(std::vector<double>(g.data(), g.data() + g.size()));
  }
  if (j.contains("z")) {
    if (!j.at("z").is_array()) throw InputError("z must be a list of [re, im] pairs");
    VortexState z;
    for (const auto& p : j.at("z")) z.push_back(io::complex_from(p));
    d.z = z;
  }
  if (j.contains("xi")) d.xi = io::vec_from(j.at("xi"));
  return d;
}

inline Json vortex_doc(const Vorticities& gamma, const VortexState& z) {
  Json zs = Json::array();
  for (const auto& p : z) zs.push_back(io::complex(p));
  return {{"gamma", io::vec(Eigen::Map<const Vec>(gamma.values().data(), gamma.size()))}, {"z", zs}};
}

/// {"Q": 3x3, "P": 3x3, "xi": [6]?}; Q and P row-major.
struct ArbStateDoc {
  ARBState state;
  std::optional<Vec> xi;
};

inline ArbStateDoc parse_arb_doc(const Json& j) {
  io::check_keys(j, {"Q", "P", "xi"}, "ARB state");
  ArbStateDoc d;
  d.state.Q = io::matrix3_from(io::field(j, "Q", "ARB state"), "Q");
  d.state.P = j.contains("P") ? io::matrix3_from(j.at("P"), "P") : Mat3::Zero();
  if (j.contains("xi")) d.xi = io::vec_from(j.at("xi"));
  return d;
}

inline Json arb_doc(const ARBState& s) { return {{"Q", io::matrix(s.Q)}, {"P", io::matrix(s.P)}}; }

// ---------------------------------------------------------------------------
// Configurations

inline void to_json(Json& j, const SolverConfig& c) {
  j = {{"tol", c.tol},
       {"max_iter", c.max_iter},
       {"damping", c.damping},
       {"max_damping_steps", c.max_damping_steps},
       {"rank_tol", c.rank_tol},
       {"fd_step", c.fd_step}};
}

inline void from_json(const Json& j, SolverConfig& c) {
  const std::string what = "solver config";
  io::check_keys(j, {"tol", "max_iter", "damping", "max_damping_steps", "rank_tol", "fd_step"}, what);
  SolverConfig d;
  c.tol = j.contains("tol") ? io::get_real(j, "tol", what) : d.tol;
  c.max_iter = j.contains("max_iter") ? io::get<int>(j, "max_iter", what) : d.max_iter;
  c.damping = j.contains("damping") ? io::get_real(j, "damping", what) : d.damping;
  c.max_damping_steps = j.contains("max_damping_steps") ? io::get<int>(j, "max_damping_steps", what) : d.max_damping_steps;
  c.rank_tol = j.contains("rank_tol") ? io::get_real(j, "rank_tol", what) : d.rank_tol;
  c.fd_step = j.contains("fd_step") ? io::get_real(j, "fd_step", what) : d.fd_step;
}

inline void to_json(Json& j, const Gauge& g) {
  j = {{"label", g.label}, {"rows", io::matrix(g.rows)}, {"rhs", io::vec(g.rhs)}};
}

inline void from_json(const Json& j, Gauge& g) {
  io::check_keys(j, {"label", "rows", "rhs"}, "gauge");
  g.label = io::get<std::string>(j, "label", "gauge");
  g.rhs = io::vec_from(io::field(j, "rhs", "gauge"));
  const Json& rows = io::field(j, "rows", "gauge");
  const int cols = rows.empty() ? 0 : static_cast<int>(rows.at(0).size());
  g.rows = io::matrix_from(rows, cols);
}

inline void to_json(Json& j, const ProbeConfig& c) {
  j = {{"delta", c.delta}, {"samples", c.samples}, {"seed", c.seed}, {"tol", c.tol}, {"saturate", c.saturate}};
}

inline void from_json(const Json& j, ProbeConfig& c) {
  const std::string what = "probe config";
  io::check_keys(j, {"delta", "samples", "seed", "tol", "saturate"}, what);
  c.delta = io::get_real(j, "delta", what);
  c.samples = io::get<std::size_t>(j, "samples", what);
  c.seed = io::get<std::uint64_t>(j, "seed", what);
  c.tol = io::get_real(j, "tol", what);
  c.saturate = io::get<bool>(j, "saturate", what);
}

inline void to_json(Json& j, const Prop71Config& c) {
  j = {{"separation", c.separation}, {"n_offaxis", c.n_offaxis}, {"restarts", c.restarts},
       {"seed", c.seed},             {"r_spread", c.r_spread},   {"law_tol", c.law_tol},
       {"energy_slack", c.energy_slack}, {"axis_points", c.axis_points}, {"solver", c.solver}};
}

inline void from_json(const Json& j, Prop71Config& c) {
  const std::string what = "prop71 config";
  io::check_keys(j, {"separation", "n_offaxis", "restarts", "seed", "r_spread", "law_tol", "energy_slack",
                     "axis_points", "solver"},
                 what);
  c.separation = io::get_real(j, "separation", what);
  c.n_offaxis = io::get<int>(j, "n_offaxis", what);
  c.restarts = io::get<int>(j, "restarts", what);
  c.seed = io::get<std::uint64_t>(j, "seed", what);
  c.r_spread = io::get_real(j, "r_spread", what);
  c.law_tol = io::get_real(j, "law_tol", what);
  c.energy_slack = io::get_real(j, "energy_slack", what);
  c.axis_points = io::get<int>(j, "axis_points", what);
  c.solver = io::field(j, "solver", what).get<SolverConfig>();
}

// ---------------------------------------------------------------------------
// Results

inline void to_json(Json& j, const RESolution& s) {
  j = {{"x", io::vec(s.x)},
       {"xi", io::vec(s.xi)},
       {"target_mu", io::vec(s.target_mu)},
       {"mu", io::vec(s.mu)},
       {"energy", io::real(s.energy)},
       {"residual_norm", io::real(s.residual_norm)},
       {"gauge_violation", io::real(s.gauge_violation)},
       {"classification", to_string(s.classification)},
       {"iterations", s.iterations},
       {"jacobian_nullity", s.jacobian_nullity}};
}

inline void from_json(const Json& j, RESolution& s) {
  const std::string what = "solution";
  io::check_keys(j, {"x", "xi", "target_mu", "mu", "energy", "residual_norm", "gauge_violation", "classification",
                     "iterations", "jacobian_nullity"},
                 what);
  s.x = io::vec_from(io::field(j, "x", what));
  s.xi = io::vec_from(io::field(j, "xi", what));
  s.target_mu = io::vec_from(io::field(j, "target_mu", what));
  s.mu = io::vec_from(io::field(j, "mu", what));
  s.energy = io::get_real(j, "energy", what);
  s.residual_norm = io::get_real(j, "residual_norm", what);
  s.gauge_violation = io::get_real(j, "gauge_violation", what);
  s.classification = classification_from_string(io::get<std::string>(j, "classification", what));
  s.iterations = io::get<int>(j, "iterations", what);
  s.jacobian_nullity = io::get<int>(j, "jacobian_nullity", what);
}

inline FailureKind failure_kind_from_string(const std::string& s) {
  if (s == "not-converged") return FailureKind::NotConverged;
  if (s == "domain-exit") return FailureKind::DomainExit;
  if (s == "gauge-deficient") return FailureKind::GaugeDeficient;
  throw InputError("unknown failure kind '" + s + "'");
}

inline void to_json(Json& j, const REFailure& f) {
  j = {{"kind", to_string(f.kind)},
       {"message", f.message},
       {"best_x", io::vec(f.best_x)},
       {"best_xi", io::vec(f.best_xi)},
       {"best_residual", io::real(f.best_residual)},
       {"iterations", f.iterations}};
}

inline void from_json(const Json& j, REFailure& f) {
  const std::string what = "failure";
  io::check_keys(j, {"kind", "message", "best_x", "best_xi", "best_residual", "iterations"}, what);
  f.kind = failure_kind_from_string(io::get<std::string>(j, "kind", what));
  f.message = io::get<std::string>(j, "message", what);
  f.best_x = io::vec_from(io::field(j, "best_x", what));
  f.best_xi = io::vec_from(io::field(j, "best_xi", what));
  f.best_residual = io::get_real(j, "best_residual", what);
  f.iterations = io::get<int>(j, "iterations", what);
}

inline void to_json(Json& j, const ExtremalityReport& r) {
  Json eig = Json::array();
  for (double e : r.eigenvalues) eig.push_back(io::real(e));
  j = {{"kernel_dim", r.kernel_dim}, {"orbit_dim", r.orbit_dim}, {"slice_dim", r.slice_dim},
       {"eigenvalues", eig},         {"verdict", to_string(r.verdict)}, {"warnings", r.warnings}};
}

inline void from_json(const Json& j, ExtremalityReport& r) {
  const std::string what = "extremality report";
  io::check_keys(j, {"kernel_dim", "orbit_dim", "slice_dim", "eigenvalues", "verdict", "warnings"}, what);
  r.kernel_dim = io::get<int>(j, "kernel_dim", what);
  r.orbit_dim = io::get<int>(j, "orbit_dim", what);
  r.slice_dim = io::get<int>(j, "slice_dim", what);
  const Vec eig = io::vec_from(io::field(j, "eigenvalues", what));
  r.eigenvalues.assign(eig.data(), eig.data() + eig.size());
  r.verdict = verdict_from_string(io::get<std::string>(j, "verdict", what));
  r.warnings = io::get<std::vector<std::string>>(j, "warnings", what);
}

inline void to_json(Json& j, const Isotropy& i) { j = {{"dimension", i.dimension}, {"compact", i.compact}}; }

inline void from_json(const Json& j, Isotropy& i) {
  io::check_keys(j, {"dimension", "compact"}, "isotropy");
  i.dimension = io::get<int>(j, "dimension", "isotropy");
  i.compact = io::get<bool>(j, "compact", "isotropy");
}

inline void to_json(Json& j, const ConservationReport& r) {
  j = {{"max_energy_drift", io::real(r.max_energy_drift)}, {"max_momentum_drift", io::real(r.max_momentum_drift)}};
}

inline void from_json(const Json& j, ConservationReport& r) {
  const std::string what = "conservation report";
  io::check_keys(j, {"max_energy_drift", "max_momentum_drift"}, what);
  r.max_energy_drift = io::get_real(j, "max_energy_drift", what);
  r.max_momentum_drift = io::get_real(j, "max_momentum_drift", what);
}

inline void to_json(Json& j, const ProbeTargetResult& t) {
  j = {{"target", io::vec(t.target)}, {"hit", t.hit}, {"min_distance", io::real(t.min_distance)}};
}

inline void from_json(const Json& j, ProbeTargetResult& t) {
  const std::string what = "probe target";
  io::check_keys(j, {"target", "hit", "min_distance"}, what);
  t.target = io::vec_from(io::field(j, "target", what));
  t.hit = io::get<bool>(j, "hit", what);
  t.min_distance = io::get_real(j, "min_distance", what);
}

inline void to_json(Json& j, const ProbeReport& r) {
  j = {{"config", r.config}, {"seed", r.config.seed}, {"center", io::vec(r.center)}, {"targets", r.targets}};
}

inline void from_json(const Json& j, ProbeReport& r) {
  const std::string what = "probe report";
  io::check_keys(j, {"config", "seed", "center", "targets"}, what);
  r.config = io::field(j, "config", what).get<ProbeConfig>();
  r.center = io::vec_from(io::field(j, "center", what));
  r.targets = io::field(j, "targets", what).get<std::vector<ProbeTargetResult>>();
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <class T>
std::optional<T> optional_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

inline void to_json(Json& j, const ScanEntry& e) {
  j = {{"target", io::vec(e.target)},
       {"converged", e.converged},
       {"attempts", e.attempts},
       {"solution", optional_json(e.solution)},
       {"best_residual", io::real(e.best_residual)},
       {"failure", e.failure},
       {"classification", to_string(e.classification)},
       {"energy", io::real(e.energy)},
       {"exp2pih", e.exp2pih ? io::real(*e.exp2pih) : Json(nullptr)},
       {"in_U", optional_json(e.in_U)},
       {"isotropy", optional_json(e.isotropy)},
       {"extremality", optional_json(e.extremality)}};
}

inline void from_json(const Json& j, ScanEntry& e) {
  const std::string what = "scan entry";
  io::check_keys(j, {"target", "converged", "attempts", "solution", "best_residual", "failure", "classification",
                     "energy", "exp2pih", "in_U", "isotropy", "extremality"},
                 what);
  e.target = io::vec_from(io::field(j, "target", what));
  e.converged = io::get<bool>(j, "converged", what);
  e.attempts = io::get<int>(j, "attempts", what);
  e.solution = optional_from<RESolution>(j, "solution");
  e.best_residual = io::get_real(j, "best_residual", what);
  e.failure = io::get<std::string>(j, "failure", what);
  e.classification = classification_from_string(io::get<std::string>(j, "classification", what));
  e.energy = io::get_real(j, "energy", what);
  e.exp2pih = io::optional_real(j, "exp2pih");
  e.in_U = optional_from<bool>(j, "in_U");
  e.isotropy = optional_from<Isotropy>(j, "isotropy");
  e.extremality = optional_from<ExtremalityReport>(j, "extremality");
}

inline void to_json(Json& j, const ScanReport& r) {
  j = {{"experiment", r.experiment},
       {"seed", r.seed},
       {"provenance", r.provenance},
       {"seed_solution", optional_json(r.seed_solution)},
       {"converged", r.converged_count()},
       {"targets", r.entries.size()},
       {"entries", r.entries},
       {"elapsed_seconds", io::real(r.elapsed_seconds)}};
}

inline void from_json(const Json& j, ScanReport& r) {
  const std::string what = "scan report";
  io::check_keys(j, {"experiment", "seed", "provenance", "seed_solution", "converged", "targets", "entries",
                     "elapsed_seconds"},
                 what);
  r.experiment = io::get<std::string>(j, "experiment", what);
  r.seed = io::get<std::uint64_t>(j, "seed", what);
  r.provenance = io::field(j, "provenance", what);
  r.seed_solution = optional_from<RESolution>(j, "seed_solution");
  r.entries = io::field(j, "entries", what).get<std::vector<ScanEntry>>();
  r.elapsed_seconds = io::get_real(j, "elapsed_seconds", what);
}

inline void to_json(Json& j, const Prop71Target& t) {
  j = {{"target", io::vec(t.target)},
       {"attempts", t.attempts},
       {"converged", t.converged},
       {"equilateral", t.equilateral},
       {"other", t.other},
       {"in_U", t.in_U},
       {"predicted_exp2pih", io::real(t.predicted_exp2pih)},
       {"max_exp2pih", io::real(t.max_exp2pih)},
       {"max_law_error", io::real(t.max_law_error)},
       {"example", optional_json(t.example)}};
}

inline void from_json(const Json& j, Prop71Target& t) {
  const std::string what = "prop71 target";
  io::check_keys(j, {"target", "attempts", "converged", "equilateral", "other", "in_U", "predicted_exp2pih",
                     "max_exp2pih", "max_law_error", "example"},
                 what);
  t.target = io::vec_from(io::field(j, "target", what));
  t.attempts = io::get<int>(j, "attempts", what);
  t.converged = io::get<int>(j, "converged", what);
  t.equilateral = io::get<int>(j, "equilateral", what);
  t.other = io::get<int>(j, "other", what);
  t.in_U = io::get<int>(j, "in_U", what);
  t.predicted_exp2pih = io::get_real(j, "predicted_exp2pih", what);
  t.max_exp2pih = io::get_real(j, "max_exp2pih", what);
  t.max_law_error = io::get_real(j, "max_law_error", what);
  t.example = optional_from<RESolution>(j, "example");
}

inline void to_json(Json& j, const Prop71Report& r) {
  j = {{"gamma", r.gamma},
       {"config", r.config},
       {"seed", r.config.seed},
       {"collinear", r.collinear},
       {"collinear_extremality", r.collinear_extremality},
       {"exp2pih_gamma", io::real(r.exp2pih_gamma)},
       {"energy_threshold", io::real(r.energy_threshold)},
       {"disc_radius", io::real(r.disc_radius)},
       {"offaxis", r.offaxis},
       {"axis", r.axis},
       {"targets_without_solution", r.targets_without_solution},
       {"solutions_in_U", r.solutions_in_U},
       {"non_equilateral_solutions", r.non_equilateral_solutions},
       {"max_law_error", io::real(r.max_law_error)},
       {"evidence", "bounded by " + std::to_string(r.config.restarts + 2) + " starts per target; not a proof"},
       {"verdict", r.pass ? "PASS" : "FAIL"},
       {"elapsed_seconds", io::real(r.elapsed_seconds)}};
}

inline void from_json(const Json& j, Prop71Report& r) {
  const std::string what = "prop71 report";
  io::check_keys(j, {"gamma", "config", "seed", "collinear", "collinear_extremality", "exp2pih_gamma",
                     "energy_threshold", "disc_radius", "offaxis", "axis", "targets_without_solution",
                     "solutions_in_U", "non_equilateral_solutions", "max_law_error", "evidence", "verdict",
                     "elapsed_seconds"},
                 what);
  r.gamma = io::get<std::vector<double>>(j, "gamma", what);
  r.config = io::field(j, "config", what).get<Prop71Config>();
  r.collinear = io::field(j, "collinear", what).get<RESolution>();
  r.collinear_extremality = io::field(j, "collinear_extremality", what).get<ExtremalityReport>();
  r.exp2pih_gamma = io::get_real(j, "exp2pih_gamma", what);
  r.energy_threshold = io::get_real(j, "energy_threshold", what);
  r.disc_radius = io::get_real(j, "disc_radius", what);
  r.offaxis = io::field(j, "offaxis", what).get<std::vector<Prop71Target>>();
  r.axis = io::field(j, "axis", what).get<ScanReport>();
  r.targets_without_solution = io::get<int>(j, "targets_without_solution", what);
  r.solutions_in_U = io::get<int>(j, "solutions_in_U", what);
  r.non_equilateral_solutions = io::get<int>(j, "non_equilateral_solutions", what);
  r.max_law_error = io::get_real(j, "max_law_error", what);
  const auto verdict = io::get<std::string>(j, "verdict", what);
  if (verdict != "PASS" && verdict != "FAIL") throw InputError("verdict must be PASS or FAIL");
  r.pass = verdict == "PASS";
  r.elapsed_seconds = io::get_real(j, "elapsed_seconds", what);
}

/// Copy of a report with timing fields removed, for determinism comparisons.
inline Json without_timing(Json j) {
  if (j.is_object()) {
    j.erase("elapsed_seconds");
    for (auto& [k, v] : j.items()) v = without_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = without_timing(v);
  }
  return j;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& names) {
  out << "t";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    out << io::format_real(traj.times[i]);
    for (int k = 0; k < traj.states[i].size(); ++k) out << ',' << io::format_real(traj.states[i][k]);
    out << '\n';
  }
}

/// One row per target. Vortex scans: mu_re, mu_im, mu_r, converged, class, energy, exp2pih, in_U.
/// ARB scans: the six momentum components, converged, class, energy, verdict.
inline void write_scan_csv(std::ostream& out, const ScanReport& rep) {
  const bool arb = !rep.entries.empty() && rep.entries.front().target.size() == 6;
  if (arb) out << "muL_1,muL_2,muL_3,muR_1,muR_2,muR_3,converged,class,energy,verdict\n";
  else out << "mu_re,mu_im,mu_r,converged,class,energy,exp2pih,in_U\n";
  for (const auto& e : rep.entries) {
    for (int k = 0; k < e.target.size(); ++k) out << io::format_real(e.target[k]) << ',';
    out << (e.converged ? "true" : "false") << ',' << to_string(e.classification) << ','
        << (e.converged ? io::format_real(e.energy) : "");
    if (arb) {
      out << ',' << (e.extremality ? to_string(e.extremality->verdict) : "");
    } else {
      out << ',' << (e.exp2pih ? io::format_real(*e.exp2pih) : "") << ','
          << (e.in_U ? (*e.in_U ? "true" : "false") : "");
    }
    out << '\n';
  }
}

/// Off-axis findings of the counterexample run in the scan CSV layout; class is
/// Equilateral only when every solution found at that target was equilateral.
inline void write_prop71_csv(std::ostream& out, const Prop71Report& rep) {
  out << "mu_re,mu_im,mu_r,converged,class,energy,exp2pih,in_U\n";
  for (const auto& t : rep.offaxis) {
    const bool found = t.converged > 0;
    out << io::format_real(t.target[0]) << ',' << io::format_real(t.target[1]) << ',' << io::format_real(t.target[2])
        << ',' << (found ? "true" : "false") << ','
        << (!found ? "NA" : t.other == 0 ? "Equilateral" : "Other") << ','
        << (found ? io::format_real(t.example->energy) : "") << ','
        << (found ? io::format_real(t.max_exp2pih) : "") << ',' << (t.in_U > 0 ? "true" : "false") << '\n';
  }
}

}  // namespace releq
