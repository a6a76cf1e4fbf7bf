#pragma once

#include "hopfdisc/curvature.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace hopfdisc {

/// Acceptance thresholds applied to the cross-checks of a run.
struct Tolerances {
  double line_vs_fiber = 1e-8;
  double regularized = 1e-6;
  double area_index = 2e-3;
  double corollary = 1e-4;
  double holonomy = 1e-8;
  double transport = 1e-5;
  double lemma = 1e-6;
  double horizontality = 1e-7;
  double norm_drift = 1e-10;
};

struct RunConfig {
  std::string name = "run";
  MotionSpec motion;
  std::string table_path;
  std::size_t N = 8192;
  std::vector<double> eps_ladder = default_eps_ladder();
  double lipschitz_bound = 1e3;
  double phi0 = 0.0;
  AreaOptions area;
  Tolerances tolerances;
  std::string out_dir = ".";
  bool emit_report = false;  // the report always goes to stdout; this also writes a file
  bool emit_csv = false;
  bool emit_svg = false;
  bool strict = false;
};

struct Route {
  std::string name;
  bool done = false;
  double value = 0.0;
  std::string skipped;  // reason when not done
};

struct Residual {
  std::string a, b;
  double value = 0.0;
  double tolerance = 0.0;
  bool congruence = false;  // compared modulo 2 pi
  bool pass() const { return value < tolerance; }
};

struct PhaseReport {
  std::string name;
  std::string family;
  std::size_t N = 0;
  int n = 0;
  double a = 1.0, b = 1.0;
  double delta_d = 0.0;
  double delta_g = 0.0;  // line integral
  double delta_total = 0.0;
  std::vector<Route> routes;
  std::vector<double> eps_ladder, eps_values;
  double eps_exponent = 0.0;
  bool tau_done = false;
  Complex tau, tau_embedded;
  bool simple = false;
  std::optional<std::pair<double, double>> intersection;
  int I_plus = 0, I_minus = 0;
  double A_plus = std::numeric_limits<double>::quiet_NaN();
  double A_minus = std::numeric_limits<double>::quiet_NaN();
  int L_south_side = 0;
  double length = 0.0;
  std::vector<Residual> residuals;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;
  std::vector<std::string> failures;

  // Per-node columns for the CSV and the curve for the SVG.
  std::vector<double> col_t, col_theta, col_beta, col_running, col_phi, col_compass, col_s, col_kappa;
  std::vector<Vec3> curve;

  const Route* route(std::string_view name) const {
    for (const Route& r : routes)
      if (r.name == name) return &r;
    return nullptr;
  }
};

namespace detail {

inline std::string describe(const std::exception& e) { return e.what(); }

template <class F>
void attempt(std::vector<std::string>& sink, const char* what, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    sink.push_back(std::string(what) + ": " + e.what());
  }
}

inline std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(a, b - a + 1));
}

}  // namespace detail

/// Parses a real number; a trailing "deg" converts degrees to radians.
inline double parse_angle(std::string_view text) {
  std::string s = detail::trim(text);
  double scale = 1.0;
  if (s.size() > 3 && s.compare(s.size() - 3, 3, "deg") == 0) {
    scale = kPi / 180.0;
    s = detail::trim(s.substr(0, s.size() - 3));
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    fail(ErrorKind::Config, "not a number: '" + std::string(text) + "'");
  return v * scale;
}

inline double parse_real(std::string_view text) {
  std::string s = detail::trim(text);
  if (s.size() > 3 && s.compare(s.size() - 3, 3, "deg") == 0)
    fail(ErrorKind::Config, "degrees are only accepted for angles: '" + s + "'");
  return parse_angle(s);
}

inline long parse_int(std::string_view text) {
  std::string s = detail::trim(text);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) fail(ErrorKind::Config, "not an integer: '" + std::string(text) + "'");
  return v;
}

inline std::vector<double> parse_ladder(std::string_view text) {
  std::vector<double> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ','))
    if (!detail::trim(item).empty()) out.push_back(parse_angle(item));
  if (out.empty()) fail(ErrorKind::Config, "empty epsilon ladder");
  return out;
}

/// Motion table: one "t theta beta" record per line, '#' starts a comment.
inline std::vector<TableRecord> parse_motion_table(std::istream& in, const std::string& origin) {
  std::vector<TableRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    std::vector<std::string> tok;
    for (std::string w; ss >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (tok.size() != 3)
      fail(ErrorKind::Config, origin + ":" + std::to_string(lineno) + ": expected 't theta beta'");
    try {
      out.push_back({parse_real(tok[0]), parse_angle(tok[1]), parse_angle(tok[2])});
    } catch (const Error& e) {
      fail(ErrorKind::Config, origin + ":" + std::to_string(lineno) + ": " + e.detail());
    }
  }
  return out;
}

inline std::vector<TableRecord> read_motion_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open motion table " + path);
  return parse_motion_table(in, path);
}

inline void apply_emit(RunConfig& cfg, std::string_view list) {
  cfg.emit_report = cfg.emit_csv = cfg.emit_svg = false;
  std::stringstream ss{std::string(list)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    if (item == "report") cfg.emit_report = true;
    else if (item == "csv") cfg.emit_csv = true;
    else if (item == "svg") cfg.emit_svg = true;
    else if (!item.empty()) fail(ErrorKind::Config, "unknown output '" + item + "' (report, csv, svg)");
  }
}

inline bool parse_bool(std::string_view text) {
  std::string s = detail::trim(text);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  fail(ErrorKind::Config, "not a boolean: '" + s + "'");
}

/// Sets one configuration field from its textual value.
inline void set_field(RunConfig& cfg, const std::string& key, const std::string& value) {
  MotionSpec& m = cfg.motion;
  if (key == "family") {
    auto f = parse_family(detail::trim(value));
    if (!f) fail(ErrorKind::Config, "unknown family '" + detail::trim(value) + "'");
    m.family = *f;
  } else if (key == "beta0") m.beta0 = parse_angle(value);
  else if (key == "beta1") m.beta1 = parse_angle(value);
  else if (key == "dbeta" || key == "amplitude") m.amplitude = parse_angle(value);
  else if (key == "m") m.m = static_cast<int>(parse_int(value));
  else if (key == "n") m.n = static_cast<int>(parse_int(value));
  else if (key == "a") m.a = parse_real(value);
  else if (key == "b") m.b = parse_real(value);
  else if (key == "warp") m.warp = parse_real(value);
  else if (key == "table") cfg.table_path = detail::trim(value);
  else if (key == "grid" || key == "N") {
    long N = parse_int(value);
    if (N < 256 || N % 2 != 0 || N > (1L << 24)) fail(ErrorKind::Config, "grid must be even and in [256, 2^24]");
    cfg.N = static_cast<std::size_t>(N);
  } else if (key == "eps_ladder" || key == "eps-ladder") cfg.eps_ladder = parse_ladder(value);
  else if (key == "lipschitz_bound") cfg.lipschitz_bound = parse_real(value);
  else if (key == "phi0") cfg.phi0 = parse_angle(value);
  else if (key == "area_rows") cfg.area.rows = static_cast<int>(parse_int(value));
  else if (key == "area_cols") cfg.area.cols = static_cast<int>(parse_int(value));
  else if (key == "threads") cfg.area.threads = static_cast<unsigned>(parse_int(value));
  else if (key == "out_dir" || key == "out-dir") cfg.out_dir = detail::trim(value);
  else if (key == "emit") apply_emit(cfg, value);
  else if (key == "strict") cfg.strict = parse_bool(value);
  else if (key == "name") cfg.name = detail::trim(value);
  else if (key.rfind("tol_", 0) == 0) {
    Tolerances& t = cfg.tolerances;
    std::map<std::string, double*> slots = {
        {"tol_line_vs_fiber", &t.line_vs_fiber}, {"tol_regularized", &t.regularized},
        {"tol_area_index", &t.area_index},       {"tol_corollary", &t.corollary},
        {"tol_holonomy", &t.holonomy},           {"tol_transport", &t.transport},
        {"tol_lemma", &t.lemma},                 {"tol_horizontality", &t.horizontality},
        {"tol_norm_drift", &t.norm_drift}};
    auto it = slots.find(key);
    if (it == slots.end()) fail(ErrorKind::Config, "unknown tolerance '" + key + "'");
    double v = parse_real(value);
    if (!(v > 0.0)) fail(ErrorKind::Config, "tolerances must be positive");
    *it->second = v;
  } else fail(ErrorKind::Config, "unknown field '" + key + "'");
}

/// Flat "key = value" text. Relative table paths resolve against base_dir.
inline RunConfig parse_config(std::istream& in, const std::string& origin, const std::string& base_dir = "") {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    auto eq = line.find('=');
    std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) fail(ErrorKind::Config, where + ": expected 'key = value'");
    std::string key = detail::trim(line.substr(0, eq)), value = line.substr(eq + 1);
    try {
      set_field(cfg, key, value);
    } catch (const Error& e) {
      fail(ErrorKind::Config, where + ": field '" + key + "': " + e.detail());
    }
  }
  if (!cfg.table_path.empty() && !base_dir.empty() && std::filesystem::path(cfg.table_path).is_relative())
    cfg.table_path = (std::filesystem::path(base_dir) / cfg.table_path).string();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config " + path);
  RunConfig cfg = parse_config(in, path, std::filesystem::path(path).parent_path().string());
  if (cfg.name == "run") cfg.name = std::filesystem::path(path).stem().string();
  return cfg;
}

/// Validated motion of a config, reading the table file when needed.
inline MotionSpec resolve_motion(const RunConfig& cfg) {
  MotionSpec m = cfg.motion;
  if (m.family == Family::Table && (m.table.empty() || !cfg.table_path.empty())) {
    if (cfg.table_path.empty()) fail(ErrorKind::Config, "family piecewise_linear_table needs a table file");
    if (!std::filesystem::exists(cfg.table_path)) fail(ErrorKind::Config, "table file not found: " + cfg.table_path);
    m.table = read_motion_table(cfg.table_path);
  }
  check_ladder(cfg.eps_ladder);
  return make_motion(m);
}

namespace detail {

inline void add_pair(PhaseReport& r, const Route& x, const Route& y, double tol) {
  if (x.done && y.done) r.residuals.push_back({x.name, y.name, std::abs(x.value - y.value), tol, false});
}

inline double route_tolerance(const Tolerances& t, const std::string& name) {
  if (name == "area_index") return t.area_index;
  if (name == "curvature_corollary") return t.corollary;
  if (name == "regularized_limit") return t.regularized;
  return t.line_vs_fiber;
}

}  // namespace detail

/// Runs every route on one motion and cross-checks them.
inline PhaseReport run(const RunConfig& cfg) {
  MotionSpec spec = resolve_motion(cfg);
  auto path = std::make_shared<const SampledPath>(sample(spec, cfg.N));
  const Tolerances& tol = cfg.tolerances;
  PhaseReport r;
  r.name = cfg.name;
  r.family = std::string(family_name(spec.family));
  r.N = cfg.N;
  r.n = path->winding();
  r.a = spec.a;
  r.b = spec.b;
  if (auto w = lipschitz_warning(*path, cfg.lipschitz_bound)) r.warnings.push_back(*w);

  PhaseResult ph = compute_phases(*path, spec.a, spec.b);
  r.delta_d = ph.delta_d;
  r.delta_g = ph.delta_g;
  r.delta_total = ph.delta_total;
  r.length = running_path_integral(*path, gauss_speed).back();

  Route line{"line_integral", true, ph.delta_g, {}};
  Route regl{"regularized_limit", false, 0.0, {}}, area{"area_index", false, 0.0, {}};
  Route fiber{"fiber_coordinate", false, 0.0, {}}, coro{"curvature_corollary", false, 0.0, {}};
  auto skip = [](Route& route, const Error& e) { route.skipped = e.what(); };

  RegularizedPhase rp;
  try {
    rp = regularized_phase(*path, cfg.eps_ladder);
    regl.done = true;
    regl.value = rp.limit;
    r.eps_ladder = rp.epsilons;
    r.eps_values = rp.values;
    r.eps_exponent = rp.exponent;
  } catch (const Error& e) {
    skip(regl, e);
  }

  double eps_min = cfg.eps_ladder.back();
  RegularizedPath reg = clamp(*path, eps_min);
  r.curve = gauss_curve(reg.path());
  CurveTopology topo;
  bool topo_done = false;
  try {
    topo = analyze_topology(reg.path(), cfg.area);
    topo_done = true;
    r.simple = topo.simple;
    r.intersection = topo.intersection;
    r.I_plus = topo.I_plus;
    r.I_minus = topo.I_minus;
    r.A_plus = topo.A_plus;
    r.A_minus = topo.A_minus;
    r.L_south_side = pole_indices(r.curve).L_south;
    if (topo.simple) {
      r.diagnostics["area_refinement_delta"] = topo.refinement_delta;
      r.diagnostics["area_grid_rows"] = topo.grid_rows;
      area.done = true;
      area.value = topo.A_plus - kTwoPi * topo.I_plus;
      MainTheoremResidual mt = main_theorem_residuals(ph.delta_g, topo);
      r.diagnostics["area_identity_plus"] = mt.plus_form;
      r.diagnostics["area_identity_minus"] = mt.minus_form;
      r.diagnostics["area_identity_mean"] = mt.mean_form;
      r.diagnostics["area_sum_minus_4pi"] = topo.A_plus + topo.A_minus - 4.0 * kPi;
    } else {
      area.skipped = "NotSimple: curve meets itself near t = " + fmt_double(topo.intersection->first) +
                     " and t = " + fmt_double(topo.intersection->second);
    }
  } catch (const Error& e) {
    skip(area, e);
  }

  LiftedPath lift = horizontal_lift(path, cfg.phi0);
  fiber.done = true;
  fiber.value = lift.phi.back() - lift.phi.front();
  r.diagnostics["fiber_residual"] = fiber_coordinate_check(*path, lift);
  r.diagnostics["lift_phi_disagreement"] = lift.max_phi_disagreement;
  r.diagnostics["lift_norm_drift"] = lift.embedded.norm_drift;
  r.diagnostics["lift_horizontality"] = lift.horizontality_residual;
  try {
    Holonomy h = holonomy(lift);
    r.tau_done = true;
    r.tau = h.tau;
    r.tau_embedded = h.tau_embedded;
    r.residuals.push_back({"tau", "exp(i line_integral)", std::abs(h.tau - std::polar(1.0, ph.delta_g)),
                           tol.holonomy, true});
    r.residuals.push_back({"tau", "tau_embedded", std::abs(h.tau - h.tau_embedded), tol.holonomy, true});
  } catch (const Error& e) {
    r.warnings.push_back(std::string("holonomy skipped: ") + e.what());
  }

  if (topo_done) {
    try {
      CorollaryResult c = corollary_check(*path, regl.done ? regl.value : ph.delta_g, topo, cfg.eps_ladder);
      coro.done = true;
      coro.value = c.rhs_plus;
      r.diagnostics["kappa_integral"] = c.kappa_integral;
      r.diagnostics["compass_increment"] = c.compass_increment;
    } catch (const Error& e) {
      skip(coro, e);
    }
  } else {
    coro.skipped = "topology unavailable: " + area.skipped;
  }

  try {
    double angle = transport_oracle(reg.path());
    double dg_eps = geometric_phase(reg.path());
    r.diagnostics["transport_angle"] = angle;
    r.residuals.push_back({"transport_angle", "line_integral(eps_min)", std::abs(wrap_angle(angle - dg_eps)),
                           tol.transport, true});
  } catch (const Error& e) {
    r.warnings.push_back(std::string("transport oracle skipped: ") + e.what());
  }

  try {
    if (path->has_corners() || reg.has_clamp_kink())
      fail(ErrorKind::NonSmooth, "compass angle is discontinuous at corners and clamp kinks");
    LiftedPath reg_lift = horizontal_lift(std::make_shared<const SampledPath>(reg.path()), 0.0);
    LemmaResult lr = lemma_omega_check(reg.path(), reg_lift);
    r.diagnostics["lemma_per_step"] = lr.per_step;
    r.diagnostics["running_identity"] = lr.running;
  } catch (const Error& e) {
    r.warnings.push_back(std::string("compass identity skipped: ") + e.what());
  }

  r.routes = {line, regl, area, fiber, coro};
  for (std::size_t i = 0; i < r.routes.size(); ++i)
    for (std::size_t j = i + 1; j < r.routes.size(); ++j) {
      double t = std::max(detail::route_tolerance(tol, r.routes[i].name), detail::route_tolerance(tol, r.routes[j].name));
      detail::add_pair(r, r.routes[i], r.routes[j], t);
    }

  auto limit = [&](const char* key, double bound) {
    auto it = r.diagnostics.find(key);
    if (it != r.diagnostics.end() && !(it->second < bound))
      r.failures.push_back(std::string(key) + " = " + fmt_double(it->second) + " exceeds " + fmt_double(bound));
  };
  limit("fiber_residual", tol.line_vs_fiber);
  limit("lift_phi_disagreement", tol.line_vs_fiber);
  limit("lift_norm_drift", tol.norm_drift);
  limit("lemma_per_step", tol.lemma);
  limit("running_identity", tol.lemma);
  if (!path->has_corners()) limit("lift_horizontality", tol.horizontality);
  for (const Residual& res : r.residuals)
    if (!res.pass())
      r.failures.push_back(res.a + " vs " + res.b + " = " + fmt_double(res.value) + " exceeds " +
                           fmt_double(res.tolerance));

  // Per-node columns. Compass, arclength and curvature live on gamma(eps_min).
  std::size_t n = path->size();
  r.col_t.resize(n);
  for (std::size_t k = 0; k < n; ++k) r.col_t[k] = path->t(k);
  r.col_theta = path->column(&PathNode::theta);
  r.col_beta = path->column(&PathNode::beta);
  r.col_running = ph.running_delta_g;
  r.col_phi = lift.phi;
  r.col_s = running_path_integral(reg.path(), gauss_speed);
  try {
    CompassProfile cp = geodesic_curvature(reg.path());
    r.col_compass = cp.phi_c;
    r.col_kappa = cp.kappa_g;
    if (cp.large_jumps > 0)
      r.warnings.push_back("compass angle jumped by more than pi/2 in " + std::to_string(cp.large_jumps) +
                           " steps; refine the grid");
  } catch (const Error&) {
    r.col_compass.assign(n, std::numeric_limits<double>::quiet_NaN());
    r.col_kappa.assign(n, std::numeric_limits<double>::quiet_NaN());
  }
  return r;
}

inline std::string format_report(const PhaseReport& r) {
  std::ostringstream o;
  char buf[256];
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    o << buf << '\n';
  };
  line("hopfdisc report: %s", r.name.c_str());
  line("  family              %s", r.family.c_str());
  line("  grid intervals      %zu", r.N);
  line("  winding n           %d", r.n);
  line("  radii a, b          %.17g, %.17g", r.a, r.b);
  line("  dynamical phase     %.17g", r.delta_d);
  line("  geometric phase     %.17g", r.delta_g);
  line("  total rotation      %.17g", r.delta_total);
  if (r.tau_done) line("  holonomy tau        %.17g %+.17gi", r.tau.real(), r.tau.imag());
  line("  simple              %s", r.simple ? "yes" : "no");
  line("  I+, I-              %d, %d", r.I_plus, r.I_minus);
  line("  A+, A-              %.17g, %.17g", r.A_plus, r.A_minus);
  line("  length L            %.17g", r.length);
  o << "\nGeometric phase by route\n";
  for (const Route& rt : r.routes) {
    if (rt.done) line("  %-22s %.17g", rt.name.c_str(), rt.value);
    else line("  %-22s skipped: %s", rt.name.c_str(), rt.skipped.c_str());
  }
  if (!r.eps_values.empty()) {
    o << "\nRegularized line integrals\n";
    for (std::size_t i = 0; i < r.eps_values.size(); ++i)
      line("  eps = %-10.6g %.17g", r.eps_ladder[i], r.eps_values[i]);
    line("  fitted exponent      %.6g", r.eps_exponent);
  }
  o << "\nResiduals\n";
  for (const Residual& res : r.residuals)
    line("  %-20s vs %-24s %10.3e  tol %.1e  %s%s", res.a.c_str(), res.b.c_str(), res.value, res.tolerance,
         res.pass() ? "ok" : "FAIL", res.congruence ? "  (mod 2pi)" : "");
  o << "\nDiagnostics\n";
  for (const auto& [k, v] : r.diagnostics) line("  %-24s %.6e", k.c_str(), v);
  if (!r.warnings.empty()) {
    o << "\nWarnings\n";
    for (const auto& w : r.warnings) o << "  " << w << '\n';
  }
  if (!r.failures.empty()) {
    o << "\nFailures\n";
    for (const auto& f : r.failures) o << "  " << f << '\n';
  }

  o << "\n[key=value]\n";
  auto kv = [&](const std::string& k, double v) { o << k << '=' << fmt_double(v) << '\n'; };
  o << "name=" << r.name << '\n' << "family=" << r.family << '\n';
  kv("N", static_cast<double>(r.N));
  kv("n", r.n);
  kv("delta_d", r.delta_d);
  kv("delta_g", r.delta_g);
  kv("delta_total", r.delta_total);
  for (const Route& rt : r.routes) {
    if (rt.done) kv("route." + rt.name, rt.value);
    else o << "route." << rt.name << "=skipped:" << rt.skipped << '\n';
  }
  if (r.tau_done) {
    kv("tau_re", r.tau.real());
    kv("tau_im", r.tau.imag());
  }
  o << "simple=" << (r.simple ? 1 : 0) << '\n';
  kv("I_plus", r.I_plus);
  kv("I_minus", r.I_minus);
  kv("A_plus", r.A_plus);
  kv("A_minus", r.A_minus);
  kv("L", r.length);
  for (const Residual& res : r.residuals) kv("residual." + res.a + "|" + res.b, res.value);
  for (const auto& [k, v] : r.diagnostics) kv("diag." + k, v);
  o << "warnings=" << r.warnings.size() << '\n';
  o << "failures=" << r.failures.size() << '\n';
  return o.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

inline void emit_csv(const PhaseReport& r, const std::string& path) {
  std::ostringstream o;
  o << "t,theta,beta,running_delta_g,phi_fiber,phi_compass,s,kappa_g\n";
  for (std::size_t k = 0; k < r.col_t.size(); ++k) {
    o << fmt_double(r.col_t[k]) << ',' << fmt_double(r.col_theta[k]) << ',' << fmt_double(r.col_beta[k]) << ','
      << fmt_double(r.col_running[k]) << ',' << fmt_double(r.col_phi[k]) << ',' << fmt_double(r.col_compass[k])
      << ',' << fmt_double(r.col_s[k]) << ',' << fmt_double(r.col_kappa[k]) << '\n';
  }
  write_text(path, o.str());
}

/// Chart-1 picture of gamma(eps_min): the north pole sits at the origin and
/// the south pole at infinity. The left region is shaded for simple curves.
inline std::string render_svg(const PhaseReport& r) {
  std::vector<Complex> z;
  z.reserve(r.curve.size());
  double extent = 1.2;
  for (const Vec3& p : r.curve) {
    Complex w = stereographic_point(p, Chart::North);
    z.push_back(w);
    extent = std::max(extent, 1.1 * std::abs(w));
  }
  extent = std::min(extent, 1e4);
  double stroke = extent / 300.0;
  std::ostringstream o;
  auto num = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", v);
    return std::string(b);
  };
  std::string path_d;
  for (std::size_t k = 0; k < z.size(); ++k)
    path_d += (k == 0 ? "M" : " L") + num(z[k].real()) + ' ' + num(-z[k].imag());
  path_d += " Z";
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"" << num(-extent) << ' '
    << num(-extent) << ' ' << num(2 * extent) << ' ' << num(2 * extent) << "\">\n";
  o << "  <title>" << r.name << ": Gauss curve, chart 1</title>\n";
  o << "  <rect x=\"" << num(-extent) << "\" y=\"" << num(-extent) << "\" width=\"" << num(2 * extent)
    << "\" height=\"" << num(2 * extent) << "\" fill=\"white\"/>\n";
  o << "  <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"" << num(stroke / 2)
    << "\" stroke-dasharray=\"" << num(4 * stroke) << "\"/>\n";
  if (r.simple) {
    // The left region contains the south pole exactly when it is unbounded here.
    std::string d = path_d;
    if (r.L_south_side == 1) {
      double e = extent;
      d = "M" + num(-e) + ' ' + num(-e) + " L" + num(e) + ' ' + num(-e) + " L" + num(e) + ' ' + num(e) + " L" +
          num(-e) + ' ' + num(e) + " Z " + path_d;
    }
    o << "  <path d=\"" << d << "\" fill=\"#9ecae1\" fill-opacity=\"0.5\" fill-rule=\"evenodd\" stroke=\"none\"/>\n";
  }
  o << "  <path d=\"" << path_d << "\" fill=\"none\" stroke=\"#08519c\" stroke-width=\"" << num(stroke) << "\"/>\n";
  // Arrowheads along the traversal direction.
  const int arrows = 8;
  for (int a = 0; a < arrows && z.size() > 2; ++a) {
    std::size_t k = (z.size() - 1) * static_cast<std::size_t>(2 * a + 1) / (2 * arrows);
    Complex d = z[k + 1] - z[k];
    if (std::abs(d) == 0.0) continue;
    d /= std::abs(d);
    Complex tip = z[k], back = tip - 6.0 * stroke * d, side = Complex(-d.imag(), d.real()) * (3.0 * stroke);
    Complex p1 = back + side, p2 = back - side;
    o << "  <polygon points=\"" << num(tip.real()) << ',' << num(-tip.imag()) << ' ' << num(p1.real()) << ','
      << num(-p1.imag()) << ' ' << num(p2.real()) << ',' << num(-p2.imag()) << "\" fill=\"#08519c\"/>\n";
  }
  o << "  <circle cx=\"0\" cy=\"0\" r=\"" << num(2 * stroke) << "\" fill=\"#cb181d\"/>\n";
  o << "  <text x=\"" << num(3 * stroke) << "\" y=\"" << num(-3 * stroke) << "\" font-size=\"" << num(12 * stroke)
    << "\" fill=\"#cb181d\">N</text>\n";
  o << "  <text x=\"" << num(-extent + 4 * stroke) << "\" y=\"" << num(extent - 4 * stroke) << "\" font-size=\""
    << num(12 * stroke) << "\" fill=\"#cb181d\">S at infinity</text>\n";
  o << "</svg>\n";
  return o.str();
}

inline void emit_svg(const PhaseReport& r, const std::string& path) { write_text(path, render_svg(r)); }

/// Writes the selected outputs of a finished run into cfg.out_dir.
inline std::vector<std::string> write_outputs(const RunConfig& cfg, const PhaseReport& r) {
  std::vector<std::string> written;
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + cfg.out_dir + ": " + ec.message());
  auto base = (std::filesystem::path(cfg.out_dir) / r.name).string();
  if (cfg.emit_report) {
    write_text(base + ".report.txt", format_report(r));
    written.push_back(base + ".report.txt");
  }
  if (cfg.emit_csv) {
    emit_csv(r, base + ".csv");
    written.push_back(base + ".csv");
  }
  if (cfg.emit_svg) {
    emit_svg(r, base + ".svg");
    written.push_back(base + ".svg");
  }
  return written;
}

}  // namespace hopfdisc
