// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
#include "support.hpp"

#include <cstdio>
#include <functional>

using namespace hopfdisc;
using namespace hopfdisc::test;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what, double value, double tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s %.3g (tol %.1g)", detail.empty() ? "" : "; ", what.c_str(), value, tol);
    if (!ok) pass = false;
    detail += buf;
  }
  void below(const std::string& what, double value, double tol) { require(value < tol, what, value, tol); }
  void holds(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail += (detail.empty() ? "" : "; ") + what + (ok ? " holds" : " fails");
  }
};

const double kLatitudes[] = {kPi / 6, kPi / 4, kPi / 3, kPi / 2, 2 * kPi / 3};

std::vector<std::pair<std::string, MotionSpec>> smooth_cases() {
  std::vector<std::pair<std::string, MotionSpec>> out;
  for (double b : kLatitudes) out.emplace_back("latitude", latitude(b));
  out.emplace_back("wobble(1.0,0.5,3)", wobble(1.0, 0.5, 3));
  out.emplace_back("wobble(1.4,0.3,2)", wobble(1.4, 0.3, 2));
  out.emplace_back("wobble(2.0,0.6,5)", wobble(2.0, 0.6, 5));
  return out;
}

std::vector<std::pair<std::string, MotionSpec>> all_families() {
  auto out = smooth_cases();
  out.emplace_back("latitude n=3", latitude(1.2, 3));
  out.emplace_back("flat coin", latitude(0.0));
  out.emplace_back("sweep", sweep(0.3, 2.5));
  out.emplace_back("sweep to pole", sweep(0.4, kPi));
  MotionSpec warped = wobble(1.1, 0.4, 2);
  warped.warp = 0.7;
  out.emplace_back("warped wobble", make_motion(warped));
  out.emplace_back("square table", square_table());
  out.emplace_back("figure-eight table", figure_eight_table());
  return out;
}

Outcome latitude_exactness() {
  Outcome o;
  double worst = 0.0;
  for (double b : kLatitudes)
    worst = std::max(worst, std::abs(geometric_phase(sample(latitude(b), 8192)) + kTwoPi * std::cos(b)));
  o.below("max |dg + 2 pi cos b0|", worst, 1e-9);
  return o;
}

Outcome main_theorem() {
  Outcome o;
  double worst = 0.0, forms = 0.0, sum = 0.0;
  bool indices = true;
  for (const auto& [name, spec] : smooth_cases()) {
    SampledPath p = sample(spec, 8192);
    CurveTopology t = analyze_topology(clamp(p, 0.01).path());
    if (!t.simple) {
      o.holds(false, name + " simple");
      continue;
    }
    MainTheoremResidual r = main_theorem_residuals(geometric_phase(p), t);
    worst = std::max(worst, r.plus_form);
    forms = std::max({forms, std::abs(r.plus_form - r.minus_form), std::abs(r.plus_form - r.mean_form)});
    sum = std::max(sum, std::abs(t.A_plus + t.A_minus - 2 * kTwoPi));
    indices &= t.I_plus + t.I_minus == 2;
  }
  o.below("max |dg - (A+ - 2 pi I+)|", worst, 2e-3);
  o.holds(indices, "I+ + I- = 2");
  o.below("form spread", forms, 1e-12);
  o.below("|A+ + A- - 4 pi|", sum, 1e-12);
  return o;
}

Outcome holonomy_agreement() {
  Outcome o;
  double tau = 0.0, phi = 0.0, drift = 0.0;
  for (const auto& [name, spec] : all_families()) {
    auto p = sampled(spec);
    LiftedPath l = horizontal_lift(p, 0.0);
    Holonomy h = holonomy(l);
    tau = std::max(tau, std::abs(h.tau - std::polar(1.0, geometric_phase(*p))));
    phi = std::max(phi, std::abs(l.embedded.phi.back() - l.phi.back()));
    drift = std::max(drift, l.embedded.norm_drift);
  }
  o.below("max |tau - exp(i dg)|", tau, 1e-8);
  o.below("embedded vs angle phi(1)", phi, 1e-8);
  o.below("norm drift", drift, 1e-10);
  return o;
}

Outcome fiber_coordinate() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, spec] : all_families()) worst = std::max(worst, fiber_coordinate_check(sample(spec, 8192)));
  o.below("max node |dg(t) - (phi(t) - phi(0))|", worst, 1e-8);
  return o;
}

Outcome covering_space() {
  Outcome o;
  RunConfig c;
  c.name = "flat_coin";
  c.motion = latitude(0.0);
  PhaseReport r = run(c);
  double limit = r.route("regularized_limit")->value;
  o.below("|dg(eps->0) + 2 pi|", std::abs(limit + kTwoPi), 1e-6);
  o.below("|tau - 1|", std::abs(r.tau - 1.0), 1e-8);
  std::string text = format_report(r);
  bool shown = text.find("route.regularized_limit=") != std::string::npos && text.find("tau_re=") != std::string::npos;
  o.holds(shown, "report shows both");
  return o;
}

Outcome corollary() {
  Outcome o;
  double worst = 0.0, closed = 0.0;
  for (const auto& [name, spec] : smooth_cases()) {
    SampledPath p = sample(spec, 8192);
    CurveTopology t = analyze_topology(clamp(p, 0.01).path());
    double dg = geometric_phase(p);
    CorollaryResult c = corollary_check(p, dg, t, default_eps_ladder());
    worst = std::max(worst, std::abs(dg - c.rhs_plus));
    if (spec.family == Family::ConstantTilt) {
      closed = std::max(closed, std::abs(c.kappa_integral + kTwoPi * std::cos(spec.beta0)));
      if (t.I_plus != 1) o.holds(false, "latitude I+ = 1");
    }
  }
  o.below("max |dg - (2 pi (1 - I+) + int kappa)|", worst, 1e-4);
  o.below("latitude |int kappa + 2 pi cos b0|", closed, 1e-4);
  return o;
}

Outcome connection_axioms() {
  Outcome o;
  auto g = rng(101);
  std::normal_distribution<double> nd;
  double fundamental = 0.0, invariance = 0.0, recon = 0.0, horizontal = 0.0;
  for (int i = 0; i < 100; ++i) {
    S3Point p = random_s3(g);
    Complex A(0.0, nd(g));
    fundamental = std::max(fundamental, std::abs(canonical_connection(fundamental_vector(A, p)) - A));
    TangentS3 v = random_tangent(p, g);
    invariance = std::max(invariance, std::abs(canonical_connection(v.act(random_unit_complex(g))) -
                                               canonical_connection(v)));
    Split s = split(v);
    recon = std::max(recon, std::abs(s.horizontal.v1() + s.vertical.v1() - v.v1()) +
                                std::abs(s.horizontal.v2() + s.vertical.v2() - v.v2()));
    horizontal = std::max(horizontal, std::abs(canonical_connection(s.horizontal)));
  }
  // Gauge relation along random overlap curves z(t) = c + t d in C^2.
  double gauge = 0.0;
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    Complex c1(nd(g), nd(g)), c2(nd(g), nd(g)), d1(nd(g), nd(g)), d2(nd(g), nd(g));
    auto psi = [&](double t) { return transition_function(c1 + t * d1, c2 + t * d2); };
    Complex dlog = (psi(h) - psi(-h)) / (2 * h) / psi(0.0);
    ProjectiveTangent tan{c1, c2, d1, d2};
    gauge = std::max(gauge, std::abs(chart_connection(2, tan) - chart_connection(1, tan) - dlog));
  }
  o.below("omega(A*) - A", fundamental, 1e-14);
  o.below("right invariance", invariance, 1e-12);
  o.below("split reconstruction", recon, 1e-14);
  o.below("horizontal residual", horizontal, 1e-12);
  o.below("gauge relation", gauge, 1e-8);
  return o;
}

Outcome round_trip() {
  Outcome o;
  auto g = rng(202);
  std::uniform_real_distribution<double> th(-kPi, kPi), be(0.0, kPi - 0.1);
  double trip = 0.0, value = 0.0;
  for (int i = 0; i < 1000; ++i) {
    SpherePoint p(random_unit(g));
    trip = std::max(trip, (cp1_to_sphere(sphere_to_cp1(p)).vec() - p.vec()).norm());
    double t = th(g), b = be(g);
    Complex w = chart(1, sphere_to_cp1(gauss_vector(t, b)));
    value = std::max(value, std::abs(w - std::polar(std::tan(0.5 * b), -t)));
  }
  o.below("max round-trip error", trip, 1e-12);
  o.below("chart-1 value error", value, 1e-12);
  return o;
}

Outcome transport() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, spec] : smooth_cases()) {
    SampledPath p = sample(spec, 8192);
    worst = std::max(worst, std::abs(wrap_angle(transport_oracle(p) - geometric_phase(p))));
  }
  o.below("max |transport - dg| mod 2 pi", worst, 1e-5);
  return o;
}

Outcome convergence() {
  Outcome o;
  // Warped latitude: theta(t) = 2 pi (t - w sin(2 pi t) / 2 pi) gives a
  // closed form at every node; measured at t = 1/4.
  const double b0 = 1.1, w = 0.8;
  MotionSpec s = latitude(b0);
  s.warp = w;
  s = make_motion(s);
  auto theta = [&](double t) { return kTwoPi * t - w * std::sin(kTwoPi * t); };
  auto errors = [&](std::size_t N) {
    SampledPath p = sample(s, N);
    double exact = -std::cos(b0) * theta(0.25);
    double phase = std::abs(running_geometric_phase(p)[N / 4] - exact);
    EmbeddedLift e = horizontal_lift(p, 0.0).embedded;
    double lift = std::abs(e.phi[N / 4] - e.phi[0] - exact);
    return std::make_pair(phase, lift);
  };
  auto [p1, l1] = errors(256);
  auto [p2, l2] = errors(512);
  auto [p3, l3] = errors(1024);
  double phase_ratio = std::min(p1 / p2, p2 / p3), lift_ratio = std::min(l1 / l2, l2 / l3);
  o.require(phase_ratio >= 8.0, "Simpson error ratio", phase_ratio, 8.0);
  o.require(lift_ratio >= 8.0, "lift error ratio", lift_ratio, 8.0);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"latitude exactness", latitude_exactness},
      {"area-index identity", main_theorem},
      {"holonomy", holonomy_agreement},
      {"fiber coordinate", fiber_coordinate},
      {"covering-space distinction", covering_space},
      {"curvature identity", corollary},
      {"connection axioms", connection_axioms},
      {"S2 <-> CP1 round trip", round_trip},
      {"transport oracle", transport},
      {"convergence orders", convergence},
  };
  int failed = 0, k = 0;
  for (const auto& [name, check] : criteria) {
    ++k;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%d/%d criteria passed\n", k - failed, k);
  return failed == 0 ? 0 : 1;
}
