#pragma once

#include "hopfdisc/lift.hpp"
#include "hopfdisc/topology.hpp"

namespace hopfdisc {

struct ArclengthPath {
  std::vector<double> s;
  double L = 0.0;
  std::vector<double> speed;
  std::vector<bool> stationary;
};

inline double gauss_speed(const PathNode& p) {
  return std::hypot(std::sin(p.beta) * p.dtheta, p.dbeta);
}

inline ArclengthPath arclength(const SampledPath& path) {
  ArclengthPath a;
  a.s = running_path_integral(path, gauss_speed);
  a.L = a.s.back();
  if (!(a.L >= tol::kDegenerateLength)) fail(ErrorKind::DegenerateCurve, "the Gauss vector does not move");
  for (const PathNode& p : path.nodes()) {
    a.speed.push_back(gauss_speed(p));
    a.stationary.push_back(a.speed.back() < tol::kStationary);
  }
  return a;
}

struct CompassProfile {
  std::vector<double> phi_c;
  std::vector<double> kappa_g;  // empty until geodesic_curvature fills it
  std::vector<bool> stationary;
  int large_jumps = 0;  // unwrap steps above pi/2: the grid is too coarse
  double increment() const { return phi_c.back() - phi_c.front(); }
};

/// Angle of the Gauss-curve velocity in the frame: cos(phi_c) = -sin(beta)
/// theta'/s', sin(phi_c) = beta'/s'. Unwrapped along t; held constant across
/// stationary nodes.
inline CompassProfile compass_angle(const SampledPath& path) {
  CompassProfile c;
  std::size_t n = path.size();
  c.phi_c.assign(n, 0.0);
  c.stationary.assign(n, false);
  std::optional<std::size_t> first;
  for (std::size_t k = 0; k < n; ++k) {
    const PathNode& p = path.node(k);
    c.stationary[k] = gauss_speed(p) < tol::kStationary;
    if (c.stationary[k]) continue;
    double raw = std::atan2(p.dbeta, -std::sin(p.beta) * p.dtheta);
    if (!first) {
      first = k;
      c.phi_c[k] = raw;
      continue;
    }
    double prev = c.phi_c[k - 1];
    double step = wrap_angle(raw - prev);
    if (std::abs(step) > kPi / 2) ++c.large_jumps;
    c.phi_c[k] = prev + step;
  }
  if (!first) fail(ErrorKind::DegenerateCurve, "the Gauss vector never moves");
  for (std::size_t k = 0; k < *first; ++k) c.phi_c[k] = c.phi_c[*first];
  for (std::size_t k = *first + 1; k < n; ++k)
    if (c.stationary[k]) c.phi_c[k] = c.phi_c[k - 1];
  return c;
}

namespace detail {

// Fourth-order first and second derivatives on a uniform grid. With
// periodic = true, node N is node 0 shifted by offset.
template <class T>
std::vector<T> fd_derivative(const std::vector<T>& f, double h, bool periodic, T offset, int order) {
  std::size_t N = f.size() - 1;
  auto at = [&](long k) -> T {
    if (k < 0) return T(f[static_cast<std::size_t>(k + static_cast<long>(N))] - offset);
    if (k > static_cast<long>(N)) return T(f[static_cast<std::size_t>(k - static_cast<long>(N))] + offset);
    return f[static_cast<std::size_t>(k)];
  };
  std::vector<T> d(f.size());
  for (std::size_t i = 0; i <= N; ++i) {
    long k = static_cast<long>(i);
    bool interior = periodic || (k >= 2 && k + 2 <= static_cast<long>(N));
    if (interior) {
      if (order == 1)
        d[i] = T((at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h));
      else
        d[i] = T((-at(k - 2) + 16.0 * at(k - 1) - 30.0 * at(k) + 16.0 * at(k + 1) - at(k + 2)) / (12.0 * h * h));
      continue;
    }
    // One-sided stencils, mirrored at the right end.
    bool left = k < 2;
    long s = left ? 1 : -1;
    long o = left ? 0 : static_cast<long>(N);
    long j = left ? k : static_cast<long>(N) - k;
    auto F = [&](long m) { return at(o + s * m); };
    if (order == 1) {
      T v = j == 0 ? T(-25.0 * F(0) + 48.0 * F(1) - 36.0 * F(2) + 16.0 * F(3) - 3.0 * F(4))
                   : T(-3.0 * F(0) - 10.0 * F(1) + 18.0 * F(2) - 6.0 * F(3) + F(4));
      d[i] = T(static_cast<double>(s) * v / (12.0 * h));
    } else {
      T v = j == 0 ? T(45.0 * F(0) - 154.0 * F(1) + 214.0 * F(2) - 156.0 * F(3) + 61.0 * F(4) - 10.0 * F(5))
                   : T(10.0 * F(0) - 15.0 * F(1) - 4.0 * F(2) + 14.0 * F(3) - 6.0 * F(4) + F(5));
      d[i] = T(v / (12.0 * h * h));
    }
  }
  return d;
}

inline std::vector<double> running_simpson(std::span<const double> f, double h) {
  std::vector<double> out(f.size(), 0.0);
  std::size_t m = f.size() - 1;
  for (std::size_t j = 1; j <= m; ++j) {
    if (j % 2 == 0)
      out[j] = out[j - 2] + h / 3.0 * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
    else if (j < m)
      out[j] = out[j - 1] + h / 12.0 * (5.0 * f[j - 1] + 8.0 * f[j] - f[j + 1]);
    else
      out[j] = out[j - 1] + h / 12.0 * (-f[j - 2] + 8.0 * f[j - 1] + 5.0 * f[j]);
  }
  return out;
}

inline bool periodic_grid(const SampledPath& path) { return path.smooth_closed() && !path.has_corners(); }

}  // namespace detail

/// Compass profile with kappa_g = -(phi_c' + cos(beta) theta') / s', the
/// curvature against the normal nu = -sin(phi_c) e1 + cos(phi_c) e2.
/// phi_c' is a five-point difference; stationary nodes get kappa_g = 0.
inline CompassProfile geodesic_curvature(const SampledPath& path) {
  CompassProfile c = compass_angle(path);
  bool periodic = detail::periodic_grid(path);
  double offset = c.phi_c.back() - c.phi_c.front();
  auto dphi = detail::fd_derivative(c.phi_c, path.step(), periodic, offset, 1);
  c.kappa_g.assign(path.size(), 0.0);
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (c.stationary[k]) continue;
    const PathNode& p = path.node(k);
    c.kappa_g[k] = -(dphi[k] + std::cos(p.beta) * p.dtheta) / gauss_speed(p);
  }
  return c;
}

/// Integral of kappa_g ds over the path.
inline double total_geodesic_curvature(const SampledPath& path, const CompassProfile& c) {
  std::vector<double> f(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) f[k] = c.kappa_g[k] * gauss_speed(path.node(k));
  return detail::running_simpson(f, path.step()).back();
}

struct FrenetCurvature {
  std::vector<double> from_g2;   // g''(s) . nu
  std::vector<double> from_nu1;  // -g'(s) . nu'(s)
  double orthogonality = 0.0;    // max of ||g'(s)| - 1|, ||nu| - 1|, |g'(s) . nu|
};

/// kappa_g from finite differences of the Gauss curve and of the normal.
inline FrenetCurvature geodesic_curvature_fd(const SampledPath& path) {
  CompassProfile c = compass_angle(path);
  bool periodic = detail::periodic_grid(path);
  std::size_t n = path.size();
  std::vector<Vec3> g(n), nu(n);
  for (std::size_t k = 0; k < n; ++k) {
    const PathNode& p = path.node(k);
    Frame f = local_frame(p.theta, p.beta);
    g[k] = f.e3;
    nu[k] = -std::sin(c.phi_c[k]) * f.e1 + std::cos(c.phi_c[k]) * f.e2;
  }
  double h = path.step();
  auto g1 = detail::fd_derivative(g, h, periodic, Vec3(Vec3::Zero()), 1);
  auto g2 = detail::fd_derivative(g, h, periodic, Vec3(Vec3::Zero()), 2);
  auto nu1 = detail::fd_derivative(nu, h, periodic, Vec3(Vec3::Zero()), 1);
  FrenetCurvature r;
  r.from_g2.assign(n, 0.0);
  r.from_nu1.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (c.stationary[k]) continue;
    const PathNode& p = path.node(k);
    double sp = gauss_speed(p);
    Vec3 T = gauss_velocity(p) / sp;
    r.orthogonality = std::max({r.orthogonality, std::abs(T.norm() - 1.0), std::abs(nu[k].norm() - 1.0),
                                std::abs(T.dot(nu[k]))});
    r.from_g2[k] = g2[k].dot(nu[k]) / (sp * sp);
    r.from_nu1[k] = -g1[k].dot(nu1[k]) / (sp * sp);
  }
  return r;
}

struct CorollaryResult {
  std::vector<double> epsilons;
  std::vector<double> kappa_integrals;  // closed-curve integral of kappa_g on gamma(eps)
  double kappa_integral = 0.0;           // eps -> 0 limit
  double compass_increment = 0.0;        // on gamma(eps_min)
  double rhs_plus = 0.0, rhs_minus = 0.0, rhs_mean = 0.0;
  double residual = 0.0;                 // max |rhs - delta_g|
};

/// delta_g = 2 pi (1 - I+) + int kappa_g ds and its two rewritings via
/// I+ + I- = 2. The curvature integral is taken on gamma(eps) for every eps
/// of the ladder and extrapolated like the phase.
inline CorollaryResult corollary_check(const SampledPath& path, double delta_g, const CurveTopology& topo,
                                       std::span<const double> ladder) {
  if (!topo.simple) fail(ErrorKind::NotSimple, "the curvature identity needs a simple curve");
  if (path.has_corners()) fail(ErrorKind::NonSmooth, "motion has corners");
  check_ladder(ladder);
  CorollaryResult r;
  for (double e : ladder) {
    RegularizedPath reg = clamp(path, e);
    if (reg.has_clamp_kink()) fail(ErrorKind::NonSmooth, "clamping leaves a kink at eps = " + fmt_double(e));
    CompassProfile c = geodesic_curvature(reg.path());
    r.epsilons.push_back(e);
    r.kappa_integrals.push_back(total_geodesic_curvature(reg.path(), c));
    r.compass_increment = c.increment();
  }
  r.kappa_integral = extrapolate_limit(r.epsilons, r.kappa_integrals).limit;
  r.rhs_plus = kTwoPi * (1 - topo.I_plus) + r.kappa_integral;
  r.rhs_minus = kTwoPi * (topo.I_minus - 1) + r.kappa_integral;
  r.rhs_mean = kPi * (topo.I_minus - topo.I_plus) + r.kappa_integral;
  r.residual = std::max({std::abs(r.rhs_plus - delta_g), std::abs(r.rhs_minus - delta_g),
                         std::abs(r.rhs_mean - delta_g)});
  return r;
}

struct LemmaResult {
  double per_step = 0.0;  // max |d phi_fiber - (d phi_c + kappa_g ds)| over grid steps
  double running = 0.0;   // max |Delta_g(t) - (phi_c(t) - phi_c(0) + int_0^t kappa_g ds)|
};

/// Along the horizontal lift d phi = d phi_c + kappa_g ds.
inline LemmaResult lemma_omega_check(const SampledPath& path, const LiftedPath& lift) {
  if (lift.phi.size() != path.size()) fail(ErrorKind::Domain, "lift does not belong to this path");
  CompassProfile c = geodesic_curvature(path);
  std::vector<double> f(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) f[k] = c.kappa_g[k] * gauss_speed(path.node(k));
  auto K = detail::running_simpson(f, path.step());
  auto dg = running_geometric_phase(path);
  LemmaResult r;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    double lhs = lift.phi[k + 1] - lift.phi[k];
    double rhs = (c.phi_c[k + 1] - c.phi_c[k]) + (K[k + 1] - K[k]);
    r.per_step = std::max(r.per_step, std::abs(lhs - rhs));
  }
  for (std::size_t k = 0; k < path.size(); ++k)
    r.running = std::max(r.running, std::abs(dg[k] - (c.phi_c[k] - c.phi_c[0] + K[k])));
  return r;
}

}  // namespace hopfdisc
