#pragma once

#include "hopfdisc/hopf.hpp"
#include "hopfdisc/phase.hpp"

#include <array>
#include <memory>

namespace hopfdisc {

/// Embedded lift integrated directly in C^2.
struct EmbeddedLift {
  std::vector<std::array<Complex, 2>> z;  // per node, unit norm
  std::vector<double> phi;                // fiber coordinate read back from z
  double norm_drift = 0.0;                // largest |1 - |z|^2| before renormalizing
  double horizontality_residual = 0.0;    // largest |omega(zdot)|, zdot by finite differences
};

/// Horizontal lift of a sampled Gauss curve with fiber coordinate phi.
struct LiftedPath {
  std::shared_ptr<const SampledPath> base;
  std::vector<double> phi;
  std::vector<S3Point> s3;
  EmbeddedLift embedded;
  double horizontality_residual = 0.0;
  double max_phi_disagreement = 0.0;  // angle lift vs embedded lift over all nodes
};

namespace detail {

using C2 = std::array<Complex, 2>;

// Horizontal velocity over the Gauss velocity gdot: zdot = lambda (-conj z2, conj z1).
inline C2 horizontal_velocity(const C2& z, const Vec3& gdot) {
  Complex u(0.5 * gdot.x(), -0.5 * gdot.y());
  Complex lam = z[0] * z[0] * u - z[1] * z[1] * std::conj(u) - gdot.z() * z[0] * z[1];
  return {-lam * std::conj(z[1]), lam * std::conj(z[0])};
}

inline C2 axpy(const C2& z, double h, const C2& k) { return {z[0] + h * k[0], z[1] + h * k[1]}; }

// Fiber angle of z over a point with azimuth theta, taken on the branch
// nearest to ref. phi is defined modulo 4 pi by z.
inline double fiber_angle(const C2& z, double theta, double ref) {
  double raw = std::abs(z[0]) >= std::abs(z[1]) ? 2.0 * std::arg(z[0]) - theta
                                                 : 2.0 * std::arg(z[1]) + theta;
  const double period = 2.0 * kTwoPi;
  return raw + period * std::round((ref - raw) / period);
}

inline void rk4_scalar(double& y, const Piece& p, double (*f)(const PathNode&)) {
  double h = p.t1 - p.t0;
  double k1 = f(p.a), k2 = f(p.mid), k3 = f(p.mid), k4 = f(p.b);
  y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/// RK4 in C^2 along the horizontal distribution, renormalized per step.
inline EmbeddedLift embedded_lift(const SampledPath& path, const S3Point& y0) {
  using detail::C2;
  std::size_t N = path.intervals();
  EmbeddedLift out;
  out.z.resize(N + 1);
  out.phi.resize(N + 1);
  C2 z{y0.z1(), y0.z2()};
  out.z[0] = z;
  // Initial fiber angle: any branch; phi(0) is fixed by the caller's y0.
  out.phi[0] = detail::fiber_angle(z, path.node(0).theta, 0.0);
  for (std::size_t k = 0; k < N; ++k) {
    for (const Piece& p : path.pieces(k)) {
      double h = p.t1 - p.t0;
      Vec3 ga = gauss_velocity(p.a), gm = gauss_velocity(p.mid), gb = gauss_velocity(p.b);
      C2 k1 = detail::horizontal_velocity(z, ga);
      C2 k2 = detail::horizontal_velocity(detail::axpy(z, 0.5 * h, k1), gm);
      C2 k3 = detail::horizontal_velocity(detail::axpy(z, 0.5 * h, k2), gm);
      C2 k4 = detail::horizontal_velocity(detail::axpy(z, h, k3), gb);
      for (int c = 0; c < 2; ++c) z[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      double n2 = std::norm(z[0]) + std::norm(z[1]);
      out.norm_drift = std::max(out.norm_drift, std::abs(n2 - 1.0));
      double r = std::sqrt(n2);
      z[0] /= r;
      z[1] /= r;
    }
    out.z[k + 1] = z;
    out.phi[k + 1] = detail::fiber_angle(z, path.node(k + 1).theta, out.phi[k]);
  }
  // Five-point velocity away from the ends and from corners.
  double h = path.step();
  auto near_corner = [&](std::size_t k) {
    for (std::size_t j = k - 2; j <= k + 2; ++j)
      if (path.corner_at_node(j) || (j < N && !path.clean(j))) return true;
    return false;
  };
  for (std::size_t k = 2; k + 2 <= N; ++k) {
    if (path.has_corners() && near_corner(k)) continue;
    Complex d[2];
    for (int c = 0; c < 2; ++c)
      d[c] = (out.z[k - 2][c] - 8.0 * out.z[k - 1][c] + 8.0 * out.z[k + 1][c] - out.z[k + 2][c]) /
             (12.0 * h);
    double w = (std::conj(out.z[k][0]) * d[0] + std::conj(out.z[k][1]) * d[1]).imag();
    out.horizontality_residual = std::max(out.horizontality_residual, std::abs(w));
  }
  return out;
}

/// Solves phi' = -cos(beta) theta' by classical RK4 on each C^1 piece and
/// cross-checks against the embedded C^2 lift started at the same point.
inline LiftedPath horizontal_lift(std::shared_ptr<const SampledPath> path, double phi0) {
  const SampledPath& p = *path;
  std::size_t N = p.intervals();
  LiftedPath out;
  out.base = path;
  out.phi.resize(N + 1);
  double acc = 0.0;
  out.phi[0] = phi0;
  for (std::size_t k = 0; k < N; ++k) {
    for (const Piece& pc : p.pieces(k)) detail::rk4_scalar(acc, pc, geometric_integrand);
    out.phi[k + 1] = phi0 + acc;
  }
  out.s3.reserve(N + 1);
  for (std::size_t k = 0; k <= N; ++k)
    out.s3.push_back(s3_from_angles(out.phi[k], p.node(k).theta, p.node(k).beta));

  out.embedded = embedded_lift(p, out.s3[0]);
  // Align the embedded branch with phi0; both are continuous in t.
  double shift = phi0 - out.embedded.phi[0];
  for (double& v : out.embedded.phi) v += shift;
  out.horizontality_residual = out.embedded.horizontality_residual;
  for (std::size_t k = 0; k <= N; ++k)
    out.max_phi_disagreement = std::max(out.max_phi_disagreement, std::abs(out.phi[k] - out.embedded.phi[k]));
  return out;
}

inline LiftedPath horizontal_lift(const SampledPath& path, double phi0) {
  return horizontal_lift(std::make_shared<const SampledPath>(path), phi0);
}

inline void check_closed(const SampledPath& path) {
  const PathNode& a = path.nodes().front();
  const PathNode& b = path.nodes().back();
  double turns = (b.theta - a.theta) / kTwoPi;
  if (std::abs(turns - std::round(turns)) * kTwoPi >= tol::kClosure ||
      std::abs(b.beta - a.beta) >= tol::kClosure || (gauss_vec(a) - gauss_vec(b)).norm() >= tol::kClosure)
    fail(ErrorKind::NotClosed, "path does not close: theta and beta must return");
}

struct Holonomy {
  Complex tau;           // exp(i (phi(1) - phi(0))) from the angle lift
  Complex tau_embedded;  // square of the C^2 element h with y(1) = y(0) h
  double delta_phi = 0.0;
};

/// The fiber coordinate phi acts on C^2 through exp(i phi / 2), so the
/// right-action element carried by the embedded lift is the square root of
/// tau up to the sign (-1)^n; its square is compared with tau.
inline Holonomy holonomy(const LiftedPath& lift) {
  check_closed(*lift.base);
  Holonomy h;
  h.delta_phi = lift.phi.back() - lift.phi.front();
  h.tau = std::polar(1.0, h.delta_phi);
  const auto& z0 = lift.embedded.z.front();
  const auto& z1 = lift.embedded.z.back();
  Complex g = std::conj(z0[0]) * z1[0] + std::conj(z0[1]) * z1[1];
  h.tau_embedded = (g * g) / std::norm(g);
  return h;
}

inline Complex holonomy(const SampledPath& path) {
  check_closed(path);
  return holonomy(horizontal_lift(path, 0.0)).tau;
}

/// max_k |Delta_g(t_k) - (phi(t_k) - phi(0))| with Delta_g from the phase
/// quadrature and phi from the angle lift.
inline double fiber_coordinate_check(const SampledPath& path, const LiftedPath& lift) {
  auto running = running_geometric_phase(path);
  double worst = 0.0;
  for (std::size_t k = 0; k < running.size(); ++k)
    worst = std::max(worst, std::abs(running[k] - (lift.phi[k] - lift.phi[0])));
  return worst;
}

inline double fiber_coordinate_check(const SampledPath& path) {
  return fiber_coordinate_check(path, horizontal_lift(path, 0.0));
}

struct HomomorphismResidual {
  double product = 0.0;  // |tau(c2 after c1) - tau(c1) tau(c2)|
  double inverse = 0.0;  // |tau(c1^-1 after c1) - 1|
};

inline HomomorphismResidual holonomy_homomorphism_check(const SampledPath& p1, const SampledPath& p2) {
  check_closed(p1);
  check_closed(p2);
  SampledPath both = concatenate(p1, p2);
  SampledPath there_and_back = concatenate(p1, reversed(p1));
  HomomorphismResidual r;
  r.product = std::abs(holonomy(both) - holonomy(p1) * holonomy(p2));
  r.inverse = std::abs(holonomy(there_and_back) - Complex(1.0, 0.0));
  return r;
}

/// Levi-Civita transport of the tangent e1 at the base point around the
/// Gauss curve, v' = -(v . g') g, RK4 with re-projection each step. Returns
/// the rotation angle of the returned vector about the outward normal.
inline double transport_oracle(const SampledPath& path) {
  check_closed(path);
  for (const PathNode& p : path.nodes())
    if (std::sin(p.beta) < tol::kPoleHit) fail(ErrorKind::PoleHit, "transport needs a curve off the poles");
  const PathNode& n0 = path.node(0);
  Vec3 g0 = gauss_vec(n0);
  Vec3 v0 = local_frame(n0.theta, n0.beta).e1;
  Vec3 v = v0;
  auto rhs = [](const Vec3& w, const PathNode& p) { return Vec3(-w.dot(gauss_velocity(p)) * gauss_vec(p)); };
  for (std::size_t k = 0; k < path.intervals(); ++k) {
    for (const Piece& pc : path.pieces(k)) {
      double h = pc.t1 - pc.t0;
      Vec3 k1 = rhs(v, pc.a);
      Vec3 k2 = rhs(v + 0.5 * h * k1, pc.mid);
      Vec3 k3 = rhs(v + 0.5 * h * k2, pc.mid);
      Vec3 k4 = rhs(v + h * k3, pc.b);
      v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      Vec3 g = gauss_vec(pc.b);
      v = (v - v.dot(g) * g).normalized();
    }
  }
  return std::atan2(v0.cross(v).dot(g0), v0.dot(v));
}

}  // namespace hopfdisc
