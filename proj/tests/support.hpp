#pragma once

#include "hopfdisc/hopfdisc.hpp"

#include <random>

namespace hopfdisc::test {

inline MotionSpec latitude(double beta0, int n = 1) {
  MotionSpec s;
  s.family = Family::ConstantTilt;
  s.beta0 = beta0;
  s.n = n;
  return make_motion(s);
}

inline MotionSpec wobble(double beta0, double amplitude, int m, int n = 1) {
  MotionSpec s;
  s.family = Family::Wobble;
  s.beta0 = beta0;
  s.amplitude = amplitude;
  s.m = m;
  s.n = n;
  return make_motion(s);
}

inline MotionSpec sweep(double beta0, double beta1, int n = 1) {
  MotionSpec s;
  s.family = Family::TiltSweep;
  s.beta0 = beta0;
  s.beta1 = beta1;
  s.n = n;
  return make_motion(s);
}

inline MotionSpec table(std::vector<TableRecord> rows) {
  MotionSpec s;
  s.family = Family::Table;
  s.table = std::move(rows);
  return make_motion(s);
}

// Clockwise box in (theta, beta): theta -0.5..0.5, beta 1.0..1.6.
inline MotionSpec square_table() {
  return table({{0, -0.5, 1.0}, {0.25, 0.5, 1.0}, {0.5, 0.5, 1.6}, {0.75, -0.5, 1.6}, {1, -0.5, 1.0}});
}

// Bowtie: the two diagonals cross at theta = 0, beta = 1.2, mid-segment.
inline MotionSpec figure_eight_table() {
  return table({{0, 0.6, 1.0}, {0.25, -0.6, 1.4}, {0.5, -0.6, 1.0}, {0.75, 0.6, 1.4}, {1, 0.6, 1.0}});
}

// Circle of angular radius r about the equator point (1, 0, 0), built with
// exact derivatives. Counterclockwise seen from outside leaves the small cap
// on the left, so neither pole is on the left (I+ = 0); clockwise gives 2.
inline PathNode small_circle_node(double r, bool ccw, double t) {
  double s = (ccw ? 1.0 : -1.0) * kTwoPi * t, ds = (ccw ? 1.0 : -1.0) * kTwoPi;
  Vec3 p(std::cos(r), std::sin(r) * std::cos(s), std::sin(r) * std::sin(s));
  Vec3 dp(0.0, -std::sin(r) * std::sin(s) * ds, std::sin(r) * std::cos(s) * ds);
  double rho2 = p.x() * p.x() + p.y() * p.y();
  PathNode n;
  n.theta = std::atan2(p.y(), p.x());
  n.beta = std::acos(p.z());
  n.dtheta = (p.x() * dp.y() - p.y() * dp.x()) / rho2;
  n.dbeta = -dp.z() / std::sqrt(rho2);
  return n;
}

inline SampledPath small_circle(double r, bool ccw, std::size_t N = 8192) {
  SampledPath::Data d;
  d.label = "small_circle";
  for (std::size_t k = 0; k <= N; ++k) d.nodes.push_back(small_circle_node(r, ccw, double(k) / double(N)));
  for (std::size_t k = 0; k < N; ++k) d.mids.push_back(small_circle_node(r, ccw, (k + 0.5) / double(N)));
  return SampledPath(std::move(d));
}

inline std::shared_ptr<const SampledPath> sampled(const MotionSpec& s, std::size_t N = 8192) {
  return std::make_shared<const SampledPath>(sample(s, N));
}

inline std::mt19937_64 rng(std::uint64_t seed = 20240611) { return std::mt19937_64(seed); }

inline Vec3 random_unit(std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  Vec3 v;
  do v = Vec3(nd(g), nd(g), nd(g));
  while (v.norm() < 1e-3);
  return v.normalized();
}

inline S3Point random_s3(std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  return S3Point::normalized(Complex(nd(g), nd(g)), Complex(nd(g), nd(g)));
}

inline Complex random_unit_complex(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  return std::polar(1.0, u(g));
}

// Random tangent at p: a random C^2 vector with its radial part removed.
inline TangentS3 random_tangent(const S3Point& p, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  Complex v1(nd(g), nd(g)), v2(nd(g), nd(g));
  double radial = (std::conj(p.z1()) * v1 + std::conj(p.z2()) * v2).real();
  return TangentS3(p, v1 - radial * p.z1(), v2 - radial * p.z2());
}

}  // namespace hopfdisc::test
