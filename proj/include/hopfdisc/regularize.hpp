#pragma once

#include "hopfdisc/phase.hpp"

#include <memory>

namespace hopfdisc {

inline std::vector<double> default_eps_ladder() { return {0.08, 0.04, 0.02, 0.01}; }

inline void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps < kPi / 8))
    fail(ErrorKind::EpsilonOutOfRange, "epsilon must lie in (0, pi/8): " + fmt_double(eps));
}

/// beta clamped to [eps, pi - eps]; the derivative vanishes where clamped.
inline PathNode clamp_node(PathNode p, double eps) {
  if (p.beta < eps) {
    p.beta = eps;
    p.dbeta = 0.0;
  } else if (p.beta > kPi - eps) {
    p.beta = kPi - eps;
    p.dbeta = 0.0;
  }
  return p;
}

/// A sampled path with beta replaced by beta_eps. The clamped curve is what
/// the topology and curvature routes see.
class RegularizedPath {
 public:
  RegularizedPath(std::shared_ptr<const SampledPath> base, double eps)
      : eps_(eps), base_(std::move(base)) {
    check_epsilon(eps);
    SampledPath::Data d;
    d.label = base_->label() + "[eps=" + fmt_double(eps) + "]";
    for (const PathNode& p : base_->nodes()) d.nodes.push_back(clamp_node(p, eps));
    for (const PathNode& p : base_->mids()) d.mids.push_back(clamp_node(p, eps));
    for (Corner c : base_->corners()) {
      PathNode l = clamp_node(c.left(), eps), r = clamp_node(c.right(), eps);
      d.corners.push_back({c.t, c.theta, l.beta, l.dtheta, l.dbeta, r.dtheta, r.dbeta});
    }
    path_ = std::make_shared<const SampledPath>(std::move(d));
  }

  double epsilon() const { return eps_; }
  const SampledPath& base() const { return *base_; }
  const SampledPath& path() const { return *path_; }
  std::vector<double> beta_eps() const { return path_->column(&PathNode::beta); }

  /// True if the clamp changes beta at a node where beta is still moving,
  /// which leaves a kink in the clamped curve.
  bool has_clamp_kink() const {
    for (std::size_t k = 0; k < base_->size(); ++k) {
      const PathNode& p = base_->node(k);
      if ((p.beta < eps_ || p.beta > kPi - eps_) && std::abs(p.dbeta) > 1e-12) return true;
    }
    return false;
  }

  bool clamp_active() const {
    for (const PathNode& p : base_->nodes())
      if (p.beta < eps_ || p.beta > kPi - eps_) return true;
    return false;
  }

 private:
  double eps_;
  std::shared_ptr<const SampledPath> base_;
  std::shared_ptr<const SampledPath> path_;
};

inline RegularizedPath clamp(const SampledPath& path, double eps) {
  return RegularizedPath(std::make_shared<const SampledPath>(path), eps);
}

struct Extrapolation {
  double limit = 0.0;
  double exponent = 0.0;  // fitted power of eps; 0 when the values did not move
};

namespace detail {

// Polynomial in x = eps^2 through all points, evaluated at x = 0.
inline double neville_eps2(std::span<const double> eps, std::span<const double> v) {
  std::vector<double> x(eps.size()), p(v.begin(), v.end());
  for (std::size_t i = 0; i < eps.size(); ++i) x[i] = eps[i] * eps[i];
  for (std::size_t lvl = 1; lvl < p.size(); ++lvl)
    for (std::size_t i = p.size() - 1; i >= lvl; --i)
      p[i] = (x[i] * p[i - 1] - x[i - lvl] * p[i]) / (x[i] - x[i - lvl]);
  return p.back();
}

}  // namespace detail

/// Limit eps -> 0 of values computed on a decreasing eps ladder.
///
/// The last three values fix a model v = L + C eps^p. Clamping near an
/// isolated pole touch gives p = 5/2 and dwelling at a pole gives p = 2, so
/// the exponent is fitted rather than assumed. When it comes out at 2 the
/// full ladder is extrapolated as a polynomial in eps^2.
inline Extrapolation extrapolate_limit(std::span<const double> eps, std::span<const double> v) {
  if (eps.empty() || eps.size() != v.size()) fail(ErrorKind::Domain, "ladder and values differ");
  std::size_t n = eps.size();
  if (n == 1) return {v[0], 0.0};
  if (n == 2) return {detail::neville_eps2(eps, v), 2.0};
  double e0 = eps[n - 3], e1 = eps[n - 2], e2 = eps[n - 1];
  double v0 = v[n - 3], v1 = v[n - 2], v2 = v[n - 1];
  double d1 = v0 - v1, d2 = v1 - v2;
  double scale = 1e-14 * (1.0 + std::abs(v2));
  if (std::abs(d1) <= scale && std::abs(d2) <= scale) return {v2, 0.0};
  if (std::abs(d2) <= scale || d1 * d2 <= 0.0) return {detail::neville_eps2(eps, v), 2.0};
  double r = d1 / d2;
  auto ratio = [&](double p) {
    return (std::pow(e0, p) - std::pow(e1, p)) / (std::pow(e1, p) - std::pow(e2, p));
  };
  double lo = 0.25, hi = 12.0;
  if (!(r > ratio(lo) && r < ratio(hi))) return {detail::neville_eps2(eps, v), 2.0};
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (ratio(mid) < r ? lo : hi) = mid;
  }
  double p = 0.5 * (lo + hi);
  if (std::abs(p - 2.0) < 0.05) return {detail::neville_eps2(eps, v), p};
  double c = d2 / (std::pow(e1, p) - std::pow(e2, p));
  return {v2 - c * std::pow(e2, p), p};
}

struct RegularizedPhase {
  std::vector<double> epsilons;
  std::vector<double> values;
  double limit = 0.0;
  double exponent = 0.0;
};

inline void check_ladder(std::span<const double> eps) {
  if (eps.empty()) fail(ErrorKind::EpsilonOutOfRange, "empty epsilon ladder");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    check_epsilon(eps[i]);
    if (i > 0 && !(eps[i] < eps[i - 1]))
      fail(ErrorKind::EpsilonOutOfRange, "epsilon ladder must be strictly decreasing");
  }
}

/// Line integral -int cos(beta_eps) dtheta for each eps, and its limit.
inline RegularizedPhase regularized_phase(const SampledPath& path, std::span<const double> eps) {
  check_ladder(eps);
  RegularizedPhase out;
  out.epsilons.assign(eps.begin(), eps.end());
  for (double e : eps)
    out.values.push_back(path_integral(path, [e](const PathNode& p) {
      return geometric_integrand(clamp_node(p, e));
    }));
  Extrapolation x = extrapolate_limit(out.epsilons, out.values);
  out.limit = x.limit;
  out.exponent = x.exponent;
  return out;
}

}  // namespace hopfdisc
