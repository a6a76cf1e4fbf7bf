#pragma once

#include "hopfdisc/geometry.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace hopfdisc {

enum class Family { ConstantTilt, Wobble, TiltSweep, Table };

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::ConstantTilt: return "constant_tilt";
    case Family::Wobble: return "wobble";
    case Family::TiltSweep: return "tilt_sweep";
    case Family::Table: return "piecewise_linear_table";
  }
  return "unknown";
}

inline std::optional<Family> parse_family(std::string_view s) {
  for (Family f : {Family::ConstantTilt, Family::Wobble, Family::TiltSweep, Family::Table})
    if (s == family_name(f)) return f;
  if (s == "table") return Family::Table;
  return std::nullopt;
}

struct TableRecord {
  double t, theta, beta;
};

/// A closed motion t -> (theta(t), beta(t)) on [0, 1] with disc radii.
///
///   constant_tilt  beta = beta0
///   wobble         beta = beta0 + amplitude * sin(2 pi m t)
///   tilt_sweep     beta = beta0 + (beta1 - beta0) (1 - cos 2 pi t) / 2
///   table          linear interpolation of (t, theta, beta) records
///
/// Analytic families use theta = 2 pi n t. A nonzero warp c (|c| < 1)
/// reparameterizes analytic families by t -> t - c sin(2 pi t) / (2 pi).
struct MotionSpec {
  Family family = Family::ConstantTilt;
  double beta0 = kPi / 2;
  double beta1 = 0.0;
  double amplitude = 0.0;
  int m = 1;
  int n = 1;
  double a = 1.0;
  double b = 1.0;
  double warp = 0.0;
  std::vector<TableRecord> table;
};

/// Angles and their t-derivatives at one parameter value.
struct PathNode {
  double theta = 0.0, beta = 0.0, dtheta = 0.0, dbeta = 0.0;
};

inline Vec3 gauss_vec(const PathNode& p) { return gauss_vec(p.theta, p.beta); }

/// Velocity of the Gauss vector, d/dt g(theta(t), beta(t)).
inline Vec3 gauss_velocity(const PathNode& p) {
  double sb = std::sin(p.beta), cb = std::cos(p.beta);
  double st = std::sin(p.theta), ct = std::cos(p.theta);
  return {cb * ct * p.dbeta - sb * st * p.dtheta, cb * st * p.dbeta + sb * ct * p.dtheta,
          -sb * p.dbeta};
}

/// A point where the one-sided t-derivatives differ.
struct Corner {
  double t;
  double theta, beta;
  double dtheta_left, dbeta_left, dtheta_right, dbeta_right;

  PathNode left() const { return {theta, beta, dtheta_left, dbeta_left}; }
  PathNode right() const { return {theta, beta, dtheta_right, dbeta_right}; }
};

/// Sub-interval of a grid cell on which the motion is C^1; the midpoint
/// sample is used by the one-step integrators.
struct Piece {
  double t0, t1;
  PathNode a, mid, b;
};

/// Uniform-grid discretization of a motion. Immutable after construction.
///
/// Node derivatives are analytic for analytic families and central
/// differences for tables. At a corner lying on a node the node carries the
/// right-sided derivative; left() and right() give both sides.
class SampledPath {
 public:
  struct Data {
    std::vector<PathNode> nodes;
    std::vector<PathNode> mids;
    std::vector<Corner> corners;
    std::string label;
  };

  explicit SampledPath(Data d) : d_(std::move(d)) {
    std::size_t n = d_.nodes.size();
    if (n < 257) fail(ErrorKind::Domain, "a sampled path needs at least 257 nodes");
    if ((n - 1) % 2 != 0) fail(ErrorKind::Domain, "the interval count must be even");
    if (d_.mids.size() != n - 1) fail(ErrorKind::Domain, "one midpoint sample per interval required");
    for (const auto& p : d_.nodes) {
      if (!std::isfinite(p.theta) || !std::isfinite(p.beta) || !std::isfinite(p.dtheta) ||
          !std::isfinite(p.dbeta))
        fail(ErrorKind::Domain, "non-finite sample");
      check_beta(p.beta);
    }
    std::sort(d_.corners.begin(), d_.corners.end(),
              [](const Corner& x, const Corner& y) { return x.t < y.t; });
    corner_at_node_.assign(n, -1);
    inner_.assign(n - 1, {});
    double N = static_cast<double>(n - 1);
    for (std::size_t c = 0; c < d_.corners.size(); ++c) {
      double t = d_.corners[c].t;
      if (!(t > 0.0 && t < 1.0)) fail(ErrorKind::Domain, "corners must be interior");
      double x = t * N;
      double r = std::round(x);
      if (std::abs(x - r) < 1e-9) {
        auto k = static_cast<std::size_t>(r);
        corner_at_node_[k] = static_cast<int>(c);
        d_.nodes[k].dtheta = d_.corners[c].dtheta_right;
        d_.nodes[k].dbeta = d_.corners[c].dbeta_right;
      } else {
        inner_[static_cast<std::size_t>(std::floor(x))].push_back(c);
      }
    }
  }

  std::size_t intervals() const { return d_.mids.size(); }
  std::size_t size() const { return d_.nodes.size(); }
  double step() const { return 1.0 / static_cast<double>(intervals()); }
  double t(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(intervals()); }

  std::span<const PathNode> nodes() const { return d_.nodes; }
  std::span<const PathNode> mids() const { return d_.mids; }
  std::span<const Corner> corners() const { return d_.corners; }
  const PathNode& node(std::size_t k) const { return d_.nodes[k]; }
  const PathNode& mid(std::size_t k) const { return d_.mids[k]; }
  const std::string& label() const { return d_.label; }

  bool corner_at_node(std::size_t k) const { return corner_at_node_[k] >= 0; }
  bool clean(std::size_t k) const { return inner_[k].empty(); }
  bool has_corners() const { return !d_.corners.empty(); }

  /// Node k with the derivative seen when arriving from the left.
  PathNode left(std::size_t k) const {
    return corner_at_node(k) ? d_.corners[static_cast<std::size_t>(corner_at_node_[k])].left()
                             : d_.nodes[k];
  }
  PathNode right(std::size_t k) const { return d_.nodes[k]; }

  /// C^1 pieces of interval k (one piece unless a corner lies inside).
  std::vector<Piece> pieces(std::size_t k) const {
    std::vector<Piece> out;
    if (clean(k)) {
      out.push_back({t(k), t(k + 1), right(k), d_.mids[k], left(k + 1)});
      return out;
    }
    // Inside a piecewise-linear cell the rates are constant between breaks.
    double t0 = t(k);
    PathNode a = right(k);
    for (std::size_t c : inner_[k]) {
      const Corner& cr = d_.corners[c];
      out.push_back(linear_piece(t0, cr.t, a, cr.left()));
      t0 = cr.t;
      a = cr.right();
    }
    out.push_back(linear_piece(t0, t(k + 1), a, left(k + 1)));
    return out;
  }

  std::vector<double> column(double PathNode::*field) const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = d_.nodes[k].*field;
    return v;
  }

  int winding() const {
    return static_cast<int>(std::lround((d_.nodes.back().theta - d_.nodes.front().theta) / kTwoPi));
  }

  /// True when the Gauss curve returns to its start and the t-derivatives
  /// match across the seam.
  bool smooth_closed() const {
    const PathNode& a = d_.nodes.front();
    const PathNode& b = d_.nodes.back();
    return (gauss_vec(a) - gauss_vec(b)).norm() < tol::kClosure &&
           std::abs(a.dtheta - b.dtheta) < 1e-9 * (1.0 + std::abs(a.dtheta)) &&
           std::abs(a.dbeta - b.dbeta) < 1e-9 * (1.0 + std::abs(a.dbeta));
  }

  const Data& data() const { return d_; }

 private:
  static Piece linear_piece(double t0, double t1, const PathNode& a, const PathNode& b) {
    PathNode m{0.5 * (a.theta + b.theta), 0.5 * (a.beta + b.beta), a.dtheta, a.dbeta};
    return {t0, t1, a, m, b};
  }

  Data d_;
  std::vector<int> corner_at_node_;
  std::vector<std::vector<std::size_t>> inner_;
};

namespace detail {

inline PathNode eval_analytic(const MotionSpec& s, double t) {
  PathNode p;
  p.theta = kTwoPi * s.n * t;
  p.dtheta = kTwoPi * s.n;
  switch (s.family) {
    case Family::ConstantTilt:
      p.beta = s.beta0;
      break;
    case Family::Wobble: {
      double w = kTwoPi * s.m;
      p.beta = s.beta0 + s.amplitude * std::sin(w * t);
      p.dbeta = s.amplitude * w * std::cos(w * t);
      break;
    }
    case Family::TiltSweep: {
      double d = s.beta1 - s.beta0;
      p.beta = s.beta0 + 0.5 * d * (1.0 - std::cos(kTwoPi * t));
      p.dbeta = 0.5 * d * kTwoPi * std::sin(kTwoPi * t);
      break;
    }
    case Family::Table:
      break;
  }
  return p;
}

// Index of the table piece [t_j, t_{j+1}] used at t (right-continuous).
inline std::size_t table_piece(const std::vector<TableRecord>& tab, double t) {
  auto it = std::upper_bound(tab.begin(), tab.end(), t,
                             [](double x, const TableRecord& r) { return x < r.t; });
  std::size_t j = it == tab.begin() ? 0 : static_cast<std::size_t>(it - tab.begin()) - 1;
  return std::min(j, tab.size() - 2);
}

inline PathNode eval_table(const std::vector<TableRecord>& tab, double t) {
  std::size_t j = table_piece(tab, t);
  const TableRecord& r0 = tab[j];
  const TableRecord& r1 = tab[j + 1];
  double dt = r1.t - r0.t;
  PathNode p;
  p.dtheta = (r1.theta - r0.theta) / dt;
  p.dbeta = (r1.beta - r0.beta) / dt;
  double u = (t - r0.t) / dt;
  p.theta = r0.theta + u * (r1.theta - r0.theta);
  p.beta = r0.beta + u * (r1.beta - r0.beta);
  if (t >= r1.t) {
    p.theta = r1.theta;
    p.beta = r1.beta;
  }
  return p;
}

// A corner is a jump of the (theta', beta') velocity that is large against
// the velocity itself, so records of a densely resampled smooth curve pass.
inline bool slope_jump(double tl, double bl, double tr, double br) {
  double jump = std::hypot(tr - tl, br - bl);
  return jump > 1e-6 + 0.05 * std::max(std::hypot(tl, bl), std::hypot(tr, br));
}

inline std::vector<Corner> table_corners(const std::vector<TableRecord>& tab) {
  std::vector<Corner> out;
  for (std::size_t j = 1; j + 1 < tab.size(); ++j) {
    double dl = tab[j].t - tab[j - 1].t, dr = tab[j + 1].t - tab[j].t;
    double tl = (tab[j].theta - tab[j - 1].theta) / dl, tr = (tab[j + 1].theta - tab[j].theta) / dr;
    double bl = (tab[j].beta - tab[j - 1].beta) / dl, br = (tab[j + 1].beta - tab[j].beta) / dr;
    if (slope_jump(tl, bl, tr, br)) out.push_back({tab[j].t, tab[j].theta, tab[j].beta, tl, bl, tr, br});
  }
  return out;
}

inline double warp_map(double c, double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t - c * std::sin(kTwoPi * t) / kTwoPi;
}

inline double warp_rate(double c, double t) { return 1.0 - c * std::cos(kTwoPi * t); }

}  // namespace detail

/// Position and t-derivative of the motion at t. Table motions report the
/// slope of the piece to the right of t (the left piece at t = 1).
inline PathNode evaluate(const MotionSpec& s, double t) {
  if (s.family == Family::Table) return detail::eval_table(s.table, t);
  if (s.warp == 0.0) return detail::eval_analytic(s, t);
  PathNode p = detail::eval_analytic(s, detail::warp_map(s.warp, t));
  double r = detail::warp_rate(s.warp, t);
  p.dtheta *= r;
  p.dbeta *= r;
  return p;
}

inline MotionSpec make_motion(MotionSpec s) {
  auto in_range = [](double b) { return b >= -tol::kAngleSlack && b <= kPi + tol::kAngleSlack; };
  if (!(s.a > 0.0) || !(s.b > 0.0)) fail(ErrorKind::NonPositiveRadius, "disc radii must be positive");
  if (!(std::abs(s.warp) < 1.0)) fail(ErrorKind::DomainViolation, "warp must satisfy |c| < 1");
  switch (s.family) {
    case Family::ConstantTilt:
      if (!in_range(s.beta0)) fail(ErrorKind::DomainViolation, "beta0 outside [0, pi]");
      break;
    case Family::Wobble: {
      double lo = s.beta0, hi = s.beta0;
      if (s.m != 0) {
        lo -= std::abs(s.amplitude);
        hi += std::abs(s.amplitude);
      }
      if (!in_range(lo) || !in_range(hi))
        fail(ErrorKind::DomainViolation, "wobble leaves [0, pi]: range [" + fmt_double(lo) + ", " +
                                             fmt_double(hi) + "]");
      break;
    }
    case Family::TiltSweep:
      if (!in_range(s.beta0) || !in_range(s.beta1))
        fail(ErrorKind::DomainViolation, "tilt_sweep endpoints outside [0, pi]");
      break;
    case Family::Table: {
      const auto& tab = s.table;
      if (s.warp != 0.0) fail(ErrorKind::DomainViolation, "warp applies to analytic families only");
      if (tab.size() < 2) fail(ErrorKind::DomainViolation, "a table needs at least two records");
      if (std::abs(tab.front().t) > 1e-12 || std::abs(tab.back().t - 1.0) > 1e-12)
        fail(ErrorKind::DomainViolation, "table must run from t = 0 to t = 1");
      s.table.front().t = 0.0;
      s.table.back().t = 1.0;
      for (std::size_t j = 0; j < tab.size(); ++j) {
        if (!std::isfinite(tab[j].theta) || !std::isfinite(tab[j].beta))
          fail(ErrorKind::DomainViolation, "non-finite table record " + std::to_string(j));
        if (!in_range(tab[j].beta))
          fail(ErrorKind::DomainViolation, "table beta outside [0, pi] at record " + std::to_string(j));
        if (j > 0 && !(tab[j].t > tab[j - 1].t))
          fail(ErrorKind::DomainViolation, "table t must be strictly increasing");
      }
      if (std::abs(tab.back().beta - tab.front().beta) >= tol::kClosure)
        fail(ErrorKind::ClosureViolation, "beta(1) differs from beta(0)");
      double turns = (tab.back().theta - tab.front().theta) / kTwoPi;
      if (std::abs(turns - std::round(turns)) * kTwoPi >= tol::kClosure)
        fail(ErrorKind::ClosureViolation, "theta(1) - theta(0) is not a multiple of 2 pi");
      s.n = static_cast<int>(std::lround(turns));
      break;
    }
  }
  return s;
}

/// Samples a validated motion on N intervals (N even, N >= 256).
inline SampledPath sample(const MotionSpec& s, std::size_t N) {
  if (N < 256 || N % 2 != 0) fail(ErrorKind::Domain, "N must be even and at least 256");
  SampledPath::Data d;
  d.label = std::string(family_name(s.family));
  d.nodes.resize(N + 1);
  d.mids.resize(N);
  double h = 1.0 / static_cast<double>(N);
  auto tk = [N](std::size_t k) { return static_cast<double>(k) / static_cast<double>(N); };
  for (std::size_t k = 0; k <= N; ++k) d.nodes[k] = evaluate(s, tk(k));
  for (std::size_t k = 0; k < N; ++k) d.mids[k] = evaluate(s, (static_cast<double>(k) + 0.5) * h);
  if (s.family == Family::Table) {
    d.corners = detail::table_corners(s.table);
    auto corner_between = [&](double lo, double hi) {
      for (const Corner& c : d.corners)
        if (c.t > lo - 1e-12 && c.t < hi + 1e-12) return true;
      return false;
    };
    for (std::size_t k = 1; k < N; ++k) {
      if (corner_between(tk(k - 1), tk(k + 1))) continue;
      d.nodes[k].dtheta = (d.nodes[k + 1].theta - d.nodes[k - 1].theta) / (2.0 * h);
      d.nodes[k].dbeta = (d.nodes[k + 1].beta - d.nodes[k - 1].beta) / (2.0 * h);
    }
    // The right endpoint uses the slope of the last piece.
    std::size_t j = s.table.size() - 2;
    double dt = s.table[j + 1].t - s.table[j].t;
    d.nodes[N].dtheta = (s.table[j + 1].theta - s.table[j].theta) / dt;
    d.nodes[N].dbeta = (s.table[j + 1].beta - s.table[j].beta) / dt;
  }
  return SampledPath(std::move(d));
}

/// Resamples a motion as a linear table with M + 1 equally spaced records.
inline MotionSpec tabulate(const MotionSpec& s, std::size_t M) {
  MotionSpec out = s;
  out.family = Family::Table;
  out.warp = 0.0;
  out.table.clear();
  for (std::size_t j = 0; j <= M; ++j) {
    double t = static_cast<double>(j) / static_cast<double>(M);
    PathNode p = evaluate(s, t);
    out.table.push_back({t, p.theta, p.beta});
  }
  return make_motion(out);
}

/// Largest difference quotient of each angle over adjacent nodes.
inline std::pair<double, double> lipschitz_estimate(const SampledPath& p) {
  double ct = 0.0, cb = 0.0, h = p.step();
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    ct = std::max(ct, std::abs(p.node(k + 1).theta - p.node(k).theta) / h);
    cb = std::max(cb, std::abs(p.node(k + 1).beta - p.node(k).beta) / h);
  }
  return {ct, cb};
}

inline std::optional<std::string> lipschitz_warning(const SampledPath& p, double bound) {
  auto [ct, cb] = lipschitz_estimate(p);
  if (ct <= bound && cb <= bound) return std::nullopt;
  return "Lipschitz estimate (" + fmt_double(ct) + ", " + fmt_double(cb) + ") exceeds bound " +
         fmt_double(bound);
}

/// The same Gauss curve traversed backwards, t -> 1 - t.
inline SampledPath reversed(const SampledPath& p) {
  SampledPath::Data d;
  d.label = p.label() + "^-1";
  std::size_t N = p.intervals();
  d.nodes.resize(N + 1);
  d.mids.resize(N);
  auto flip = [](PathNode x) {
    x.dtheta = -x.dtheta;
    x.dbeta = -x.dbeta;
    return x;
  };
  for (std::size_t k = 0; k <= N; ++k) d.nodes[k] = flip(p.node(N - k));
  for (std::size_t k = 0; k < N; ++k) d.mids[k] = flip(p.mid(N - 1 - k));
  // Ends without a corner keep their own one-sided slope.
  d.nodes[0] = flip(p.left(N));
  for (const Corner& c : p.corners())
    d.corners.push_back({1.0 - c.t, c.theta, c.beta, -c.dtheta_right, -c.dbeta_right, -c.dtheta_left,
                         -c.dbeta_left});
  return SampledPath(std::move(d));
}

/// p1 followed by p2, each squeezed into half of [0, 1]. Both must have the
/// same grid and p2 must start where p1 ends on the sphere.
inline SampledPath concatenate(const SampledPath& p1, const SampledPath& p2) {
  if (p1.intervals() != p2.intervals())
    fail(ErrorKind::BasePointMismatch, "paths must share the grid size");
  const PathNode& end = p1.nodes().back();
  const PathNode& start = p2.nodes().front();
  if ((gauss_vec(end) - gauss_vec(start)).norm() >= tol::kClosure)
    fail(ErrorKind::BasePointMismatch, "second path does not start where the first ends");
  double shift = end.theta - start.theta;
  double whole = kTwoPi * std::round(shift / kTwoPi);
  // At a pole theta is arbitrary; elsewhere the offset is a whole number of turns.
  double offset = std::sin(end.beta) < tol::kPoleFrame ? shift : whole;

  std::size_t N = p1.intervals();
  SampledPath::Data d;
  d.label = p1.label() + "*" + p2.label();
  d.nodes.resize(2 * N + 1);
  d.mids.resize(2 * N);
  auto scaled = [](PathNode x, double dth) {
    x.theta += dth;
    x.dtheta *= 2.0;
    x.dbeta *= 2.0;
    return x;
  };
  for (std::size_t k = 0; k <= N; ++k) d.nodes[k] = scaled(p1.node(k), 0.0);
  for (std::size_t k = 0; k <= N; ++k) d.nodes[N + k] = scaled(p2.node(k), offset);
  for (std::size_t k = 0; k < N; ++k) {
    d.mids[k] = scaled(p1.mid(k), 0.0);
    d.mids[N + k] = scaled(p2.mid(k), offset);
  }
  d.nodes[2 * N] = scaled(p2.left(N), offset);
  for (const Corner& c : p1.corners())
    d.corners.push_back({0.5 * c.t, c.theta, c.beta, 2 * c.dtheta_left, 2 * c.dbeta_left,
                         2 * c.dtheta_right, 2 * c.dbeta_right});
  for (const Corner& c : p2.corners())
    d.corners.push_back({0.5 + 0.5 * c.t, c.theta + offset, c.beta, 2 * c.dtheta_left,
                         2 * c.dbeta_left, 2 * c.dtheta_right, 2 * c.dbeta_right});
  PathNode jl = scaled(p1.left(N), 0.0), jr = scaled(p2.node(0), offset);
  if (jl.dtheta != jr.dtheta || jl.dbeta != jr.dbeta)
    d.corners.push_back({0.5, jr.theta, jr.beta, jl.dtheta, jl.dbeta, jr.dtheta, jr.dbeta});
  return SampledPath(std::move(d));
}

}  // namespace hopfdisc
