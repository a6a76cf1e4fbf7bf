#pragma once

#include "hopfdisc/regularize.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <thread>

namespace hopfdisc {

/// Chart 1 (g1) projects from the south pole and sends the north pole to 0;
/// chart 2 (g2) projects from the north pole.
enum class Chart { North, South };

inline Complex stereographic_point(const Vec3& p, Chart c) {
  if (c == Chart::North) {
    if (p.z() + 1.0 < tol::kPoleHit) fail(ErrorKind::PoleHit, "point at the south pole");
    return Complex(p.x(), -p.y()) / (1.0 + p.z());
  }
  if (1.0 - p.z() < tol::kPoleHit) fail(ErrorKind::PoleHit, "point at the north pole");
  return Complex(p.x(), p.y()) / (1.0 - p.z());
}

inline std::vector<Complex> stereographic(std::span<const Vec3> curve, Chart c) {
  std::vector<Complex> out;
  out.reserve(curve.size());
  for (const Vec3& p : curve) out.push_back(stereographic_point(p, c));
  return out;
}

inline std::vector<Vec3> gauss_curve(const SampledPath& path) {
  std::vector<Vec3> out;
  out.reserve(path.size());
  for (const PathNode& p : path.nodes()) out.push_back(gauss_vec(p));
  return out;
}

namespace detail {

// Closed polygon vertices: consecutive duplicates and a repeated start dropped.
template <class P, class Dist>
std::vector<std::size_t> polygon_vertices(std::span<const P> pts, Dist dist, double eps) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (idx.empty() || dist(pts[idx.back()], pts[i]) > eps) idx.push_back(i);
  while (idx.size() > 1 && dist(pts[idx.front()], pts[idx.back()]) <= eps) idx.pop_back();
  return idx;
}

inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline double segment_distance(Complex p, Complex a, Complex b) {
  Complex d = b - a;
  double L2 = std::norm(d);
  double s = L2 > 0.0 ? std::clamp(((p - a) * std::conj(d)).real() / L2, 0.0, 1.0) : 0.0;
  return std::abs(p - (a + s * d));
}

}  // namespace detail

/// Number of times the closed polyline winds counterclockwise around point.
inline int winding_number(std::span<const Complex> poly, Complex point) {
  if (poly.size() < 2) return 0;
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Complex a = poly[i], b = poly[(i + 1) % poly.size()];
    if (detail::segment_distance(point, a, b) <= tol::kPointOnCurve)
      fail(ErrorKind::PointOnCurve, "point lies on the curve");
    total += std::arg((b - point) / (a - point));
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

/// Segment indices (i, j) of the first detected pair of non-adjacent
/// segments of the closed polyline that touch or cross.
inline std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(std::span<const Complex> poly) {
  double size = 0.0;
  for (Complex z : poly) size = std::max(size, std::abs(z));
  auto vi = detail::polygon_vertices(poly, [](Complex a, Complex b) { return std::abs(a - b); }, 1e-14 * size);
  std::size_t n = vi.size();
  if (n < 4) return std::nullopt;
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (std::size_t i : vi) {
    lo_x = std::min(lo_x, poly[i].real());
    hi_x = std::max(hi_x, poly[i].real());
    lo_y = std::min(lo_y, poly[i].imag());
    hi_y = std::max(hi_y, poly[i].imag());
  }
  double extent = std::max(hi_x - lo_x, hi_y - lo_y);
  double zero = tol::kCross * extent * extent;
  auto P = [&](std::size_t s) { return poly[vi[s % n]]; };
  auto orient = [&](Complex a, Complex b, Complex c) {
    double o = detail::cross(b - a, c - a);
    return std::abs(o) <= zero ? 0 : (o > 0 ? 1 : -1);
  };
  auto within = [&](Complex a, Complex b, Complex c) {
    double slack = 1e-12 * extent;
    return c.real() >= std::min(a.real(), b.real()) - slack && c.real() <= std::max(a.real(), b.real()) + slack &&
           c.imag() >= std::min(a.imag(), b.imag()) - slack && c.imag() <= std::max(a.imag(), b.imag()) + slack;
  };
  auto meet = [&](std::size_t s, std::size_t t) {
    Complex a = P(s), b = P(s + 1), c = P(t), d = P(t + 1);
    int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return (o1 == 0 && within(a, b, c)) || (o2 == 0 && within(a, b, d)) || (o3 == 0 && within(c, d, a)) ||
           (o4 == 0 && within(c, d, b));
  };
  std::vector<std::size_t> order(n);
  std::vector<double> minx(n), maxx(n), miny(n), maxy(n);
  for (std::size_t s = 0; s < n; ++s) {
    Complex a = P(s), b = P(s + 1);
    minx[s] = std::min(a.real(), b.real());
    maxx[s] = std::max(a.real(), b.real());
    miny[s] = std::min(a.imag(), b.imag());
    maxy[s] = std::max(a.imag(), b.imag());
    order[s] = s;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return minx[a] < minx[b]; });
  double slack = 1e-12 * extent;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s = order[i];
    for (std::size_t j = i + 1; j < n && minx[order[j]] <= maxx[s] + slack; ++j) {
      std::size_t t = order[j];
      std::size_t gap = s > t ? s - t : t - s;
      if (gap == 1 || gap == n - 1) continue;
      if (miny[t] > maxy[s] + slack || miny[s] > maxy[t] + slack) continue;
      if (meet(s, t)) return std::make_pair(vi[std::min(s, t)], vi[std::max(s, t)]);
    }
  }
  return std::nullopt;
}

inline bool is_simple(std::span<const Complex> poly) { return !find_self_intersection(poly).has_value(); }

namespace detail {

// A point of S^2 kept well away from the curve, picked from a Fibonacci
// lattice. The sphere minus this point is projected to the plane.
inline Vec3 far_point(std::span<const Vec3> curve) {
  const int K = 256;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  Vec3 best(0, 0, 1);
  double best_d = -1.0;
  std::size_t stride = std::max<std::size_t>(1, curve.size() / 4096);
  for (int i = 0; i < K; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / K, r = std::sqrt(1.0 - z * z);
    Vec3 q(r * std::cos(golden * i), r * std::sin(golden * i), z);
    double d = 1e300;
    for (std::size_t k = 0; k < curve.size(); k += stride) d = std::min(d, (curve[k] - q).squaredNorm());
    if (d > best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

inline Mat3 rotation_to_north(const Vec3& q) {
  return Eigen::Quaterniond::FromTwoVectors(q, Vec3(0, 0, 1)).toRotationMatrix();
}

}  // namespace detail

/// Stereographic image of the curve from a lattice point far from it.
inline std::vector<Complex> far_projection(std::span<const Vec3> curve) {
  Mat3 R = detail::rotation_to_north(detail::far_point(curve));
  std::vector<Complex> out;
  out.reserve(curve.size());
  for (const Vec3& p : curve) {
    Vec3 r = R * p;
    out.push_back(Complex(r.x(), r.y()) / (1.0 - r.z()));
  }
  return out;
}

/// Parameter values (t_i, t_j) of a self-intersection, if any.
inline std::optional<std::pair<double, double>> sphere_self_intersection(std::span<const Vec3> curve) {
  auto hit = find_self_intersection(far_projection(curve));
  if (!hit) return std::nullopt;
  double N = static_cast<double>(curve.size() - 1);
  return std::make_pair(static_cast<double>(hit->first) / N, static_cast<double>(hit->second) / N);
}

inline bool is_simple_on_sphere(std::span<const Vec3> curve) { return !sphere_self_intersection(curve); }

/// Side function of a closed curve: L(p) = 1 on the left region and 0 on
/// the right for a simple curve. L changes by -1 across a segment moving
/// from its left to its right. Everything is measured along great-circle
/// arcs from a reference point q far from the curve, in a frame where q is
/// the north pole.
class SideIndex {
 public:
  explicit SideIndex(std::span<const Vec3> curve) {
    auto vi = detail::polygon_vertices(curve, [](const Vec3& a, const Vec3& b) { return (a - b).norm(); }, 1e-14);
    if (vi.size() < 3) fail(ErrorKind::DegenerateCurve, "curve has fewer than three distinct points");
    q_ = detail::far_point(curve);
    R_ = detail::rotation_to_north(q_);
    for (std::size_t i : vi) pts_.push_back(R_ * curve[i]);
    orig_.reserve(vi.size());
    for (std::size_t i : vi) orig_.push_back(curve[i]);
    // A probe just to the left of the longest segment has L = 1.
    std::size_t best = 0;
    double best_len = -1.0;
    for (std::size_t s = 0; s < orig_.size(); ++s) {
      double len = (orig_[(s + 1) % orig_.size()] - orig_[s]).norm();
      if (len > best_len) {
        best_len = len;
        best = s;
      }
    }
    Vec3 a = orig_[best], b = orig_[(best + 1) % orig_.size()];
    Vec3 m = (a + b).normalized();
    Vec3 left = m.cross((b - a).normalized()).normalized();
    double off = std::max(1e-3 * best_len, std::min(5e-8, 0.25 * best_len));
    probe_ = (m + off * left).normalized();
    Vec3 rp = R_ * probe_;
    Lq_ = 1 - crossings_above(std::atan2(rp.y(), rp.x()), std::atan2(std::hypot(rp.x(), rp.y()), rp.z()));
  }

  /// Signed crossings of the meridian at longitude lambda (rotated frame):
  /// pairs (colatitude, change of L when moving south across it).
  std::vector<std::pair<double, int>> meridian_crossings(double lambda) const {
    std::vector<std::pair<double, int>> out;
    Vec3 m(-std::sin(lambda), std::cos(lambda), 0.0), u(std::cos(lambda), std::sin(lambda), 0.0);
    std::size_t n = pts_.size();
    for (std::size_t s = 0; s < n; ++s) {
      const Vec3& a = pts_[s];
      const Vec3& b = pts_[(s + 1) % n];
      double sa = m.dot(a), sb = m.dot(b);
      if ((sa < 0.0) == (sb < 0.0)) continue;
      Vec3 p = a + (sa / (sa - sb)) * (b - a);
      double up = u.dot(p);
      if (up <= 0.0) continue;
      out.emplace_back(std::atan2(up, p.z()), sb > sa ? -1 : 1);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// L at the reference point q.
  int at_reference() const { return Lq_; }
  const Vec3& probe() const { return probe_; }
  const Vec3& reference() const { return q_; }
  const Mat3& rotation() const { return R_; }

  /// L at an arbitrary point (original frame).
  int at(const Vec3& p) const {
    Vec3 r = R_ * p;
    return Lq_ + crossings_above(std::atan2(r.y(), r.x()), std::atan2(std::hypot(r.x(), r.y()), r.z()));
  }

 private:
  int crossings_above(double lambda, double colat) const {
    int c = 0;
    for (auto& [lat, d] : meridian_crossings(lambda)) {
      if (lat >= colat) break;
      c += d;
    }
    return c;
  }

  Vec3 q_, probe_;
  Mat3 R_;
  std::vector<Vec3> pts_, orig_;
  int Lq_ = 0;
};

struct AreaOptions {
  int rows = 1024;
  int cols = 2048;
  int max_rows = 4096;
  double stability = 1e-3;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SideAreas {
  double left = 0.0;
  double right = 0.0;
  int rows = 0, cols = 0;
  double refinement_delta = 0.0;  // |left(fine) - left(coarse)|
};

namespace detail {

inline SideAreas grid_areas(const SideIndex& idx, int rows, int cols, unsigned threads) {
  std::vector<std::int64_t> left(static_cast<std::size_t>(rows), 0), right(static_cast<std::size_t>(rows), 0);
  unsigned T = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  T = std::min<unsigned>(T, static_cast<unsigned>(cols));
  std::vector<std::vector<std::int64_t>> lpart(T, std::vector<std::int64_t>(left.size(), 0)),
      rpart(T, std::vector<std::int64_t>(left.size(), 0));
  auto work = [&](unsigned w) {
    for (int j = static_cast<int>(w); j < cols; j += static_cast<int>(T)) {
      double lambda = (j + 0.5) * kTwoPi / cols;
      auto xs = idx.meridian_crossings(lambda);
      std::size_t c = 0;
      int L = idx.at_reference();
      for (int i = 0; i < rows; ++i) {
        double colat = (i + 0.5) * kPi / rows;
        while (c < xs.size() && xs[c].first < colat) L += xs[c++].second;
        if (L == 1) ++lpart[w][static_cast<std::size_t>(i)];
        else if (L == 0) ++rpart[w][static_cast<std::size_t>(i)];
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < T; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& th : pool) th.join();
  for (unsigned w = 0; w < T; ++w)
    for (std::size_t i = 0; i < left.size(); ++i) {
      left[i] += lpart[w][i];
      right[i] += rpart[w][i];
    }
  std::vector<double> al(left.size()), ar(left.size());
  double dl = kTwoPi / cols;
  for (int i = 0; i < rows; ++i) {
    double cell = dl * (std::cos(i * kPi / rows) - std::cos((i + 1) * kPi / rows));
    al[static_cast<std::size_t>(i)] = cell * static_cast<double>(left[static_cast<std::size_t>(i)]);
    ar[static_cast<std::size_t>(i)] = cell * static_cast<double>(right[static_cast<std::size_t>(i)]);
  }
  SideAreas s;
  s.left = pairwise_sum(al);
  s.right = pairwise_sum(ar);
  s.rows = rows;
  s.cols = cols;
  return s;
}

}  // namespace detail

/// Areas of the left and right regions of a simple closed curve by grid
/// membership. The grid lives in the frame of SideIndex, so it is tilted
/// against the coordinate axes. Resolution doubles until two successive
/// grids agree to options.stability.
inline SideAreas side_areas(std::span<const Vec3> curve, const AreaOptions& opt = {}) {
  if (auto hit = sphere_self_intersection(curve))
    fail(ErrorKind::NotSimple, "curve meets itself near t = " + fmt_double(hit->first) + " and t = " +
                                   fmt_double(hit->second));
  SideIndex idx(curve);
  int rows = opt.rows, cols = opt.cols;
  SideAreas coarse = detail::grid_areas(idx, rows / 2, cols / 2, opt.threads);
  SideAreas fine = detail::grid_areas(idx, rows, cols, opt.threads);
  while (std::abs(fine.left - coarse.left) > opt.stability && rows * 2 <= opt.max_rows) {
    rows *= 2;
    cols *= 2;
    coarse = fine;
    fine = detail::grid_areas(idx, rows, cols, opt.threads);
  }
  fine.refinement_delta = std::abs(fine.left - coarse.left);
  return fine;
}

enum class Side { Left, Right };

inline double enclosed_area(std::span<const Vec3> curve, Side side, const AreaOptions& opt = {}) {
  SideAreas a = side_areas(curve, opt);
  return side == Side::Left ? a.left : a.right;
}

struct PoleIndices {
  int I_plus = 0, I_minus = 0;
  int L_north = 0, L_south = 0;
};

/// Poles on the left (I+) and right (I-) of a curve that avoids both poles.
/// g1 and g2 reverse orientation, so the planar winding around the image of
/// p is L(pole at infinity) - L(p). The probe of SideIndex fixes the offset.
inline PoleIndices pole_indices(std::span<const Vec3> curve) {
  SideIndex idx(curve);
  auto side_of_pole = [&](Chart c) {
    auto poly = stereographic(curve, c);
    Complex origin(0.0, 0.0);
    Complex probe = stereographic_point(idx.probe(), c);
    return 1 + winding_number(poly, probe) - winding_number(poly, origin);
  };
  PoleIndices r;
  r.L_north = side_of_pole(Chart::North);
  r.L_south = side_of_pole(Chart::South);
  r.I_plus = r.L_north + r.L_south;
  r.I_minus = (1 - r.L_north) + (1 - r.L_south);
  return r;
}

struct CurveTopology {
  bool simple = false;
  int n_winding = 0;
  int I_plus = 0, I_minus = 0;
  double A_plus = std::numeric_limits<double>::quiet_NaN();
  double A_minus = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::pair<double, double>> intersection;
  int grid_rows = 0, grid_cols = 0;
  double refinement_delta = 0.0;
};

/// Topology of a regularized Gauss curve. Areas are left NaN for curves
/// that are not simple.
inline CurveTopology analyze_topology(const SampledPath& regularized, const AreaOptions& opt = {}) {
  auto curve = gauss_curve(regularized);
  CurveTopology t;
  t.n_winding = regularized.winding();
  t.intersection = sphere_self_intersection(curve);
  t.simple = !t.intersection;
  PoleIndices pi = pole_indices(curve);
  t.I_plus = pi.I_plus;
  t.I_minus = pi.I_minus;
  if (t.simple) {
    SideAreas a = side_areas(curve, opt);
    t.A_plus = a.left;
    t.A_minus = a.right;
    t.grid_rows = a.rows;
    t.grid_cols = a.cols;
    t.refinement_delta = a.refinement_delta;
  }
  return t;
}

struct MainTheoremResidual {
  double plus_form = 0.0;   // |dg - (A+ - 2 pi I+)|
  double minus_form = 0.0;  // |dg - (-A- + 2 pi I-)|
  double mean_form = 0.0;   // |dg - ((A+ - A-)/2 - pi (I+ - I-))|
  double max() const { return std::max({plus_form, minus_form, mean_form}); }
};

inline MainTheoremResidual main_theorem_residuals(double delta_g, const CurveTopology& t) {
  if (!t.simple) fail(ErrorKind::NotSimple, "the area-index identity needs a simple curve");
  MainTheoremResidual r;
  r.plus_form = std::abs(delta_g - (t.A_plus - kTwoPi * t.I_plus));
  r.minus_form = std::abs(delta_g - (-t.A_minus + kTwoPi * t.I_minus));
  r.mean_form = std::abs(delta_g - (0.5 * (t.A_plus - t.A_minus) - kPi * (t.I_plus - t.I_minus)));
  return r;
}

/// Full check on a path: Delta_g by quadrature, topology on gamma(eps).
inline MainTheoremResidual main_theorem_check(const SampledPath& path, double eps = 0.01,
                                              const AreaOptions& opt = {}) {
  RegularizedPath reg = clamp(path, eps);
  return main_theorem_residuals(geometric_phase(path), analyze_topology(reg.path(), opt));
}

}  // namespace hopfdisc
