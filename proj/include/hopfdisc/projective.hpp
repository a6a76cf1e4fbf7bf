#pragma once

#include "hopfdisc/geometry.hpp"

namespace hopfdisc {

/// Point of CP^1, stored as the unit representative whose larger coordinate
/// is real and positive.
class CP1Point {
 public:
  CP1Point() : z1_(1.0), z2_(0.0) {}
  CP1Point(Complex z1, Complex z2) {
    double r = std::sqrt(std::norm(z1) + std::norm(z2));
    if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorKind::Domain, "homogeneous coordinates (0, 0)");
    z1 /= r;
    z2 /= r;
    Complex big = std::abs(z1) >= std::abs(z2) ? z1 : z2;
    Complex phase = std::conj(big) / std::abs(big);
    z1_ = z1 * phase;
    z2_ = z2 * phase;
  }

  Complex z1() const { return z1_; }
  Complex z2() const { return z2_; }

  double distance(const CP1Point& o) const {
    return std::max(std::abs(z1_ - o.z1_), std::abs(z2_ - o.z2_));
  }

 private:
  Complex z1_, z2_;
};

/// Affine chart value: chart 1 is z2/z1, chart 2 is z1/z2.
inline Complex chart(int chart_id, const CP1Point& p) {
  if (chart_id == 1) {
    if (std::abs(p.z1()) < tol::kChart) fail(ErrorKind::ChartDomain, "z1 vanishes in chart 1");
    return p.z2() / p.z1();
  }
  if (chart_id == 2) {
    if (std::abs(p.z2()) < tol::kChart) fail(ErrorKind::ChartDomain, "z2 vanishes in chart 2");
    return p.z1() / p.z2();
  }
  fail(ErrorKind::Domain, "chart id must be 1 or 2");
}

inline CP1Point sphere_to_cp1(const SpherePoint& p) {
  double a = p.x(), b = p.y(), c = p.z();
  if (c >= 0.0) return CP1Point(1.0, Complex(a, -b) / (1.0 + c));
  return CP1Point(Complex(a, b) / (1.0 - c), 1.0);
}

inline SpherePoint cp1_to_sphere(const CP1Point& p) {
  if (std::abs(p.z1()) >= std::abs(p.z2())) {
    Complex w = p.z2() / p.z1();
    double m = std::norm(w);
    return SpherePoint::normalized(Vec3(2.0 * w.real(), -2.0 * w.imag(), 1.0 - m) / (1.0 + m));
  }
  Complex w = p.z1() / p.z2();
  double m = std::norm(w);
  return SpherePoint::normalized(Vec3(2.0 * w.real(), 2.0 * w.imag(), m - 1.0) / (1.0 + m));
}

}  // namespace hopfdisc
