#pragma once

#include "hopfdisc/projective.hpp"

namespace hopfdisc {

/// Real tangent vector to S^3 at base, in complex components. The conjugate
/// components are implied, so reality needs no extra bookkeeping.
class TangentS3 {
 public:
  TangentS3(const S3Point& base, Complex v1, Complex v2) : base_(base), v1_(v1), v2_(v2) {
    double defect = std::abs((std::conj(base.z1()) * v1 + std::conj(base.z2()) * v2).real());
    double scale = std::max(1.0, std::sqrt(std::norm(v1) + std::norm(v2)));
    if (!(defect <= tol::kTangency * scale))
      fail(ErrorKind::TangencyViolation, "vector is not tangent to S^3 (defect " + fmt_double(defect) + ")");
  }

  const S3Point& base() const { return base_; }
  Complex v1() const { return v1_; }
  Complex v2() const { return v2_; }
  double norm() const { return std::sqrt(std::norm(v1_) + std::norm(v2_)); }

  /// Push-forward under the right action R_a.
  TangentS3 act(Complex a) const { return TangentS3(base_.act(a), v1_ * a, v2_ * a); }

 private:
  S3Point base_;
  Complex v1_, v2_;
};

inline CP1Point hopf_map(const S3Point& p) { return CP1Point(p.z1(), p.z2()); }

/// hopf_map followed by the inverse diffeomorphism to S^2, in closed form.
inline Vec3 hopf_to_sphere(Complex z1, Complex z2) {
  Complex w = std::conj(z1) * z2;
  return {2.0 * w.real(), -2.0 * w.imag(), std::norm(z1) - std::norm(z2)};
}

inline S3Point section(int chart_id, const CP1Point& p) {
  Complex z1 = p.z1(), z2 = p.z2();
  if (chart_id == 1) {
    if (std::abs(z1) < tol::kChart) fail(ErrorKind::ChartDomain, "sigma_1 needs z1 != 0");
    Complex u = std::abs(z1) / z1;
    return S3Point::normalized(z1 * u, z2 * u);
  }
  if (chart_id == 2) {
    if (std::abs(z2) < tol::kChart) fail(ErrorKind::ChartDomain, "sigma_2 needs z2 != 0");
    Complex u = std::abs(z2) / z2;
    return S3Point::normalized(z1 * u, z2 * u);
  }
  fail(ErrorKind::Domain, "chart id must be 1 or 2");
}

/// psi_12 with sigma_2 = sigma_1 psi_12 on the overlap.
inline Complex transition_function(Complex z1, Complex z2) {
  if (std::abs(z1) < tol::kChart || std::abs(z2) < tol::kChart)
    fail(ErrorKind::ChartDomain, "transition function needs both coordinates nonzero");
  return (z1 / std::abs(z1)) / (z2 / std::abs(z2));
}

inline Complex transition_function(const CP1Point& p) { return transition_function(p.z1(), p.z2()); }

/// omega(v) = i Im(conj(z1) v1 + conj(z2) v2).
inline Complex canonical_connection(const TangentS3& v) {
  const S3Point& p = v.base();
  return {0.0, (std::conj(p.z1()) * v.v1() + std::conj(p.z2()) * v.v2()).imag()};
}

/// Tangent to CP^1 given on a representative curve: (z1, z2) and its
/// derivative (dz1, dz2). The chart forms do not depend on the representative.
struct ProjectiveTangent {
  Complex z1, z2, dz1, dz2;
};

/// Local connection form omega_i = sigma_i^* omega on chart i.
inline Complex chart_connection(int chart_id, const ProjectiveTangent& t) {
  double n1 = std::norm(t.z1), n2 = std::norm(t.z2), N = n1 + n2;
  if (chart_id == 1) {
    if (std::abs(t.z1) < tol::kChart * std::sqrt(N)) fail(ErrorKind::ChartDomain, "omega_1 needs z1 != 0");
    double im = (std::conj(t.z2) * t.dz2).imag() - n2 * (t.dz1 / t.z1).imag();
    return {0.0, im / N};
  }
  if (chart_id == 2) {
    if (std::abs(t.z2) < tol::kChart * std::sqrt(N)) fail(ErrorKind::ChartDomain, "omega_2 needs z2 != 0");
    double im = -n1 * (t.dz2 / t.z2).imag() + (std::conj(t.z1) * t.dz1).imag();
    return {0.0, im / N};
  }
  fail(ErrorKind::Domain, "chart id must be 1 or 2");
}

inline Complex chart_connection(int chart_id, const CP1Point& p, Complex dz1, Complex dz2) {
  return chart_connection(chart_id, ProjectiveTangent{p.z1(), p.z2(), dz1, dz2});
}

inline void check_imaginary(Complex A) {
  if (!(std::abs(A.real()) <= 1e-15 * std::max(1.0, std::abs(A))))
    fail(ErrorKind::Domain, "Lie algebra element must be purely imaginary");
}

/// A* at p: the velocity of p exp(tA) at t = 0.
inline TangentS3 fundamental_vector(Complex A, const S3Point& p) {
  check_imaginary(A);
  return TangentS3(p, p.z1() * A, p.z2() * A);
}

struct Split {
  TangentS3 horizontal;
  TangentS3 vertical;
};

inline Split split(const TangentS3& v) {
  TangentS3 vert = fundamental_vector(canonical_connection(v), v.base());
  TangentS3 hor(v.base(), v.v1() - vert.v1(), v.v2() - vert.v2());
  return {hor, vert};
}

/// Coordinate vectors d/dphi, d/dtheta, d/dbeta pushed into C^2 at the point
/// with the given angles.
struct AngleBasis {
  TangentS3 dphi, dtheta, dbeta;
};

inline AngleBasis angle_basis(double phi, double theta, double beta) {
  S3Point p = s3_from_angles(phi, theta, beta);
  const Complex i(0.0, 1.0);
  Complex e1 = std::exp(i * (0.5 * (phi + theta))), e2 = std::exp(i * (0.5 * (phi - theta)));
  double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
  return {TangentS3(p, 0.5 * i * p.z1(), 0.5 * i * p.z2()),
          TangentS3(p, 0.5 * i * p.z1(), -0.5 * i * p.z2()),
          TangentS3(p, -0.5 * s * e1, 0.5 * c * e2)};
}

/// Residual of the angle-coordinate description of the connection: the
/// vectors d/dtheta - cos(beta) d/dphi and d/dbeta are horizontal, and
/// 2 d/dphi is the fundamental vector of A = i.
inline double angle_basis_check(double phi, double theta, double beta) {
  if (std::sin(beta) < tol::kPoleFrame) fail(ErrorKind::DegenerateFrame, "angle basis degenerates at a pole");
  AngleBasis b = angle_basis(phi, theta, beta);
  double cb = std::cos(beta);
  TangentS3 h1(b.dtheta.base(), b.dtheta.v1() - cb * b.dphi.v1(), b.dtheta.v2() - cb * b.dphi.v2());
  TangentS3 two_dphi(b.dphi.base(), 2.0 * b.dphi.v1(), 2.0 * b.dphi.v2());
  TangentS3 astar = fundamental_vector(Complex(0.0, 1.0), b.dphi.base());
  double r = std::abs(canonical_connection(h1));
  r = std::max(r, std::abs(canonical_connection(b.dbeta)));
  r = std::max(r, std::abs(canonical_connection(two_dphi) - Complex(0.0, 1.0)));
  r = std::max(r, std::abs(two_dphi.v1() - astar.v1()) + std::abs(two_dphi.v2() - astar.v2()));
  return r;
}

}  // namespace hopfdisc
