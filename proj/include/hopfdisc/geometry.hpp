#pragma once

#include "hopfdisc/core.hpp"

#include <algorithm>

namespace hopfdisc {

/// Unit vector in R^3. Construction checks the norm.
class SpherePoint {
 public:
  SpherePoint() : v_(0.0, 0.0, 1.0) {}
  explicit SpherePoint(const Vec3& v) : v_(v) {
    if (!(std::abs(v.squaredNorm() - 1.0) <= tol::kUnitNorm))
      fail(ErrorKind::Domain, "point is not on the unit sphere");
  }
  SpherePoint(double x, double y, double z) : SpherePoint(Vec3(x, y, z)) {}

  static SpherePoint normalized(const Vec3& v) { return SpherePoint(v.normalized()); }

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  const Vec3& vec() const { return v_; }

 private:
  Vec3 v_;
};

/// Moving frame; e3 is the base point.
struct Frame {
  Vec3 e1, e2, e3;

  const Vec3& operator[](int i) const { return i == 0 ? e1 : (i == 1 ? e2 : e3); }
  double orthonormality_defect() const {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        d = std::max(d, std::abs((*this)[i].dot((*this)[j]) - (i == j ? 1.0 : 0.0)));
    return std::max(d, (e1.cross(e2) - e3).cwiseAbs().maxCoeff());
  }
};

/// Unit vector in C^2.
class S3Point {
 public:
  S3Point() : z1_(1.0), z2_(0.0) {}
  S3Point(Complex z1, Complex z2) : z1_(z1), z2_(z2) {
    if (!(std::abs(std::norm(z1) + std::norm(z2) - 1.0) <= tol::kUnitNorm))
      fail(ErrorKind::Domain, "point is not on the unit 3-sphere");
  }
  static S3Point normalized(Complex z1, Complex z2) {
    double r = std::sqrt(std::norm(z1) + std::norm(z2));
    if (!(r > 0.0)) fail(ErrorKind::Domain, "cannot normalize the zero vector");
    return S3Point(z1 / r, z2 / r);
  }

  Complex z1() const { return z1_; }
  Complex z2() const { return z2_; }
  double norm_defect() const { return std::abs(std::norm(z1_) + std::norm(z2_) - 1.0); }

  /// Right U(1) action p·a.
  S3Point act(Complex a) const { return S3Point::normalized(z1_ * a, z2_ * a); }

 private:
  Complex z1_, z2_;
};

/// Spherical coordinates of S^3: theta unwrapped, beta in [0, pi], phi the fiber angle.
struct Angles {
  double theta = 0.0;
  double beta = 0.0;
  double phi = 0.0;
};

inline void check_beta(double beta) {
  if (!(beta >= -tol::kAngleSlack && beta <= kPi + tol::kAngleSlack))
    fail(ErrorKind::Domain, "beta outside [0, pi]: " + fmt_double(beta));
}

inline Vec3 gauss_vec(double theta, double beta) {
  double sb = std::sin(beta);
  return {sb * std::cos(theta), sb * std::sin(theta), std::cos(beta)};
}

inline SpherePoint gauss_vector(double theta, double beta) {
  check_beta(beta);
  return SpherePoint::normalized(gauss_vec(theta, beta));
}

inline Frame local_frame(double theta, double beta) {
  check_beta(beta);
  double sb = std::sin(beta), cb = std::cos(beta);
  if (sb < tol::kPoleFrame) fail(ErrorKind::DegenerateFrame, "frame undefined at a pole");
  double st = std::sin(theta), ct = std::cos(theta);
  return {Vec3(-st, ct, 0.0), Vec3(-cb * ct, -cb * st, sb), Vec3(sb * ct, sb * st, cb)};
}

/// Frame connection one-forms evaluated on (dtheta, dbeta). The entries
/// satisfy w_ij = e_i . de_j, so de_i = sum_j w_ji e_j.
inline Mat3 connection_matrix(double /*theta*/, double beta, double dtheta, double dbeta) {
  Mat3 w = Mat3::Zero();
  w(0, 1) = -std::cos(beta) * dtheta;
  w(0, 2) = std::sin(beta) * dtheta;
  w(1, 2) = -dbeta;
  w(1, 0) = -w(0, 1);
  w(2, 0) = -w(0, 2);
  w(2, 1) = -w(1, 2);
  return w;
}

inline S3Point s3_from_angles(double phi, double theta, double beta) {
  check_beta(beta);
  const Complex i(0.0, 1.0);
  return S3Point::normalized(std::exp(i * (0.5 * (phi + theta))) * std::cos(0.5 * beta),
                             std::exp(i * (0.5 * (phi - theta))) * std::sin(0.5 * beta));
}

/// Largest deviation of the frame's difference quotient from the rotation
/// predicted by connection_matrix, evaluated at interval midpoints.
/// frames[k] must be local_frame(theta[k], beta[k]); h is the parameter step.
/// The residual is second order in h.
inline double finite_rotation_check(std::span<const Frame> frames, std::span<const double> theta,
                                    std::span<const double> beta, double h) {
  if (frames.size() != theta.size() || theta.size() != beta.size())
    fail(ErrorKind::Domain, "frame and angle sequences differ in length");
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
    double tm = 0.5 * (theta[k] + theta[k + 1]);
    double bm = 0.5 * (beta[k] + beta[k + 1]);
    Frame fm = local_frame(tm, bm);
    Mat3 w = connection_matrix(tm, bm, (theta[k + 1] - theta[k]) / h, (beta[k + 1] - beta[k]) / h);
    for (int i = 0; i < 3; ++i) {
      Vec3 predicted = w(0, i) * fm.e1 + w(1, i) * fm.e2 + w(2, i) * fm.e3;
      Vec3 actual = (frames[k + 1][i] - frames[k][i]) / h;
      worst = std::max(worst, (actual - predicted).norm());
    }
  }
  return worst;
}

}  // namespace hopfdisc
