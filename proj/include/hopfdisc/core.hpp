#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdio>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hopfdisc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fixed numerical tolerances. RunConfig copies these so a report records
// exactly what it was checked against.
namespace tol {
inline constexpr double kUnitNorm = 1e-12;
inline constexpr double kFrame = 1e-10;
inline constexpr double kAngleSlack = 1e-9;
inline constexpr double kPoleFrame = 1e-9;
inline constexpr double kClosure = 1e-9;
inline constexpr double kChart = 1e-12;
inline constexpr double kTangency = 1e-10;
inline constexpr double kStationary = 1e-9;
inline constexpr double kPointOnCurve = 1e-9;
inline constexpr double kPoleHit = 1e-9;
inline constexpr double kCross = 1e-12;
inline constexpr double kDegenerateLength = 1e-9;
}  // namespace tol

enum class ErrorKind {
  Domain,
  DegenerateFrame,
  ClosureViolation,
  DomainViolation,
  NonPositiveRadius,
  EpsilonOutOfRange,
  PoleHit,
  PointOnCurve,
  NotSimple,
  ChartDomain,
  TangencyViolation,
  NotClosed,
  BasePointMismatch,
  DegenerateCurve,
  NonSmooth,
  Config,
  Io,
};

constexpr std::string_view name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::ClosureViolation: return "ClosureViolation";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorKind::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::PointOnCurve: return "PointOnCurve";
    case ErrorKind::NotSimple: return "NotSimple";
    case ErrorKind::ChartDomain: return "ChartDomain";
    case ErrorKind::TangencyViolation: return "TangencyViolation";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::BasePointMismatch: return "BasePointMismatch";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::NonSmooth: return "NonSmooth";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(name(kind)) + ": " + what), kind_(kind), detail_(what) {}
  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

// Maps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// Recursive pairwise summation; the split points depend only on the length,
// so the result is reproducible for a given input order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace hopfdisc
