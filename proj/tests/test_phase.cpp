#include "support.hpp"

#include <gtest/gtest.h>

using namespace hopfdisc;
using namespace hopfdisc::test;

TEST(DynamicalPhase, Values) {
  EXPECT_DOUBLE_EQ(dynamical_phase(1, 1, 1), kTwoPi);
  EXPECT_EQ(dynamical_phase(3, 2, 0), 0.0);
  EXPECT_DOUBLE_EQ(dynamical_phase(2, 1, -1), -2 * kTwoPi);
  EXPECT_THROW(dynamical_phase(0, 1, 1), Error);
  EXPECT_THROW(dynamical_phase(1, -2, 1), Error);
}

TEST(GeometricPhase, Latitudes) {
  EXPECT_NEAR(geometric_phase(sample(latitude(kPi / 2), 256)), 0.0, 1e-15);
  EXPECT_NEAR(geometric_phase(sample(latitude(kPi / 3), 256)), -kPi, 1e-13);
  EXPECT_NEAR(geometric_phase(sample(latitude(0.0, 2), 256)), -2 * kTwoPi, 1e-13);
}

TEST(GeometricPhase, WobbleAgainstIndependentQuadrature) {
  // Gauss-Legendre on 400 panels of the analytic integrand.
  const double b0 = 1.1, amp = 0.5;
  const int m = 3;
  auto f = [&](double t) { return -std::cos(b0 + amp * std::sin(kTwoPi * m * t)) * kTwoPi; };
  const double x[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)}, w[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
  double ref = 0.0;
  for (int j = 0; j < 400; ++j)
    for (int q = 0; q < 3; ++q) ref += 0.5 * w[q] * f((j + 0.5 + 0.5 * x[q]) / 400.0) / 400.0;
  EXPECT_NEAR(geometric_phase(sample(wobble(b0, amp, m), 8192)), ref, 1e-11);
}

TEST(GeometricPhase, PiecewiseLinearTable) {
  // Each linear piece integrates in closed form:
  // -int cos(beta) dtheta = -(dtheta/dbeta)(sin b1 - sin b0).
  auto piece = [](double th0, double b0, double th1, double b1) {
    return -(th1 - th0) / (b1 - b0) * (std::sin(b1) - std::sin(b0));
  };
  MotionSpec s = table({{0, 0, 1.0}, {0.3, kPi, 1.3}, {1, kTwoPi, 1.0}});
  double want = piece(0, 1.0, kPi, 1.3) + piece(kPi, 1.3, kTwoPi, 1.0);
  EXPECT_NEAR(geometric_phase(sample(s, 256)), want, 1e-10);
  EXPECT_NEAR(geometric_phase(sample(s, 2048)), want, 1e-13);
  EXPECT_NEAR(geometric_phase(sample(square_table(), 256)), std::cos(1.6) - std::cos(1.0), 1e-14);
}

TEST(RunningPhase, LatitudeAccumulatesLinearly) {
  SampledPath p = sample(latitude(kPi / 3), 512);
  auto r = running_geometric_phase(p);
  EXPECT_EQ(r.front(), 0.0);
  EXPECT_NEAR(r[256], -kPi / 2, 1e-13);
  EXPECT_NEAR(r[1], -kPi / 512, 1e-15);
  EXPECT_NEAR(r.back(), geometric_phase(p), 1e-12);
}

TEST(RunningPhase, EndpointMatchesTotalOnEveryFamily) {
  for (const MotionSpec& s : {wobble(1.0, 0.4, 3), sweep(0.1, 3.0), square_table(), figure_eight_table()}) {
    PhaseResult r = compute_phases(sample(s, 1024), 2.0, 3.0);
    EXPECT_EQ(r.running_delta_g.front(), 0.0);
    EXPECT_NEAR(r.running_delta_g.back(), r.delta_g, 1e-12);
    EXPECT_EQ(r.delta_total, r.delta_d + r.delta_g);
  }
}

TEST(Reversal, NegatesPhase) {
  for (const MotionSpec& s : {wobble(1.0, 0.4, 3), sweep(0.1, 3.0), latitude(0.3, 2)}) {
    SampledPath p = sample(s, 2048);
    EXPECT_EQ(geometric_phase(reversed(p)), -geometric_phase(p));
  }
  for (const MotionSpec& s : {square_table(), figure_eight_table()}) {
    SampledPath p = sample(s, 2048);
    EXPECT_NEAR(geometric_phase(reversed(p)), -geometric_phase(p), 1e-14);
  }
}

TEST(Reparameterization, WarpLeavesPhaseUnchanged) {
  for (double c : {-0.8, 0.3, 0.9}) {
    MotionSpec s = wobble(1.3, 0.5, 2);
    MotionSpec w = s;
    w.warp = c;
    w = make_motion(w);
    EXPECT_NEAR(geometric_phase(sample(w, 8192)), geometric_phase(sample(s, 8192)), 1e-9);
  }
}

TEST(Concatenation, TwiceAroundDoubles) {
  SampledPath p = sample(wobble(1.3, 0.5, 2), 4096);
  double one = geometric_phase(p);
  EXPECT_NEAR(geometric_phase(concatenate(p, p)), 2 * one, 1e-10);
  EXPECT_NEAR(geometric_phase(sample(wobble(1.3, 0.5, 4, 2), 8192)), 2 * one, 1e-10);
}

TEST(Convergence, SimpsonIsFourthOrder) {
  // Warped latitude: -cos(b0) theta(w(t)) in closed form at every node.
  MotionSpec s = latitude(1.1);
  s.warp = 0.8;
  s = make_motion(s);
  auto err = [&](std::size_t N) {
    auto r = running_geometric_phase(sample(s, N));
    double t = 0.25;
    double exact = -std::cos(1.1) * kTwoPi * (t - 0.8 * std::sin(kTwoPi * t) / kTwoPi);
    return std::abs(r[N / 4] - exact);
  };
  double e1 = err(256), e2 = err(512), e3 = err(1024);
  EXPECT_GT(e1 / e2, 8.0);
  EXPECT_GT(e2 / e3, 8.0);
}
