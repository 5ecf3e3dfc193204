#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curvebody/errors.hpp"
#include "curvebody/integrator.hpp"

using namespace curvebody;

namespace {
void exponential(double, std::span<const double> y, std::span<double> d) { d[0] = y[0]; }
void oscillator(double, std::span<const double> y, std::span<double> d) {
  d[0] = y[1];
  d[1] = -y[0];
}
// y' = 1 / (1 - t), singular at t = 1
void pole(double t, std::span<const double>, std::span<double> d) {
  if (t >= 1.0) throw SingularityError(SingularityKind::collision, "pole at t = 1");
  d[0] = 1.0 / (1.0 - t);
}

IntegrationSettings tight() {
  IntegrationSettings s;
  s.rel_tol = 1e-10;
  s.abs_tol = 1e-12;
  s.max_step = 0.5;
  s.min_step = 1e-14;
  s.sample_interval = 0.1;
  return s;
}
}  // namespace

TEST(FixedRk4, ZeroRhsKeepsState) {
  const auto t = integrate_fixed_rk4([](double, auto, std::span<double> d) { d[0] = d[1] = 0; },
                                     {1.0, 2.0}, {0.0, 1.0}, 0.01, 0.25);
  ASSERT_EQ(t.times.size(), 5u);
  for (const auto& y : t.samples) {
    EXPECT_EQ(y[0], 1.0);
    EXPECT_EQ(y[1], 2.0);
  }
  EXPECT_TRUE(t.completed());
}

TEST(FixedRk4, Exponential) {
  const auto t = integrate_fixed_rk4(exponential, {1.0}, {0.0, 1.0}, 1e-3, 0.1);
  EXPECT_NEAR(t.samples.back()[0], std::numbers::e, 1e-10);
  EXPECT_DOUBLE_EQ(t.times.back(), 1.0);
  for (std::size_t j = 1; j < t.times.size(); ++j) EXPECT_GT(t.times[j], t.times[j - 1]);
}

TEST(FixedRk4, OscillatorPeriod) {
  const double two_pi = 2 * std::numbers::pi;
  const auto t = integrate_fixed_rk4(oscillator, {1.0, 0.0}, {0.0, two_pi}, 1e-3, 0.5);
  EXPECT_NEAR(t.samples.back()[0], 1.0, 1e-9);
  EXPECT_NEAR(t.samples.back()[1], 0.0, 1e-9);
}

TEST(FixedRk4, FourthOrder) {
  auto err = [](double h) {
    return std::abs(integrate_fixed_rk4(exponential, {1.0}, {0.0, 1.0}, h, 1.0).samples.back()[0] -
                    std::numbers::e);
  };
  const double ratio = err(0.1) / err(0.05);
  EXPECT_GE(ratio, 12.0);
  EXPECT_LE(ratio, 20.0);
}

TEST(FixedRk4, LinearSampleInterpolation) {
  // y' = 1 is integrated exactly, so interpolated samples are exact too
  const auto t = integrate_fixed_rk4([](double, auto, std::span<double> d) { d[0] = 1.0; },
                                     {0.0}, {0.0, 1.0}, 0.3, 0.1);
  ASSERT_EQ(t.times.size(), 11u);
  for (std::size_t j = 0; j < t.times.size(); ++j) {
    EXPECT_NEAR(t.samples[j][0], t.times[j], 1e-15);
  }
}

TEST(FixedRk4, SingularRhsTerminates) {
  const auto t = integrate_fixed_rk4(pole, {0.0}, {0.0, 2.0}, 0.01, 0.1);
  EXPECT_EQ(t.termination.kind, TerminationKind::singularity);
  EXPECT_LT(t.termination.time, 1.0);
  EXPECT_GT(t.termination.time, 0.97);
  for (const auto& y : t.samples) EXPECT_TRUE(std::isfinite(y[0]));
}

TEST(Adaptive, Exponential) {
  const auto t = integrate_adaptive(exponential, {1.0}, {0.0, 1.0}, tight());
  EXPECT_NEAR(t.samples.back()[0], std::numbers::e, 1e-9);
  EXPECT_EQ(t.times.size(), 11u);
  EXPECT_EQ(t.times.back(), 1.0);
}

TEST(Adaptive, OscillatorEnergy) {
  const auto t = integrate_adaptive(oscillator, {1.0, 0.0}, {0.0, 100.0}, tight());
  ASSERT_TRUE(t.completed());
  double worst = 0;
  for (const auto& y : t.samples) worst = std::max(worst, std::abs(y[0] * y[0] + y[1] * y[1] - 1));
  EXPECT_LE(worst, 1e-8);
}

TEST(Adaptive, PoleTerminationTime) {
  auto s = tight();
  s.min_step = 1e-10;
  const auto t = integrate_adaptive(pole, {0.0}, {0.0, 2.0}, s);
  EXPECT_NE(t.termination.kind, TerminationKind::completed);
  EXPECT_NEAR(t.termination.time, 1.0, 1e-3);
  EXPECT_EQ(t.times.back(), t.termination.time);
  for (const auto& y : t.samples) EXPECT_TRUE(std::isfinite(y[0]));
}

TEST(Adaptive, SingularAtStart) {
  const auto t = integrate_adaptive(pole, {0.0}, {1.0, 2.0}, tight());
  EXPECT_EQ(t.termination.kind, TerminationKind::singularity);
  EXPECT_EQ(t.termination.time, 1.0);
  EXPECT_EQ(t.samples.size(), 1u);
}

TEST(Adaptive, Deterministic) {
  const auto a = integrate_adaptive(oscillator, {1.0, 0.3}, {0.0, 20.0}, tight());
  const auto b = integrate_adaptive(oscillator, {1.0, 0.3}, {0.0, 20.0}, tight());
  EXPECT_EQ(a.times, b.times);
  EXPECT_EQ(a.samples, b.samples);
}

TEST(Adaptive, ProjectionHookRuns) {
  int calls = 0;
  const auto t = integrate_adaptive(
      oscillator, {1.0, 0.0}, {0.0, 1.0}, tight(),
      [&](std::span<double> y) {
        ++calls;
        const double r = std::hypot(y[0], y[1]);
        y[0] /= r;
        y[1] /= r;
      });
  EXPECT_GT(calls, 0);
  for (const auto& y : t.samples) EXPECT_NEAR(std::hypot(y[0], y[1]), 1.0, 1e-15);
}

TEST(Settings, Validation) {
  IntegrationSettings s;
  EXPECT_NO_THROW(s.validate());
  s.min_step = 1.0;
  EXPECT_THROW(s.validate(), ValidationError);
  s = IntegrationSettings{};
  s.rel_tol = 0;
  EXPECT_THROW(s.validate(), ValidationError);
  EXPECT_THROW(integrate_adaptive(exponential, {1.0}, {1.0, 0.0}, IntegrationSettings{}),
               ValidationError);
}
