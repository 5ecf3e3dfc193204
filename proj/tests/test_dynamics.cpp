#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curvebody/dynamics.hpp"
#include "curvebody/errors.hpp"
#include "curvebody/integrator.hpp"
#include "curvebody/systems.hpp"
#include "test_support.hpp"

using namespace curvebody;

namespace {
const CurvatureSign kPos = CurvatureSign::positive();
const CurvatureSign kNeg = CurvatureSign::negative();
constexpr double kPi = std::numbers::pi;

std::vector<double> ones(int n) { return std::vector<double>(n, 1.0); }

// Direct-summation oracle written straight from the b_i / c_i displays with cos(),
// independent of the half-angle form used by the library.
struct OracleTerms {
  std::vector<double> b, c;
};
OracleTerms oracle_terms(const std::vector<double>& m, const std::vector<double>& beta, int s,
                         double rho) {
  OracleTerms t;
  for (std::size_t i = 0; i < m.size(); ++i) {
    long double bi = 0, ci = 0;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i == j) continue;
      const long double d = static_cast<long double>(beta[i]) - beta[j];
      const long double w = 1.0L - std::cos(d);
      const long double g = 2.0L - s * static_cast<long double>(rho) * rho * w;
      bi += m[j] * std::pow(w, -0.5L) / std::pow(g, 1.5L);
      ci += m[j] * std::sin(d) / (std::pow(w, 1.5L) * std::pow(g, 1.5L));
    }
    t.b.push_back(static_cast<double>(bi));
    t.c.push_back(static_cast<double>(ci));
  }
  return t;
}

// Random point on q (.) q = sigma with a random tangent velocity.
void random_body(std::mt19937_64& rng, CurvatureSign sigma, std::size_t k, AmbientVector& q,
                 AmbientVector& v) {
  std::normal_distribution<double> g(0.0, 1.0);
  q = AmbientVector(k);
  v = AmbientVector(k);
  if (sigma == kPos) {
    double norm = 0;
    for (std::size_t c = 0; c < k; ++c) {
      q[c] = g(rng);
      norm += q[c] * q[c];
    }
    for (std::size_t c = 0; c < k; ++c) q[c] /= std::sqrt(norm);
  } else {
    double spatial = 0;
    for (std::size_t c = 0; c + 1 < k; ++c) {
      q[c] = 0.8 * g(rng);
      spatial += q[c] * q[c];
    }
    q[k - 1] = std::sqrt(1.0 + spatial);
  }
  for (std::size_t c = 0; c < k; ++c) v[c] = g(rng);
  const double qv = sigma_dot(q, v, sigma);
  for (std::size_t c = 0; c < k; ++c) v[c] -= sigma.as_double() * qv * q[c];
}

FullState random_state(std::mt19937_64& rng, CurvatureSign sigma, std::size_t n, std::size_t k) {
  std::uniform_real_distribution<double> mass(0.2, 2.0);
  for (;;) {
    FullState s;
    s.sigma = sigma;
    for (std::size_t i = 0; i < n; ++i) {
      AmbientVector q, v;
      random_body(rng, sigma, k, q, v);
      s.positions.push_back(q);
      s.velocities.push_back(v);
      s.masses.push_back(mass(rng));
    }
    bool separated = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double x = sigma_dot(s.positions[i], s.positions[j], sigma);
        separated = separated && sigma.as_double() * (1 - x * x) > 0.05;
      }
    }
    if (separated) return s;
  }
}
}  // namespace

TEST(PairInner, Examples) {
  EXPECT_EQ(pair_inner(0.7, 0.0, kPos), 1.0);
  EXPECT_EQ(pair_inner(0.7, 0.0, kNeg), -1.0);
  EXPECT_NEAR(pair_inner(1.0, kPi, kPos), -1.0, 1e-15);
  EXPECT_NEAR(pair_inner(0.5, kPi / 2, kNeg), -1.25, 1e-15);
}

TEST(PairInner, MatchesEmbeddedInnerProduct) {
  const auto cfg = PolygonConfig({1, 2, 3}, {0.1, 1.9, 4.0}, kNeg, 4);
  auto s = synthesize_initial(cfg, 0.9, 0.3, 0.4);
  s.theta = 1.3;
  const auto full = embed(s, cfg);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(sigma_dot(full.positions[i], full.positions[j], kNeg),
                  pair_inner(0.9, cfg.beta()[i] - cfg.beta()[j], kNeg), 1e-14);
    }
  }
}

TEST(CriterionTerms, TwoBodyValue) {
  const auto cfg = regular_polygon(2, 0.0, ones(2), kPos, 3);
  const auto t = criterion_terms(cfg, 0.5);
  const auto o = oracle_terms(cfg.masses(), cfg.beta(), 1, 0.5);
  // 2^{-1/2} / 1.5^{3/2}
  EXPECT_NEAR(t.b[0], 0.38490017945975050967, 1e-15);
  EXPECT_NEAR(t.b[1], t.b[0], 1e-15);
  EXPECT_NEAR(t.b[0], o.b[0], 1e-15);
  EXPECT_NEAR(t.c[0], 0.0, 1e-14);
  EXPECT_NEAR(t.c[1], 0.0, 1e-14);
  EXPECT_EQ(t.rho, 0.5);
}

TEST(CriterionTerms, UnequalMassTriangle) {
  const auto cfg = regular_polygon(3, 0.0, {1.0, 1.0, 2.0}, kPos, 3);
  const auto t = criterion_terms(cfg, 0.5);
  const auto o = oracle_terms(cfg.masses(), cfg.beta(), 1, 0.5);
  // frozen from a 40-digit direct summation
  EXPECT_NEAR(t.c[0], 0.22756931127188887057, 1e-14);
  EXPECT_NEAR(t.c[1], -0.22756931127188887057, 1e-14);
  EXPECT_NEAR(t.c[2], 0.0, 1e-14);
  EXPECT_NEAR(t.b[0], 1.1824848280991049857, 1e-14);
  EXPECT_NEAR(t.b[2], 0.78832321873273665715, 1e-14);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(t.b[i], o.b[i], 1e-14);
    EXPECT_NEAR(t.c[i], o.c[i], 1e-14);
  }
}

TEST(CriterionTerms, RegularEqualMassesCancel) {
  for (int n = 2; n <= 12; ++n) {
    for (auto sigma : {kPos, kNeg}) {
      const auto cfg = regular_polygon(n, 0.0, ones(n), sigma, 3);
      const double hi = sigma == kPos ? 0.95 : 3.0;
      for (double rho = 0.1; rho <= hi; rho += 0.17) {
        const auto t = criterion_terms(cfg, rho);
        for (int i = 0; i < n; ++i) {
          EXPECT_LE(std::abs(t.c[i]), 1e-13) << "n=" << n << " rho=" << rho;
          EXPECT_GT(t.b[i], 0.0);
          EXPECT_NEAR(t.b[i], t.b[0], 1e-12 * t.b[0]);
        }
      }
    }
  }
}

TEST(CriterionTerms, TwoBodyMassRatio) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mass(0.1, 5), ang(0.1, 2 * kPi - 0.1), rho(0.1, 0.9);
  for (int trial = 0; trial < 300; ++trial) {
    const double m1 = mass(rng), m2 = mass(rng);
    const auto sigma = trial % 2 ? kPos : kNeg;
    const auto cfg = PolygonConfig({m1, m2}, {0.0, ang(rng)}, sigma, 3);
    const auto t = criterion_terms(cfg, rho(rng));
    EXPECT_NEAR(t.b[0] / m2, t.b[1] / m1, 1e-14 * t.b[0] / m2);
  }
}

TEST(CriterionTerms, Singularities) {
  const auto two = regular_polygon(2, 0.0, ones(2), kPos, 3);
  EXPECT_THROW(criterion_terms(two, 1.0), SingularityError);
  try {
    criterion_terms(two, 1.0);
  } catch (const SingularityError& e) {
    EXPECT_EQ(e.kind(), SingularityKind::antipodal);
  }
  EXPECT_THROW(criterion_terms(two, 0.0), SingularityError);
  EXPECT_THROW(criterion_terms(two, -0.3), SingularityError);
  // hyperbolic has no antipodal singularity
  const auto hyp = regular_polygon(2, 0.0, ones(2), kNeg, 3);
  EXPECT_NO_THROW(criterion_terms(hyp, 5.0));
}

TEST(FullRhs, TangencyIdentityRandomStates) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sigma = trial % 2 ? kPos : kNeg;
    const auto s = random_state(rng, sigma, 2 + trial % 5, 2 + trial % 4);
    const auto acc = full_rhs(s);
    for (std::size_t i = 0; i < s.n(); ++i) {
      const double lhs = sigma_dot(s.positions[i], acc[i], sigma);
      const double rhs = -sigma_dot(s.velocities[i], s.velocities[i], sigma);
      double scale = 1.0;
      for (std::size_t c = 0; c < s.k(); ++c) scale = std::max(scale, std::abs(acc[i][c]));
      EXPECT_NEAR(lhs, rhs, 1e-12 * scale);
    }
  }
}

TEST(FullRhs, MirrorSymmetry) {
  for (auto sigma : {kPos, kNeg}) {
    FullState s;
    s.sigma = sigma;
    s.masses = {1.3, 1.3};
    const double z = sigma == kPos ? std::sqrt(1 - 0.25 - 0.16) : std::sqrt(1 + 0.25 + 0.16);
    s.positions = {AmbientVector{0.5, 0.4, z}, AmbientVector{0.5, -0.4, z}};
    AmbientVector v{0.1, 0.3, 0.0};
    v[2] = -(0.5 * 0.1 + 0.4 * 0.3) / (sigma.as_double() * z);
    s.velocities = {v, AmbientVector{v[0], -v[1], v[2]}};
    const auto acc = full_rhs(s);
    EXPECT_NEAR(acc[0][0], acc[1][0], 1e-12);
    EXPECT_NEAR(acc[0][1], -acc[1][1], 1e-12);
    EXPECT_NEAR(acc[0][2], acc[1][2], 1e-12);
  }
}

TEST(FullRhs, Singularities) {
  FullState s;
  s.sigma = kPos;
  s.masses = {1, 1};
  s.positions = {AmbientVector{1, 0, 0}, AmbientVector{-1, 0, 0}};
  s.velocities = {AmbientVector{0, 0, 0}, AmbientVector{0, 0, 0}};
  try {
    full_rhs(s);
    FAIL() << "antipodal pair must be singular";
  } catch (const SingularityError& e) {
    EXPECT_EQ(e.kind(), SingularityKind::antipodal);
  }
  s.positions[1] = AmbientVector{1, 0, 0};
  EXPECT_THROW(full_rhs(s), CollisionError);
  s.sigma = kNeg;
  s.positions = {AmbientVector{0, 0, 1}, AmbientVector{0, 0, 1}};
  EXPECT_THROW(full_rhs(s), CollisionError);
}

TEST(FullRhs, FiniteDifferenceOfIntegratedTrajectory) {
  const auto cfg = regular_polygon(3, 0.0, ones(3), kPos, 3);
  const auto s0 = synthesize_initial(cfg, 0.8, 0.0, 1.0);
  const auto y0 = pack_full(embed(s0, cfg));
  const double h = 1e-4;
  const auto traj =
      integrate_fixed_rk4(make_full_rhs(cfg.masses(), kPos, 3), y0, {0.0, 2 * h}, h, h);
  ASSERT_EQ(traj.samples.size(), 3u);
  const auto mid = unpack_full(traj.samples[1], cfg.masses(), kPos, 3);
  const auto acc = full_rhs(mid);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t idx = i * 3 + c;
      const double fd =
          (traj.samples[2][idx] - 2 * traj.samples[1][idx] + traj.samples[0][idx]) / (h * h);
      EXPECT_NEAR(fd, acc[i][c], 1e-6);
    }
  }
}

TEST(ReducedRhs, RelativeEquilibriumIsFixed) {
  for (auto sigma : {kPos, kNeg}) {
    for (int n : {2, 3, 5, 8}) {
      const auto cfg = regular_polygon(n, 0.0, ones(n), sigma, 3);
      const double rho = sigma == kPos ? 0.8 : 0.6;
      const auto s =
          synthesize_initial(cfg, rho, 0.0, relative_equilibrium_theta_dot(cfg, rho));
      const auto d = reduced_rhs(s, cfg);
      EXPECT_LE(std::abs(d.rho_dot), 1e-12);  // slot holds rho''
      EXPECT_LE(std::abs(d.theta_dot), 1e-12);
      EXPECT_LE(std::abs(d.z_dot[0]), 1e-12);
      EXPECT_EQ(d.rho, 0.0);
    }
  }
}

TEST(ReducedRhs, PureAttractionShrinksSphericalPolygon) {
  const auto cfg = regular_polygon(3, 0.0, ones(3), kPos, 3);
  const auto s = synthesize_initial(cfg, 0.8, 0.0, 0.0);
  const auto d = reduced_rhs(s, cfg);
  const double b = criterion_b(cfg, 0.8, 0);
  EXPECT_LT(d.rho_dot, 0.0);
  EXPECT_NEAR(d.rho_dot, (1.0 - 1.0 / 0.64) * b, 1e-14);
}

TEST(ReducedRhs, AngularMomentumRateVanishes) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> rate(-2, 2), rho(0.1, 0.95);
  const auto cfg = regular_polygon(4, 0.0, ones(4), kPos, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = synthesize_initial(cfg, rho(rng), rate(rng), rate(rng));
    const auto d = reduced_rhs(s, cfg);
    const double rate_l = 2 * s.rho * s.rho_dot * s.theta_dot + s.rho * s.rho * d.theta_dot;
    EXPECT_NEAR(rate_l, 0.0, 1e-14);
  }
}

// d^2/dt^2 (rho^2 + Z(.)Z) = 2 rho'^2 + 2 rho rho'' + 2 Z'(.)Z' + 2 Z(.)Z'' must vanish on the
// constraint surface; this is what pins the (sigma / rho) b coefficient of Z''.
TEST(ReducedRhs, ConstraintSecondDerivativeVanishes) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> rate(-1.5, 1.5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sigma = trial % 2 ? kPos : kNeg;
    const int n = 2 + trial % 7;
    const int k = 3 + trial % 3;
    const auto cfg = regular_polygon(n, 0.2, ones(n), sigma, k);
    std::uniform_real_distribution<double> rho(0.1, sigma == kPos ? 0.95 : 2.5);
    const auto s = synthesize_initial(cfg, rho(rng), rate(rng), rate(rng));
    const auto d = reduced_rhs(s, cfg);
    const double second = 2 * s.rho_dot * s.rho_dot + 2 * s.rho * d.rho_dot +
                          2 * sigma_dot(s.z_dot, s.z_dot, sigma) +
                          2 * sigma_dot(s.z, d.z_dot, sigma);
    const double scale = 1.0 + std::abs(s.rho * d.rho_dot);
    EXPECT_NEAR(second, 0.0, 1e-12 * scale);
  }
}

TEST(ReducedRhs, StrictModeRejectsUnequalB) {
  const auto cfg = PolygonConfig({1, 1, 1}, {0.0, 2.0, 4.3}, kPos, 3);
  const auto s = synthesize_initial(cfg, 0.5, 0.0, 1.0);
  ReducedOptions strict;
  strict.strict_b = true;
  EXPECT_THROW(reduced_rhs(s, cfg, strict), CriterionError);
  EXPECT_NO_THROW(reduced_rhs(s, cfg));
  const auto regular = regular_polygon(5, 0.0, ones(5), kPos, 3);
  EXPECT_NO_THROW(reduced_rhs(synthesize_initial(regular, 0.5, 0.0, 1.0), regular, strict));
}

TEST(ReducedRhs, NonPositiveRhoIsSingular) {
  const auto cfg = regular_polygon(3, 0.0, ones(3), kPos, 3);
  auto y = pack_reduced(synthesize_initial(cfg, 0.5, 0.0, 1.0));
  y[0] = 0.0;
  std::vector<double> d(y.size());
  EXPECT_THROW(reduced_rhs_flat(y, cfg, d), SingularityError);
}

TEST(ReducedRhs, PairInnerDerivativeAlongEmbeddedTrajectory) {
  for (auto sigma : {kPos, kNeg}) {
    const auto cfg = regular_polygon(3, 0.0, ones(3), sigma, 3);
    const auto s0 = synthesize_initial(cfg, 0.7, 0.2, 0.9);
    const double h = 1e-4;
    const auto traj = integrate_fixed_rk4(make_reduced_rhs(cfg), pack_reduced(s0),
                                          {0.0, 2 * h}, h / 4, h);
    ASSERT_EQ(traj.samples.size(), 3u);
    const double delta = cfg.beta()[0] - cfg.beta()[1];
    const double fd = (pair_inner(traj.samples[2][0], delta, sigma) -
                       pair_inner(traj.samples[0][0], delta, sigma)) /
                      (2 * h);
    const auto mid = embed(unpack_reduced(traj.samples[1], 3), cfg);
    const double analytic = sigma_dot(mid.velocities[0], mid.positions[1], sigma) +
                            sigma_dot(mid.positions[0], mid.velocities[1], sigma);
    EXPECT_NEAR(fd, analytic, 1e-6);
  }
}

TEST(Packing, RoundTrip) {
  std::mt19937_64 rng(4);
  const auto full = random_state(rng, kNeg, 4, 3);
  const auto back = unpack_full(pack_full(full), full.masses, kNeg, 3);
  EXPECT_EQ(back.positions, full.positions);
  EXPECT_EQ(back.velocities, full.velocities);
  const auto cfg = regular_polygon(3, 0.0, ones(3), kPos, 5);
  const auto r = synthesize_initial(cfg, 0.4, 0.1, 0.3);
  const auto rr = unpack_reduced(pack_reduced(r), 5);
  EXPECT_EQ(rr.z, r.z);
  EXPECT_EQ(rr.z_dot, r.z_dot);
  EXPECT_EQ(rr.rho, r.rho);
  EXPECT_THROW(unpack_reduced(std::vector<double>(5), 3), DimensionError);
}
