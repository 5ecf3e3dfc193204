#include "curvebody/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curvebody/errors.hpp"

namespace curvebody {

double pair_inner(double rho, double delta, CurvatureSign sigma) {
  const double half = std::sin(0.5 * delta);
  return sigma.as_double() - rho * rho * (2.0 * half * half);
}

namespace {

struct PairFactors {
  double w;        // 1 - cos d, computed as 2 sin^2(d/2)
  double sin_d;
  double g_pow;    // (2 - sigma rho^2 w)^{3/2}
};

PairFactors pair_factors(const PolygonConfig& config, double rho, std::size_t i, std::size_t j) {
  const double d = config.beta()[i] - config.beta()[j];
  const double half = std::sin(0.5 * d);
  const double w = 2.0 * half * half;
  if (!(w > 0.0)) {
    throw CollisionError("bodies " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                         " coincide");
  }
  const double g = 2.0 - config.sigma().as_double() * rho * rho * w;
  if (!(g > 0.0)) {
    throw SingularityError(SingularityKind::antipodal,
                           "antipodal pair " + std::to_string(i + 1) + "," +
                               std::to_string(j + 1) + " at rho = " + std::to_string(rho));
  }
  return {w, std::sin(d), g * std::sqrt(g)};
}

void require_size(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw SingularityError(SingularityKind::nonpositive_size,
                           "rho = " + std::to_string(rho) + " is not positive");
  }
}

}  // namespace

double criterion_b(const PolygonConfig& config, double rho, std::size_t i) {
  require_size(rho);
  const auto& m = config.masses();
  double b = 0.0;
  for (std::size_t j = 0; j < config.n(); ++j) {
    if (j == i) continue;
    const PairFactors f = pair_factors(config, rho, i, j);
    b += m[j] / (std::sqrt(f.w) * f.g_pow);
  }
  return b;
}

CriterionTerms criterion_terms(const PolygonConfig& config, double rho) {
  require_size(rho);
  const std::size_t n = config.n();
  const auto& m = config.masses();
  CriterionTerms out;
  out.rho = rho;
  out.b.assign(n, 0.0);
  out.c.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const PairFactors f = pair_factors(config, rho, i, j);
      const double sw = std::sqrt(f.w);
      out.b[i] += m[j] / (sw * f.g_pow);
      out.c[i] += m[j] * f.sin_d / (f.w * sw * f.g_pow);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> pack_full(const FullState& s) {
  const std::size_t n = s.n();
  const std::size_t k = s.k();
  std::vector<double> y(2 * n * k);
  for (std::size_t i = 0; i < n; ++i) {
    if (s.positions[i].size() != k || s.velocities[i].size() != k) {
      throw DimensionError("pack_full: inconsistent vector lengths");
    }
    std::copy_n(s.positions[i].coords().begin(), k, y.begin() + i * k);
    std::copy_n(s.velocities[i].coords().begin(), k, y.begin() + (n + i) * k);
  }
  return y;
}

FullState unpack_full(std::span<const double> y, std::span<const double> masses,
                      CurvatureSign sigma, std::size_t k) {
  const std::size_t n = masses.size();
  if (y.size() != 2 * n * k) throw DimensionError("unpack_full: wrong flat length");
  FullState s;
  s.masses.assign(masses.begin(), masses.end());
  s.sigma = sigma;
  for (std::size_t i = 0; i < n; ++i) {
    s.positions.emplace_back(y.subspan(i * k, k));
    s.velocities.emplace_back(y.subspan((n + i) * k, k));
  }
  return s;
}

void body_acceleration(std::size_t i, std::span<const double> positions,
                       std::span<const double> velocities, std::span<const double> masses,
                       CurvatureSign sigma, std::size_t k, std::span<double> accel) {
  const double s = sigma.as_double();
  const std::size_t n = masses.size();
  const auto qi = positions.subspan(i * k, k);
  std::fill(accel.begin(), accel.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const auto qj = positions.subspan(j * k, k);
    const double x = sigma_dot(qi, qj, sigma);
    const double d = s * (1.0 - x) * (1.0 + x);
    if (!(d > 0.0)) {
      const std::string pair = std::to_string(i + 1) + "," + std::to_string(j + 1);
      if (sigma == CurvatureSign::positive() && x < 0.0) {
        throw SingularityError(SingularityKind::antipodal, "antipodal pair " + pair);
      }
      throw CollisionError("collision of pair " + pair);
    }
    const double coef = masses[j] / (d * std::sqrt(d));
    const double sx = s * x;
    for (std::size_t c = 0; c < k; ++c) accel[c] += coef * (qj[c] - sx * qi[c]);
  }
  const auto vi = velocities.subspan(i * k, k);
  const double kinetic = s * sigma_dot(vi, vi, sigma);
  for (std::size_t c = 0; c < k; ++c) accel[c] -= kinetic * qi[c];
}

void full_rhs_flat(std::span<const double> y, std::span<const double> masses,
                   CurvatureSign sigma, std::size_t k, std::span<double> dydt) {
  const std::size_t n = masses.size();
  if (y.size() != 2 * n * k || dydt.size() != y.size()) {
    throw DimensionError("full_rhs: wrong flat length");
  }
  const auto pos = y.first(n * k);
  const auto vel = y.subspan(n * k);
  std::copy(vel.begin(), vel.end(), dydt.begin());
  for (std::size_t i = 0; i < n; ++i) {
    body_acceleration(i, pos, vel, masses, sigma, k, dydt.subspan((n + i) * k, k));
  }
}

std::vector<AmbientVector> full_rhs(const FullState& state) {
  const std::size_t n = state.n();
  const std::size_t k = state.k();
  const std::vector<double> y = pack_full(state);
  std::vector<double> dydt(y.size());
  full_rhs_flat(y, state.masses, state.sigma, k, dydt);
  std::vector<AmbientVector> acc;
  acc.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    acc.emplace_back(std::span<const double>(dydt).subspan((n + i) * k, k));
  }
  return acc;
}

// ---------------------------------------------------------------------------

std::vector<double> pack_reduced(const ReducedState& s) {
  std::vector<double> y{s.rho, s.rho_dot, s.theta, s.theta_dot};
  y.insert(y.end(), s.z.coords().begin(), s.z.coords().end());
  y.insert(y.end(), s.z_dot.coords().begin(), s.z_dot.coords().end());
  return y;
}

ReducedState unpack_reduced(std::span<const double> y, int k) {
  const std::size_t zdim = static_cast<std::size_t>(k - 2);
  if (k < 2 || y.size() != 4 + 2 * zdim) throw DimensionError("unpack_reduced: wrong length");
  ReducedState s;
  s.rho = y[0];
  s.rho_dot = y[1];
  s.theta = y[2];
  s.theta_dot = y[3];
  s.z = AmbientVector(y.subspan(4, zdim));
  s.z_dot = AmbientVector(y.subspan(4 + zdim, zdim));
  return s;
}

void reduced_rhs_flat(std::span<const double> y, const PolygonConfig& config,
                      std::span<double> dydt, const ReducedOptions& options) {
  const std::size_t zdim = static_cast<std::size_t>(config.k() - 2);
  if (y.size() != 4 + 2 * zdim || dydt.size() != y.size()) {
    throw DimensionError("reduced_rhs: wrong flat length");
  }
  const CurvatureSign sigma = config.sigma();
  const double s = sigma.as_double();
  const double rho = y[0];
  const double rho_dot = y[1];
  const double theta_dot = y[3];
  const auto z = y.subspan(4, zdim);
  const auto z_dot = y.subspan(4 + zdim, zdim);
  require_size(rho);

  double b = 0.0;
  if (options.strict_b) {
    const CriterionTerms terms = criterion_terms(config, rho);
    const auto [lo, hi] = std::minmax_element(terms.b.begin(), terms.b.end());
    if ((*hi - *lo) > options.strict_b_tol * *hi) {
      throw CriterionError("b_i spread " + std::to_string((*hi - *lo) / *hi) + " at rho = " +
                           std::to_string(rho));
    }
    b = terms.b[0];
  } else {
    b = criterion_b(config, rho, 0);
  }

  const double zz = sigma_dot(z_dot, z_dot, sigma);
  const double rho2 = rho * rho;
  const double th2 = theta_dot * theta_dot;
  const double kinetic = rho_dot * rho_dot + rho2 * th2 + zz;

  dydt[0] = rho_dot;
  dydt[1] = rho * th2 - s * rho * kinetic + (s - 1.0 / rho2) * b;
  dydt[2] = theta_dot;
  dydt[3] = -2.0 * rho_dot * theta_dot / rho;
  const double zcoef = s * b / rho - s * kinetic;
  for (std::size_t c = 0; c < zdim; ++c) {
    dydt[4 + c] = z_dot[c];
    dydt[4 + zdim + c] = zcoef * z[c];
  }
}

ReducedState reduced_rhs(const ReducedState& state, const PolygonConfig& config,
                         const ReducedOptions& options) {
  const std::vector<double> y = pack_reduced(state);
  std::vector<double> dydt(y.size());
  reduced_rhs_flat(y, config, dydt, options);
  return unpack_reduced(dydt, config.k());
}

double relative_equilibrium_theta_dot(const PolygonConfig& config, double rho) {
  const double b = criterion_b(config, rho, 0);
  return std::sqrt(b / (rho * rho * rho));
}

}  // namespace curvebody
