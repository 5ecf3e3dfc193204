#include "curvebody/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "curvebody/errors.hpp"

namespace curvebody {

PolygonConfig::PolygonConfig(std::vector<double> masses, std::vector<double> beta,
                             CurvatureSign sigma, int k)
    : masses_(std::move(masses)), beta_(std::move(beta)), sigma_(sigma), k_(k) {
  if (masses_.size() < 2) throw ValidationError("need at least two bodies");
  if (beta_.size() != masses_.size()) {
    throw DimensionError("masses and beta differ in length");
  }
  if (k_ < 2) throw ValidationError("ambient dimension k must be >= 2");
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (!(masses_[i] > 0.0) || !std::isfinite(masses_[i])) {
      throw ValidationError("mass " + std::to_string(i + 1) + " must be positive and finite");
    }
    if (!std::isfinite(beta_[i])) {
      throw ValidationError("angle " + std::to_string(i + 1) + " is not finite");
    }
  }
  for (std::size_t i = 0; i < beta_.size(); ++i) {
    for (std::size_t j = i + 1; j < beta_.size(); ++j) {
      // angles that agree modulo 2 pi only up to rounding still coincide
      const double d = beta_[i] - beta_[j];
      const double half = std::sin(0.5 * d);
      const double eps = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(d));
      if (!(std::abs(half) > eps)) {
        throw CollisionError("bodies " + std::to_string(i + 1) + " and " +
                             std::to_string(j + 1) + " share an angle");
      }
    }
  }
}

double PolygonConfig::total_mass() const noexcept {
  double sum = 0.0;
  for (double m : masses_) sum += m;
  return sum;
}

AmbientVector PolygonConfig::unit_vector(std::size_t i) const {
  return AmbientVector{std::cos(beta_[i]), std::sin(beta_[i])};
}

PolygonConfig regular_polygon(int n, double phase, std::vector<double> masses,
                              CurvatureSign sigma, int k) {
  if (n < 2) throw ValidationError("regular polygon needs n >= 2");
  if (masses.size() != static_cast<std::size_t>(n)) {
    throw DimensionError("regular polygon: expected " + std::to_string(n) + " masses");
  }
  std::vector<double> beta(n);
  for (int i = 0; i < n; ++i) beta[i] = phase + 2.0 * std::numbers::pi * i / n;
  return PolygonConfig(std::move(masses), std::move(beta), sigma, k);
}

ReducedConstraint reduced_constraint(const ReducedState& s, CurvatureSign sigma) {
  return {s.rho * s.rho + sigma_dot(s.z, s.z, sigma) - sigma.as_double(),
          s.rho * s.rho_dot + sigma_dot(s.z, s.z_dot, sigma)};
}

void validate_reduced(const ReducedState& s, const PolygonConfig& config, double tol) {
  const std::size_t zdim = static_cast<std::size_t>(config.k() - 2);
  if (s.z.size() != zdim || s.z_dot.size() != zdim) {
    throw DimensionError("reduced state: Z must have length k - 2 = " + std::to_string(zdim));
  }
  if (!(s.rho > 0.0) || !std::isfinite(s.rho)) {
    throw ValidationError("reduced state: rho must be positive and finite");
  }
  if (config.sigma() == CurvatureSign::positive() && s.rho > 1.0 + tol) {
    throw InfeasibleError("reduced state: rho > 1 on the sphere");
  }
  const auto r = reduced_constraint(s, config.sigma());
  if (!(std::abs(r.position) <= tol)) {
    throw ValidationError("reduced state: rho^2 + Z(.)Z - sigma = " + std::to_string(r.position));
  }
  const double vscale = std::max(1.0, std::abs(s.rho * s.rho_dot));
  if (!(std::abs(r.velocity) <= tol * vscale)) {
    throw ValidationError("reduced state: rho rho_dot + Z(.)Zdot = " +
                          std::to_string(r.velocity));
  }
}

FullConstraint full_constraint(const FullState& s) {
  FullConstraint out;
  for (std::size_t i = 0; i < s.n(); ++i) {
    out.position = std::max(out.position, std::abs(sigma_dot(s.positions[i], s.positions[i],
                                                             s.sigma) -
                                                   s.sigma.as_double()));
    out.tangency =
        std::max(out.tangency, std::abs(sigma_dot(s.positions[i], s.velocities[i], s.sigma)));
  }
  return out;
}

ReducedState synthesize_initial(const PolygonConfig& config, double rho0, double rho_dot0,
                                double theta_dot0, const SynthesisOptions& options) {
  const CurvatureSign sigma = config.sigma();
  const double s = sigma.as_double();
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) {
    throw ValidationError("rho0 must be positive and finite");
  }
  if (!std::isfinite(rho_dot0) || !std::isfinite(theta_dot0)) {
    throw ValidationError("initial rates must be finite");
  }
  if (options.z_sign != 1 && options.z_sign != -1) {
    throw ValidationError("z_sign must be +1 or -1");
  }

  ReducedState out;
  out.rho = rho0;
  out.rho_dot = rho_dot0;
  out.theta = 0.0;
  out.theta_dot = theta_dot0;

  if (config.k() == 2) {
    if (sigma == CurvatureSign::negative()) {
      throw InfeasibleError("k = 2 has no hyperbolic ansatz (rho^2 = -1)");
    }
    if (std::abs(rho0 - 1.0) > kDefaultManifoldTol) {
      throw InfeasibleError("k = 2 on the sphere pins rho to 1");
    }
    if (rho_dot0 != 0.0) {
      throw InfeasibleError("k = 2 on the sphere requires rho_dot0 = 0");
    }
    out.rho = 1.0;
    return out;
  }

  const std::size_t zdim = static_cast<std::size_t>(config.k() - 2);
  AmbientVector dir(zdim);
  if (options.z_direction) {
    if (options.z_direction->size() != zdim) {
      throw DimensionError("z_direction must have length k - 2");
    }
    dir = *options.z_direction;
  } else {
    dir[zdim - 1] = 1.0;
  }
  const double dd = sigma_dot(dir, dir, sigma);
  const double target = s - rho0 * rho0;  // scale^2 * dd
  if (sigma == CurvatureSign::positive() && rho0 > 1.0) {
    throw InfeasibleError("rho0 > 1 is off the unit sphere");
  }
  double scale = 0.0;
  if (target != 0.0) {
    if (dd == 0.0 || target / dd < 0.0) {
      throw InfeasibleError("z_direction cannot satisfy rho^2 + Z(.)Z = sigma");
    }
    scale = options.z_sign * std::sqrt(target / dd);
  }
  double scale_dot = 0.0;
  if (rho_dot0 != 0.0) {
    if (scale == 0.0) {
      throw InfeasibleError("rho0 = 1 on the sphere leaves no room for rho_dot0 != 0");
    }
    scale_dot = -rho0 * rho_dot0 / (scale * dd);
  }
  out.z = AmbientVector(zdim);
  out.z_dot = AmbientVector(zdim);
  for (std::size_t c = 0; c < zdim; ++c) {
    out.z[c] = scale * dir[c];
    out.z_dot[c] = scale_dot * dir[c];
  }
  return out;
}

FullState embed(const ReducedState& state, const PolygonConfig& config, double tol) {
  validate_reduced(state, config, tol);
  const std::size_t n = config.n();
  const std::size_t k = static_cast<std::size_t>(config.k());
  FullState out;
  out.masses = config.masses();
  out.sigma = config.sigma();
  out.positions.reserve(n);
  out.velocities.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const AmbientVector tq = rotate(state.theta, config.unit_vector(i));
    const AmbientVector jtq = rotation_generator_apply(tq);  // T J Q = J T Q
    AmbientVector q(k), v(k);
    for (std::size_t c = 0; c < 2; ++c) {
      q[c] = state.rho * tq[c];
      v[c] = state.rho_dot * tq[c] + state.rho * state.theta_dot * jtq[c];
    }
    for (std::size_t c = 2; c < k; ++c) {
      q[c] = state.z[c - 2];
      v[c] = state.z_dot[c - 2];
    }
    out.positions.push_back(std::move(q));
    out.velocities.push_back(std::move(v));
  }
  return out;
}

}  // namespace curvebody
