#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "curvebody/geometry.hpp"
#include "curvebody/model.hpp"

namespace curvebody {

/// q_i (.) q_j for two ansatz bodies at angular separation delta: sigma - rho^2 (1 - cos delta).
double pair_inner(double rho, double delta, CurvatureSign sigma);

/// Per-body criterion sums at one rho.
struct CriterionTerms {
  std::vector<double> b;
  std::vector<double> c;
  double rho = 0.0;
};

/// b_i = sum_j m_j w^{-1/2} (2 - sigma rho^2 w)^{-3/2},
/// c_i = sum_j m_j sin(d) w^{-3/2} (2 - sigma rho^2 w)^{-3/2}, with d = beta_i - beta_j,
/// w = 1 - cos d. Summation runs over j in increasing order.
///
/// Throws SingularityError (nonpositive_size / antipodal) or CollisionError instead of
/// producing non-finite values.
CriterionTerms criterion_terms(const PolygonConfig& config, double rho);

/// b_i alone; O(n).
double criterion_b(const PolygonConfig& config, double rho, std::size_t i);

// ---------------------------------------------------------------------------
// Full equations of motion on q (.) q = sigma.
//
// Flat layout: positions body-major, then velocities body-major, 2 n k entries.
// The force denominator is D_ij = sigma (1 - (q_i (.) q_j)^2), which must be positive.

std::vector<double> pack_full(const FullState& s);
FullState unpack_full(std::span<const double> y, std::span<const double> masses,
                      CurvatureSign sigma, std::size_t k);

/// Acceleration of body i written into accel (length k). Shared by the serial and
/// parallel drivers so both produce bit-identical results.
void body_acceleration(std::size_t i, std::span<const double> positions,
                       std::span<const double> velocities, std::span<const double> masses,
                       CurvatureSign sigma, std::size_t k, std::span<double> accel);

/// Serial reference: dydt = (velocities, accelerations) for the flat state y.
void full_rhs_flat(std::span<const double> y, std::span<const double> masses,
                   CurvatureSign sigma, std::size_t k, std::span<double> dydt);

/// Accelerations qddot_i for a full state.
std::vector<AmbientVector> full_rhs(const FullState& state);

// ---------------------------------------------------------------------------
// Reduced (rho, theta, Z) system.
//
// Flat layout: (rho, rho_dot, theta, theta_dot, Z..., Zdot...), 4 + 2 (k - 2) entries.

std::vector<double> pack_reduced(const ReducedState& s);
ReducedState unpack_reduced(std::span<const double> y, int k);

struct ReducedOptions {
  /// Recompute every b_i each call and throw CriterionError if their relative spread
  /// exceeds strict_b_tol. Otherwise b_1 is used.
  bool strict_b = false;
  double strict_b_tol = 1e-10;
};

/// Time derivative of the packed reduced state:
///   rho''   = rho th'^2 - s rho rho'^2 - s rho^3 th'^2 - s rho Z'(.)Z' + (s - 1/rho^2) b
///   theta'' = -2 rho' th' / rho
///   Z''     = ((s/rho) b - s rho'^2 - s rho^2 th'^2 - s Z'(.)Z') Z
void reduced_rhs_flat(std::span<const double> y, const PolygonConfig& config,
                      std::span<double> dydt, const ReducedOptions& options = {});

ReducedState reduced_rhs(const ReducedState& state, const PolygonConfig& config,
                         const ReducedOptions& options = {});

/// theta_dot with theta_dot^2 = b(rho) / rho^3, the rigidly rotating fixed point.
double relative_equilibrium_theta_dot(const PolygonConfig& config, double rho);

}  // namespace curvebody
