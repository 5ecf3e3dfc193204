#pragma once

#include <optional>
#include <vector>

#include "curvebody/geometry.hpp"

namespace curvebody {

/// n bodies with fixed planar angles beta_i on the rotating circle, in R^k.
///
/// Construction validates: n >= 2, k >= 2, all masses positive and finite,
/// and 1 - cos(beta_i - beta_j) > 0 for every pair (no coincident bodies).
class PolygonConfig {
 public:
  PolygonConfig(std::vector<double> masses, std::vector<double> beta, CurvatureSign sigma,
                int k);

  std::size_t n() const noexcept { return masses_.size(); }
  const std::vector<double>& masses() const noexcept { return masses_; }
  const std::vector<double>& beta() const noexcept { return beta_; }
  CurvatureSign sigma() const noexcept { return sigma_; }
  int k() const noexcept { return k_; }
  double total_mass() const noexcept;
  /// Unit planar vector Q_i = (cos beta_i, sin beta_i).
  AmbientVector unit_vector(std::size_t i) const;

 private:
  std::vector<double> masses_;
  std::vector<double> beta_;
  CurvatureSign sigma_;
  int k_;
};

/// beta_i = phase + 2 pi i / n.
PolygonConfig regular_polygon(int n, double phase, std::vector<double> masses,
                              CurvatureSign sigma, int k);

/// Ansatz coordinates: size rho, rotation angle theta and the out-of-plane part Z in R^{k-2}.
struct ReducedState {
  double rho = 1.0;
  double rho_dot = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
  AmbientVector z;
  AmbientVector z_dot;
};

/// Constraint residuals of a reduced state: rho^2 + Z(.)Z - sigma and rho rho_dot + Z(.)Zdot.
struct ReducedConstraint {
  double position = 0.0;
  double velocity = 0.0;
};
ReducedConstraint reduced_constraint(const ReducedState& s, CurvatureSign sigma);

/// Throws ValidationError when the reduced state is malformed or off-constraint beyond tol.
void validate_reduced(const ReducedState& s, const PolygonConfig& config,
                      double tol = kDefaultManifoldTol);

struct FullState {
  std::vector<AmbientVector> positions;
  std::vector<AmbientVector> velocities;
  std::vector<double> masses;
  CurvatureSign sigma = CurvatureSign::positive();

  std::size_t n() const noexcept { return positions.size(); }
  std::size_t k() const noexcept { return positions.empty() ? 0 : positions.front().size(); }
};

/// Max over bodies of |q_i (.) q_i - sigma| and |q_i (.) qdot_i|.
struct FullConstraint {
  double position = 0.0;
  double tangency = 0.0;
};
FullConstraint full_constraint(const FullState& s);

struct SynthesisOptions {
  /// Sign of the scale applied to the Z direction (upper sheet / northern hemisphere by default).
  int z_sign = 1;
  /// Direction of Z in R^{k-2}; the last ambient axis when empty.
  std::optional<AmbientVector> z_direction;
};

/// Initial reduced state with theta(0) = 0 solving rho^2 + Z(.)Z = sigma and its time derivative.
ReducedState synthesize_initial(const PolygonConfig& config, double rho0, double rho_dot0,
                                double theta_dot0, const SynthesisOptions& options = {});

/// q_i = (rho T(theta) Q_i ; Z), qdot_i = (rho_dot T Q_i + rho theta_dot T J Q_i ; Zdot).
FullState embed(const ReducedState& state, const PolygonConfig& config,
                double tol = kDefaultManifoldTol);

}  // namespace curvebody
