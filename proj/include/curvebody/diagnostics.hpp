#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curvebody/integrator.hpp"
#include "curvebody/model.hpp"

namespace curvebody {

// ---------------------------------------------------------------------------
// Criterion verdicts

inline constexpr double kDefaultCriterionTol = 1e-10;

/// 5 log-spaced points: (0.1, 0.95) on the sphere, (0.1, 3) on the hyperboloid.
std::vector<double> default_rho_grid(CurvatureSign sigma, int points = 5);

struct CriterionPoint {
  double rho = 0.0;
  bool evaluated = false;
  /// max_{i,j} |b_i - b_j| and the same divided by max_i |b_i|.
  double b_spread_abs = 0.0;
  double b_spread_rel = 0.0;
  double c_max = 0.0;
  /// Index (0-based) of the body with the largest deviation, when this point fails.
  std::size_t worst_index = 0;
  std::string error;
};

struct CriterionReport {
  std::vector<CriterionPoint> points;
  double tol_b = kDefaultCriterionTol;
  double tol_c = kDefaultCriterionTol;
  bool admissible = false;
  /// Set when inadmissible: first failing grid rho and body index.
  std::optional<double> failing_rho;
  std::optional<std::size_t> failing_index;
  std::vector<std::string> warnings;

  double max_b_spread_rel() const;
  double max_b_spread_abs() const;
  double max_c() const;
};

/// Evaluates the criterion sums on each grid point. Singular points are reported and
/// excluded from the verdict with a warning; a grid with no evaluable point is inadmissible.
CriterionReport criterion_report(const PolygonConfig& config, const std::vector<double>& rho_grid,
                                 double tol_b = kDefaultCriterionTol,
                                 double tol_c = kDefaultCriterionTol);

/// Largest deviation of the sorted cyclic gaps (mod 2 pi) from 2 pi / n.
double regularity_defect(const std::vector<double>& beta);

bool is_regular_polygon(const std::vector<double>& beta, double tol);

// ---------------------------------------------------------------------------
// Conservation monitoring

enum class RunKind { reduced, full };

struct ConservationSeries {
  std::vector<double> times;
  /// rho^2 theta_dot (reduced runs).
  std::vector<double> angular_momentum;
  /// C_12 wedge component (full runs).
  std::vector<double> wedge_c12;
  /// |rho^2 + Z(.)Z - sigma| (reduced) or max_i |q_i(.)q_i - sigma| (full).
  std::vector<double> constraint_drift;
  /// max_i |q_i (.) qdot_i| (full runs).
  std::vector<double> tangency_drift;
  /// rho per sample (reduced runs).
  std::vector<double> rho;

  /// max_t |x(t) - x(0)| / |x(0)| for a conserved series (absolute if x(0) == 0).
  static double relative_drift(const std::vector<double>& series);
};

ConservationSeries conservation_series(const Trajectory& trajectory, RunKind kind,
                                       const PolygonConfig& config);

// ---------------------------------------------------------------------------
// Full-versus-reduced cross-validation

struct CrossValidationOptions {
  /// Run even when the criterion rejects the config.
  bool force = false;
  std::vector<double> rho_grid;  // default_rho_grid when empty
  double tol_b = kDefaultCriterionTol;
  double tol_c = kDefaultCriterionTol;
};

struct CrossValidationReport {
  double max_position_deviation = 0.0;
  double max_velocity_deviation = 0.0;
  /// max over interior samples of |central-difference qddot - full_rhs| (sup norm).
  double residual_max = 0.0;
  std::size_t compared_samples = 0;
  Termination reduced_termination;
  Termination full_termination;
  bool off_criterion = false;
  Trajectory reduced;
  Trajectory full;
};

/// Integrates the reduced system and the full system from embed(initial) with the same
/// settings and compares the embedded reduced samples against the full ones.
/// Throws ValidationError when the criterion rejects the config and force is off.
CrossValidationReport cross_validate(const PolygonConfig& config, const ReducedState& initial,
                                     std::pair<double, double> t_span,
                                     const IntegrationSettings& settings,
                                     const CrossValidationOptions& options = {});

}  // namespace curvebody
