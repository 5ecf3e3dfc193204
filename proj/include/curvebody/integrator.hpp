#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace curvebody {

/// dydt = f(t, y). May throw SingularityError, which ends the trajectory.
using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Optional in-place state correction applied after every accepted step.
using StepProjection = std::function<void(std::span<double> y)>;

enum class TerminationKind { completed, singularity, step_collapse };

struct Termination {
  TerminationKind kind = TerminationKind::completed;
  /// Time of the last good state.
  double time = 0.0;
  std::string description;
};

const char* to_string(TerminationKind kind);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> samples;
  Termination termination;

  bool completed() const noexcept { return termination.kind == TerminationKind::completed; }
};

struct IntegrationSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.1;
  double min_step = 1e-12;
  double sample_interval = 0.01;

  /// Throws ValidationError unless all positive and min_step < max_step.
  void validate() const;
};

/// Classical RK4 with a fixed step. Samples at t0 + j * sample_interval are linearly
/// interpolated between step nodes; the final time is always sampled.
Trajectory integrate_fixed_rk4(const Rhs& rhs, std::vector<double> y0,
                               std::pair<double, double> t_span, double step,
                               double sample_interval);

struct AdaptiveStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

/// Dormand-Prince 5(4) with proportional step control on
/// max_i |e_i| / (abs_tol + rel_tol max(|y_i|, |y_i_new|)).
///
/// Steps are shortened to land on every sample instant, so samples are integrator nodes.
/// A singular rhs evaluation halves the step; once the step would drop below min_step the
/// run ends with a singularity (rhs failure) or step-collapse (error control) record.
Trajectory integrate_adaptive(const Rhs& rhs, std::vector<double> y0,
                              std::pair<double, double> t_span,
                              const IntegrationSettings& settings,
                              const StepProjection& projection = {},
                              AdaptiveStats* stats = nullptr);

}  // namespace curvebody
