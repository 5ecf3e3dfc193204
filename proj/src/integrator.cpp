#include "curvebody/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvebody/errors.hpp"

namespace curvebody {

const char* to_string(TerminationKind kind) {
  switch (kind) {
    case TerminationKind::completed: return "completed";
    case TerminationKind::singularity: return "singularity";
    case TerminationKind::step_collapse: return "step-collapse";
  }
  return "unknown";
}

void IntegrationSettings::validate() const {
  const bool positive = rel_tol > 0 && abs_tol > 0 && max_step > 0 && min_step > 0 &&
                        sample_interval > 0;
  if (!positive) throw ValidationError("integration settings must all be positive");
  if (!(min_step < max_step)) throw ValidationError("min_step must be below max_step");
}

namespace {

void check_span(std::pair<double, double> t_span) {
  if (!(t_span.second > t_span.first) || !std::isfinite(t_span.first) ||
      !std::isfinite(t_span.second)) {
    throw ValidationError("t_span must be finite and increasing");
  }
}

// Sample instants t0 + j * dt; the last one is t1 itself.
class SampleClock {
 public:
  SampleClock(double t0, double t1, double dt) : t0_(t0), t1_(t1), dt_(dt) {}
  double next() const {
    const double s = t0_ + static_cast<double>(j_) * dt_;
    return s > t1_ - 1e-9 * dt_ ? t1_ : s;
  }
  bool done() const { return finished_; }
  void advance() {
    if (next() == t1_) finished_ = true;
    ++j_;
  }

 private:
  double t0_, t1_, dt_;
  long j_ = 1;
  bool finished_ = false;
};

void finish_singular(Trajectory& traj, TerminationKind kind, double t,
                     const std::vector<double>& y, std::string what) {
  if (traj.times.empty() || traj.times.back() < t) {
    traj.times.push_back(t);
    traj.samples.push_back(y);
  }
  traj.termination = {kind, t, std::move(what)};
}

}  // namespace

Trajectory integrate_fixed_rk4(const Rhs& rhs, std::vector<double> y0,
                               std::pair<double, double> t_span, double step,
                               double sample_interval) {
  check_span(t_span);
  if (!(step > 0) || !(sample_interval > 0)) {
    throw ValidationError("step and sample_interval must be positive");
  }
  const auto [t0, t1] = t_span;
  const std::size_t dim = y0.size();
  Trajectory traj;
  traj.times.push_back(t0);
  traj.samples.push_back(y0);

  std::vector<double> y = std::move(y0), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim),
                      ynew(dim);
  SampleClock clock(t0, t1, sample_interval);
  double t = t0;
  long steps = 0;
  while (!clock.done()) {
    const double t_next = std::min(t0 + static_cast<double>(steps + 1) * step, t1);
    const double h = t_next - t;
    try {
      rhs(t, y, k1);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      rhs(t + 0.5 * h, tmp, k2);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      rhs(t + 0.5 * h, tmp, k3);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
      rhs(t + h, tmp, k4);
    } catch (const SingularityError& e) {
      finish_singular(traj, TerminationKind::singularity, t, y, e.what());
      return traj;
    }
    for (std::size_t i = 0; i < dim; ++i) {
      ynew[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    while (!clock.done() && clock.next() <= t_next) {
      const double s = clock.next();
      if (s == t_next) {
        traj.samples.push_back(ynew);
      } else {
        const double w = (s - t) / h;
        std::vector<double> sample(dim);
        for (std::size_t i = 0; i < dim; ++i) sample[i] = y[i] + w * (ynew[i] - y[i]);
        traj.samples.push_back(std::move(sample));
      }
      traj.times.push_back(s);
      clock.advance();
    }
    std::swap(y, ynew);
    t = t_next;
    ++steps;
  }
  traj.termination = {TerminationKind::completed, t1, ""};
  return traj;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;

struct Workspace {
  explicit Workspace(std::size_t n)
      : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n) {}
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
};

double scaled_error(const std::vector<double>& y, const Workspace& w, double h,
                    const IntegrationSettings& s) {
  double err = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = h * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] +
                          e6 * w.k6[i] + e7 * w.k7[i]);
    const double scale = s.abs_tol + s.rel_tol * std::max(std::abs(y[i]), std::abs(w.ynew[i]));
    err = std::max(err, std::abs(e) / scale);
  }
  return err;
}

// Stages 2..7; k1 holds f(t, y) on entry, k7 holds f(t + h, ynew) on exit.
void dp_stages(const Rhs& rhs, double t, double h, const std::vector<double>& y, Workspace& w,
               long& evals) {
  const std::size_t n = y.size();
  auto& tmp = w.tmp;
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * w.k1[i];
  rhs(t + c2 * h, tmp, w.k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * w.k1[i] + a32 * w.k2[i]);
  rhs(t + c3 * h, tmp, w.k3);
  for (std::size_t i = 0; i < n; ++i) {
    tmp[i] = y[i] + h * (a41 * w.k1[i] + a42 * w.k2[i] + a43 * w.k3[i]);
  }
  rhs(t + c4 * h, tmp, w.k4);
  for (std::size_t i = 0; i < n; ++i) {
    tmp[i] = y[i] + h * (a51 * w.k1[i] + a52 * w.k2[i] + a53 * w.k3[i] + a54 * w.k4[i]);
  }
  rhs(t + c5 * h, tmp, w.k5);
  for (std::size_t i = 0; i < n; ++i) {
    tmp[i] = y[i] + h * (a61 * w.k1[i] + a62 * w.k2[i] + a63 * w.k3[i] + a64 * w.k4[i] +
                         a65 * w.k5[i]);
  }
  rhs(t + h, tmp, w.k6);
  for (std::size_t i = 0; i < n; ++i) {
    w.ynew[i] = y[i] + h * (a71 * w.k1[i] + a73 * w.k3[i] + a74 * w.k4[i] + a75 * w.k5[i] +
                            a76 * w.k6[i]);
  }
  rhs(t + h, w.ynew, w.k7);
  evals += 6;
}

double initial_step(const Rhs& rhs, double t, const std::vector<double>& y, Workspace& w,
                    const IntegrationSettings& s, long& evals) {
  const std::size_t n = y.size();
  auto norm = [&](const std::vector<double>& v) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = s.abs_tol + s.rel_tol * std::abs(y[i]);
      sum += (v[i] / sc) * (v[i] / sc);
    }
    return n ? std::sqrt(sum / static_cast<double>(n)) : 0.0;
  };
  const double d0 = norm(y);
  const double d1 = norm(w.k1);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, s.max_step);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h0 * w.k1[i];
  try {
    rhs(t + h0, w.tmp, w.k2);
    ++evals;
  } catch (const SingularityError&) {
    return std::max(h0 * 0.5, s.min_step);
  }
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = w.k2[i] - w.k1[i];
  const double d2 = norm(w.tmp) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 =
      dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::clamp(std::min(100.0 * h0, h1), s.min_step, s.max_step);
}

}  // namespace

Trajectory integrate_adaptive(const Rhs& rhs, std::vector<double> y0,
                              std::pair<double, double> t_span,
                              const IntegrationSettings& settings,
                              const StepProjection& projection, AdaptiveStats* stats) {
  check_span(t_span);
  settings.validate();
  const auto [t0, t1] = t_span;
  AdaptiveStats local;
  AdaptiveStats& st = stats ? *stats : local;

  Trajectory traj;
  traj.times.push_back(t0);
  traj.samples.push_back(y0);

  std::vector<double> y = std::move(y0);
  Workspace w(y.size());
  try {
    rhs(t0, y, w.k1);
    ++st.rhs_evals;
  } catch (const SingularityError& e) {
    traj.termination = {TerminationKind::singularity, t0, e.what()};
    return traj;
  }

  SampleClock clock(t0, t1, settings.sample_interval);
  double t = t0;
  double h = initial_step(rhs, t, y, w, settings, st.rhs_evals);

  while (!clock.done()) {
    const double target = clock.next();
    const double remaining = target - t;
    const bool clipped = h >= remaining;
    const double h_try = clipped ? remaining : h;

    try {
      dp_stages(rhs, t, h_try, y, w, st.rhs_evals);
    } catch (const SingularityError& e) {
      ++st.rejected;
      h = 0.5 * h_try;
      if (h < settings.min_step) {
        finish_singular(traj, TerminationKind::singularity, t, y, e.what());
        return traj;
      }
      continue;
    }

    const double err = scaled_error(y, w, h_try, settings);
    if (!(err <= 1.0)) {
      ++st.rejected;
      const double fac = std::isfinite(err) ? std::max(kFacMin, kSafety * std::pow(err, -0.2))
                                            : kFacMin;
      h = h_try * std::min(1.0, fac);
      if (h < settings.min_step) {
        finish_singular(traj, TerminationKind::step_collapse, t, y,
                        "step size fell below min_step");
        return traj;
      }
      continue;
    }

    ++st.accepted;
    t = clipped ? target : t + h_try;
    std::swap(y, w.ynew);
    std::swap(w.k1, w.k7);
    if (projection) {
      projection(y);
      try {
        rhs(t, y, w.k1);
        ++st.rhs_evals;
      } catch (const SingularityError& e) {
        finish_singular(traj, TerminationKind::singularity, t, y, e.what());
        return traj;
      }
    }

    const double fac = err == 0.0 ? kFacMax
                                  : std::clamp(kSafety * std::pow(err, -0.2), kFacMin, kFacMax);
    const double h_next = h_try * fac;
    h = std::min(clipped ? std::max(h, h_next) : h_next, settings.max_step);

    if (clipped) {
      traj.times.push_back(t);
      traj.samples.push_back(y);
      clock.advance();
    }
  }
  traj.termination = {TerminationKind::completed, t1, ""};
  return traj;
}

}  // namespace curvebody
