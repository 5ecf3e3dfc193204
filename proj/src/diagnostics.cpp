#include "curvebody/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "curvebody/dynamics.hpp"
#include "curvebody/errors.hpp"
#include "curvebody/systems.hpp"

namespace curvebody {

std::vector<double> default_rho_grid(CurvatureSign sigma, int points) {
  if (points < 2) throw ValidationError("rho grid needs at least two points");
  const double lo = 0.1;
  const double hi = sigma == CurvatureSign::positive() ? 0.95 : 3.0;
  std::vector<double> grid(points);
  for (int j = 0; j < points; ++j) {
    grid[j] = lo * std::pow(hi / lo, static_cast<double>(j) / (points - 1));
  }
  return grid;
}

double CriterionReport::max_b_spread_rel() const {
  double m = 0.0;
  for (const auto& p : points) {
    if (p.evaluated) m = std::max(m, p.b_spread_rel);
  }
  return m;
}

double CriterionReport::max_b_spread_abs() const {
  double m = 0.0;
  for (const auto& p : points) {
    if (p.evaluated) m = std::max(m, p.b_spread_abs);
  }
  return m;
}

double CriterionReport::max_c() const {
  double m = 0.0;
  for (const auto& p : points) {
    if (p.evaluated) m = std::max(m, p.c_max);
  }
  return m;
}

namespace {

CriterionPoint evaluate_point(const PolygonConfig& config, double rho, double tol_b,
                              double tol_c) {
  CriterionPoint p;
  p.rho = rho;
  CriterionTerms terms;
  try {
    terms = criterion_terms(config, rho);
  } catch (const Error& e) {
    p.error = e.what();
    return p;
  }
  p.evaluated = true;
  const auto [lo, hi] = std::minmax_element(terms.b.begin(), terms.b.end());
  p.b_spread_abs = *hi - *lo;
  p.b_spread_rel = p.b_spread_abs / *hi;  // b_i > 0
  std::size_t worst_c = 0;
  for (std::size_t i = 0; i < terms.c.size(); ++i) {
    if (std::abs(terms.c[i]) > p.c_max) {
      p.c_max = std::abs(terms.c[i]);
      worst_c = i;
    }
  }
  if (p.b_spread_rel > tol_b) {
    std::vector<double> sorted = terms.b;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    double worst = -1.0;
    for (std::size_t i = 0; i < terms.b.size(); ++i) {
      if (std::abs(terms.b[i] - median) > worst) {
        worst = std::abs(terms.b[i] - median);
        p.worst_index = i;
      }
    }
  } else if (p.c_max > tol_c) {
    p.worst_index = worst_c;
  }
  return p;
}

}  // namespace

CriterionReport criterion_report(const PolygonConfig& config, const std::vector<double>& rho_grid,
                                 double tol_b, double tol_c) {
  CriterionReport report;
  report.tol_b = tol_b;
  report.tol_c = tol_c;
  bool any = false;
  bool ok = true;
  for (double rho : rho_grid) {
    CriterionPoint p = evaluate_point(config, rho, tol_b, tol_c);
    if (!p.evaluated) {
      report.warnings.push_back("rho = " + std::to_string(rho) + " skipped: " + p.error);
    } else {
      any = true;
      const bool pass = p.b_spread_rel <= tol_b && p.c_max <= tol_c;
      if (!pass && ok) {
        ok = false;
        report.failing_rho = p.rho;
        report.failing_index = p.worst_index;
      }
    }
    report.points.push_back(std::move(p));
  }
  if (!any) report.warnings.push_back("no grid point could be evaluated");
  report.admissible = any && ok;
  return report;
}

double regularity_defect(const std::vector<double>& beta) {
  const std::size_t n = beta.size();
  if (n < 2) throw ValidationError("regularity check needs at least two angles");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::fmod(beta[i], two_pi);
    if (x < 0.0) x += two_pi;
    a[i] = x;
  }
  std::sort(a.begin(), a.end());
  const double gap = two_pi / static_cast<double>(n);
  double defect = std::abs(a.front() + two_pi - a.back() - gap);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    defect = std::max(defect, std::abs(a[i + 1] - a[i] - gap));
  }
  return defect;
}

bool is_regular_polygon(const std::vector<double>& beta, double tol) {
  return regularity_defect(beta) <= tol;
}

// ---------------------------------------------------------------------------

double ConservationSeries::relative_drift(const std::vector<double>& series) {
  if (series.empty()) return 0.0;
  const double ref = series.front();
  const double scale = ref != 0.0 ? std::abs(ref) : 1.0;
  double m = 0.0;
  for (double x : series) m = std::max(m, std::abs(x - ref) / scale);
  return m;
}

ConservationSeries conservation_series(const Trajectory& trajectory, RunKind kind,
                                       const PolygonConfig& config) {
  ConservationSeries out;
  out.times = trajectory.times;
  const CurvatureSign sigma = config.sigma();
  const std::size_t k = static_cast<std::size_t>(config.k());
  for (const auto& y : trajectory.samples) {
    if (kind == RunKind::reduced) {
      if (y.size() != 4 + 2 * (k - 2)) {
        throw ValidationError("trajectory sample does not decode as a reduced state");
      }
      const ReducedState s = unpack_reduced(y, config.k());
      const auto r = reduced_constraint(s, sigma);
      out.angular_momentum.push_back(s.rho * s.rho * s.theta_dot);
      out.constraint_drift.push_back(std::abs(r.position));
      out.tangency_drift.push_back(std::abs(r.velocity));
      out.rho.push_back(s.rho);
    } else {
      if (y.size() != 2 * config.n() * k) {
        throw ValidationError("trajectory sample does not decode as a full state");
      }
      const FullState s = unpack_full(y, config.masses(), sigma, k);
      const auto c = full_constraint(s);
      out.wedge_c12.push_back(wedge_c12(s.masses, s.positions, s.velocities));
      out.constraint_drift.push_back(c.position);
      out.tangency_drift.push_back(c.tangency);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

CrossValidationReport cross_validate(const PolygonConfig& config, const ReducedState& initial,
                                     std::pair<double, double> t_span,
                                     const IntegrationSettings& settings,
                                     const CrossValidationOptions& options) {
  const auto grid =
      options.rho_grid.empty() ? default_rho_grid(config.sigma()) : options.rho_grid;
  const CriterionReport criterion = criterion_report(config, grid, options.tol_b, options.tol_c);
  if (!criterion.admissible && !options.force) {
    throw ValidationError("criterion rejects this configuration; the reduced system does not "
                          "describe a solution (use force to run anyway)");
  }

  CrossValidationReport report;
  report.off_criterion = !criterion.admissible;
  const std::size_t k = static_cast<std::size_t>(config.k());
  const std::size_t n = config.n();

  report.reduced = integrate_adaptive(make_reduced_rhs(config), pack_reduced(initial), t_span,
                                      settings);
  report.full = integrate_adaptive(make_full_rhs(config.masses(), config.sigma(), k),
                                   pack_full(embed(initial, config)), t_span, settings);
  report.reduced_termination = report.reduced.termination;
  report.full_termination = report.full.termination;

  constexpr double no_check = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> embedded;
  const std::size_t common = std::min(report.reduced.times.size(), report.full.times.size());
  for (std::size_t j = 0; j < common; ++j) {
    if (report.reduced.times[j] != report.full.times[j]) break;
    const auto s = unpack_reduced(report.reduced.samples[j], config.k());
    embedded.push_back(pack_full(embed(s, config, no_check)));
    const auto& e = embedded.back();
    const auto& f = report.full.samples[j];
    for (std::size_t c = 0; c < n * k; ++c) {
      report.max_position_deviation =
          std::max(report.max_position_deviation, std::abs(e[c] - f[c]));
      report.max_velocity_deviation =
          std::max(report.max_velocity_deviation, std::abs(e[n * k + c] - f[n * k + c]));
    }
    ++report.compared_samples;
  }

  // Does the embedded reduced curve satisfy the full equations?
  std::vector<double> dydt(2 * n * k);
  const auto& times = report.reduced.times;
  for (std::size_t j = 1; j + 1 < embedded.size(); ++j) {
    const double hm = times[j] - times[j - 1];
    const double hp = times[j + 1] - times[j];
    try {
      full_rhs_flat(embedded[j], config.masses(), config.sigma(), k, dydt);
    } catch (const SingularityError&) {
      continue;
    }
    for (std::size_t c = 0; c < n * k; ++c) {
      const double fd = 2.0 *
                        ((embedded[j + 1][c] - embedded[j][c]) / hp -
                         (embedded[j][c] - embedded[j - 1][c]) / hm) /
                        (hp + hm);
      report.residual_max = std::max(report.residual_max, std::abs(fd - dydt[n * k + c]));
    }
  }
  return report;
}

}  // namespace curvebody
