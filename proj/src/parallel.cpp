#include "curvebody/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <exception>

#include "curvebody/dynamics.hpp"
#include "curvebody/errors.hpp"

namespace curvebody::parallel {

int thread_limit() {
  int limit = omp_get_max_threads();
  if (const char* env = std::getenv("CURVEBODY_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) limit = std::min(limit, cap);
  }
  return std::max(limit, 1);
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

  // Exceptions cannot cross the parallel region; keep the one from the lowest body index
  // so the reported pair matches the serial loop.
  std::exception_ptr failure;
  long failed_at = static_cast<long>(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(static) num_threads(thread_limit())
  for (long i = 0; i < count; ++i) {
    try {
      body_acceleration(static_cast<std::size_t>(i), pos, vel, masses, sigma, k,
                        dydt.subspan((n + static_cast<std::size_t>(i)) * k, k));
    } catch (...) {
#pragma omp critical(curvebody_rhs_failure)
      if (i < failed_at) {
        failed_at = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

namespace {
const std::vector<double>& grid_for(const PolygonConfig& config,
                                    const std::vector<double>& requested,
                                    const std::vector<double>& positive_default,
                                    const std::vector<double>& negative_default) {
  if (!requested.empty()) return requested;
  return config.sigma() == CurvatureSign::positive() ? positive_default : negative_default;
}
}  // namespace

std::vector<CriterionReport> criterion_reports(const std::vector<PolygonConfig>& configs,
                                               const std::vector<double>& rho_grid,
                                               double tol_b, double tol_c) {
  const auto pos_grid = default_rho_grid(CurvatureSign::positive());
  const auto neg_grid = default_rho_grid(CurvatureSign::negative());
  std::vector<CriterionReport> out(configs.size());
  const long count = static_cast<long>(configs.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_limit())
  for (long i = 0; i < count; ++i) {
    const auto& cfg = configs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] =
        criterion_report(cfg, grid_for(cfg, rho_grid, pos_grid, neg_grid), tol_b, tol_c);
  }
  return out;
}

std::vector<CriterionReport> criterion_reports_serial(const std::vector<PolygonConfig>& configs,
                                                      const std::vector<double>& rho_grid,
                                                      double tol_b, double tol_c) {
  const auto pos_grid = default_rho_grid(CurvatureSign::positive());
  const auto neg_grid = default_rho_grid(CurvatureSign::negative());
  std::vector<CriterionReport> out;
  out.reserve(configs.size());
  for (const auto& cfg : configs) {
    out.push_back(criterion_report(cfg, grid_for(cfg, rho_grid, pos_grid, neg_grid), tol_b,
                                   tol_c));
  }
  return out;
}

}  // namespace curvebody::parallel
