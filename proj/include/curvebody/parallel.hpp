#pragma once

// OpenMP drivers. Each one has a serial reference elsewhere in the library that runs the
// same per-item kernel in a plain loop; results are bit-identical for any thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "curvebody/diagnostics.hpp"
#include "curvebody/geometry.hpp"
#include "curvebody/model.hpp"

namespace curvebody::parallel {

/// Upper bound for OpenMP threads: CURVEBODY_THREADS if set and positive, else the runtime
/// default.
int thread_limit();

/// full_rhs_flat with the body loop split across threads.
void full_rhs_flat(std::span<const double> y, std::span<const double> masses,
                   CurvatureSign sigma, std::size_t k, std::span<double> dydt);

/// One criterion_report per config, in input order. An empty grid selects
/// default_rho_grid for each config's sign.
std::vector<CriterionReport> criterion_reports(const std::vector<PolygonConfig>& configs,
                                               const std::vector<double>& rho_grid,
                                               double tol_b, double tol_c);

/// Serial reference for criterion_reports.
std::vector<CriterionReport> criterion_reports_serial(const std::vector<PolygonConfig>& configs,
                                                      const std::vector<double>& rho_grid,
                                                      double tol_b, double tol_c);

}  // namespace curvebody::parallel
