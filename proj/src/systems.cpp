#include "curvebody/systems.hpp"

#include <cmath>

#include "curvebody/errors.hpp"
#include "curvebody/parallel.hpp"

namespace curvebody {

Rhs make_reduced_rhs(const PolygonConfig& config, const ReducedOptions& options) {
  return [config, options](double, std::span<const double> y, std::span<double> dydt) {
    reduced_rhs_flat(y, config, dydt, options);
  };
}

Rhs make_full_rhs(std::vector<double> masses, CurvatureSign sigma, std::size_t k) {
  const bool threaded = masses.size() >= kParallelBodyThreshold;
  return [masses = std::move(masses), sigma, k, threaded](double, std::span<const double> y,
                                                          std::span<double> dydt) {
    if (threaded) {
      parallel::full_rhs_flat(y, masses, sigma, k, dydt);
    } else {
      full_rhs_flat(y, masses, sigma, k, dydt);
    }
  };
}

StepProjection make_manifold_projection(std::size_t n, CurvatureSign sigma, std::size_t k) {
  return [n, sigma, k](std::span<double> y) {
    for (std::size_t i = 0; i < n; ++i) {
      auto q = y.subspan(i * k, k);
      const double qq = sigma_dot(q, q, sigma);
      const double ratio = sigma.as_double() / qq;
      if (!(ratio > 0.0)) {
        throw SingularityError(SingularityKind::nonpositive_size,
                               "cannot project body " + std::to_string(i + 1) +
                                   " onto the manifold");
      }
      const double scale = std::sqrt(ratio);
      for (double& c : q) c *= scale;
    }
  };
}

}  // namespace curvebody
