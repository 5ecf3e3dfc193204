#pragma once

#include <cstddef>

#include "curvebody/dynamics.hpp"
#include "curvebody/integrator.hpp"
#include "curvebody/model.hpp"

namespace curvebody {

/// Bodies at or above this count use the OpenMP force loop.
inline constexpr std::size_t kParallelBodyThreshold = 64;

/// Reduced system as an integrator callback. The config is copied into the closure.
Rhs make_reduced_rhs(const PolygonConfig& config, const ReducedOptions& options = {});

/// Full system as an integrator callback for the given masses, sign and dimension.
Rhs make_full_rhs(std::vector<double> masses, CurvatureSign sigma, std::size_t k);

/// Rescales each packed position onto q (.) q = sigma. Velocities are left alone, so
/// tangency drift stays visible.
StepProjection make_manifold_projection(std::size_t n, CurvatureSign sigma, std::size_t k);

}  // namespace curvebody
