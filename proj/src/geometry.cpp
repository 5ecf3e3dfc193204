#include "curvebody/geometry.hpp"

#include <cmath>
#include <string>

#include "curvebody/errors.hpp"

namespace curvebody {

CurvatureSign CurvatureSign::from_int(int value) {
  if (value != 1 && value != -1) {
    throw ValidationError("curvature sign must be +1 or -1, got " + std::to_string(value));
  }
  return CurvatureSign(value);
}

double sigma_dot(std::span<const double> a, std::span<const double> b, CurvatureSign s) {
  if (a.size() != b.size()) {
    throw DimensionError("sigma_dot: length mismatch " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  const std::size_t m = a.size();
  if (m == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) sum += a[i] * b[i];
  return sum + s.as_double() * a[m - 1] * b[m - 1];
}

double sigma_dot(const AmbientVector& a, const AmbientVector& b, CurvatureSign s) {
  return sigma_dot(a.coords(), b.coords(), s);
}

bool on_manifold(const AmbientVector& q, CurvatureSign s, double tol) {
  return std::abs(sigma_dot(q, q, s) - s.as_double()) <= tol;
}

namespace {
void require_planar(const AmbientVector& v, const char* who) {
  if (v.size() != 2) {
    throw DimensionError(std::string(who) + ": expected a planar vector, got length " +
                         std::to_string(v.size()));
  }
}
}  // namespace

AmbientVector rotate(double theta, const AmbientVector& v) {
  require_planar(v, "rotate");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return AmbientVector{c * v[0] - s * v[1], s * v[0] + c * v[1]};
}

AmbientVector rotation_generator_apply(const AmbientVector& v) {
  require_planar(v, "rotation_generator_apply");
  return AmbientVector{-v[1], v[0]};
}

double wedge_c12(std::span<const double> masses, std::span<const AmbientVector> positions,
                 std::span<const AmbientVector> velocities) {
  if (masses.size() != positions.size() || masses.size() != velocities.size()) {
    throw DimensionError("wedge_c12: masses, positions and velocities differ in count");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    const auto& q = positions[i];
    const auto& v = velocities[i];
    if (q.size() < 2 || v.size() != q.size()) {
      throw DimensionError("wedge_c12: body " + std::to_string(i) + " has bad vector lengths");
    }
    sum += masses[i] * (q[0] * v[1] - q[1] * v[0]);
  }
  return sum;
}

}  // namespace curvebody
