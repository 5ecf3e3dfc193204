#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace curvebody {

/// Sign of the curvature: +1 for the unit sphere, -1 for the unit hyperboloid.
class CurvatureSign {
 public:
  static CurvatureSign positive() { return CurvatureSign(1); }
  static CurvatureSign negative() { return CurvatureSign(-1); }
  /// Throws ValidationError unless value is +1 or -1.
  static CurvatureSign from_int(int value);

  int value() const noexcept { return sigma_; }
  double as_double() const noexcept { return static_cast<double>(sigma_); }
  /// sigma is its own inverse.
  CurvatureSign inverse() const noexcept { return *this; }

  friend bool operator==(CurvatureSign, CurvatureSign) = default;

 private:
  explicit CurvatureSign(int s) : sigma_(s) {}
  int sigma_;
};

inline constexpr double kDefaultManifoldTol = 1e-9;

/// Coordinates in R^m. The length is fixed at construction.
class AmbientVector {
 public:
  AmbientVector() = default;
  explicit AmbientVector(std::size_t m) : coords_(m, 0.0) {}
  AmbientVector(std::initializer_list<double> c) : coords_(c) {}
  explicit AmbientVector(std::vector<double> c) : coords_(std::move(c)) {}
  explicit AmbientVector(std::span<const double> c) : coords_(c.begin(), c.end()) {}

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  std::span<double> coords() noexcept { return coords_; }

  friend bool operator==(const AmbientVector&, const AmbientVector&) = default;

 private:
  std::vector<double> coords_;
};

/// a1 b1 + ... + a_{m-1} b_{m-1} + sigma a_m b_m. Empty vectors give 0.
double sigma_dot(std::span<const double> a, std::span<const double> b, CurvatureSign s);
double sigma_dot(const AmbientVector& a, const AmbientVector& b, CurvatureSign s);

/// |q (.) q - sigma| <= tol.
bool on_manifold(const AmbientVector& q, CurvatureSign s, double tol = kDefaultManifoldTol);

/// T(theta) v for the planar rotation T = [[cos, -sin], [sin, cos]].
AmbientVector rotate(double theta, const AmbientVector& v);

/// J v with J = [[0, -1], [1, 0]], the generator of planar rotations.
AmbientVector rotation_generator_apply(const AmbientVector& v);

/// (1,2) component of sum_i m_i qdot_i ^ q_i: sum_i m_i (q_i1 qdot_i2 - q_i2 qdot_i1).
double wedge_c12(std::span<const double> masses, std::span<const AmbientVector> positions,
                 std::span<const AmbientVector> velocities);

}  // namespace curvebody
