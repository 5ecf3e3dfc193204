#pragma once

#include <stdexcept>
#include <string>

namespace curvebody {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector lengths or counts that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Inputs that violate a documented invariant (bad masses, off-manifold state, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A constraint that has no solution for the requested data, e.g. rho0 > 1 on the sphere.
class InfeasibleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// b_i differ beyond the strict-mode tolerance while integrating the reduced system.
class CriterionError : public Error {
 public:
  using Error::Error;
};

enum class SingularityKind { collision, antipodal, nonpositive_size };

/// A force denominator vanished. Integrators turn this into a terminal event.
class SingularityError : public Error {
 public:
  SingularityError(SingularityKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  SingularityKind kind() const noexcept { return kind_; }

 private:
  SingularityKind kind_;
};

class CollisionError : public SingularityError {
 public:
  explicit CollisionError(const std::string& what)
      : SingularityError(SingularityKind::collision, what) {}
};

}  // namespace curvebody
