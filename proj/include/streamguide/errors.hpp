#ifndef STREAMGUIDE_ERRORS_HPP
#define STREAMGUIDE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace streamguide {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario or parameter set. Raised before any simulation starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation too close to a singular point of a flow primitive.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, Eigen::Vector2d location)
      : Error(what), location_(location) {}
  const Eigen::Vector2d& location() const { return location_; }

 private:
  Eigen::Vector2d location_;
};

/// Every candidate waypoint was clipped or masked.
class PlanningStuckError : public Error {
 public:
  using Error::Error;
};

class DegenerateSegmentError : public Error {
 public:
  using Error::Error;
};

/// Inequality-constrained QP with an empty feasible set. `rows()` holds the
/// indices of the constraints that could not be satisfied together.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::vector<int> rows)
      : Error(what), rows_(std::move(rows)) {}
  const std::vector<int>& rows() const { return rows_; }

 private:
  std::vector<int> rows_;
};

class PathInfeasibleError : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class NumericalBlowupError : public Error {
 public:
  using Error::Error;
};

class ControllerFault : public Error {
 public:
  using Error::Error;
};

/// Path parameter ran past the last built segment.
class PathExhaustedError : public Error {
 public:
  using Error::Error;
};

}  // namespace streamguide

#endif  // STREAMGUIDE_ERRORS_HPP
