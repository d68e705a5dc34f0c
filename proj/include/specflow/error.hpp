#ifndef SPECFLOW_ERROR_HPP
#define SPECFLOW_ERROR_HPP

#include <stdexcept>
#include <string>

namespace specflow {

enum class ErrorKind {
  InvalidArgument,
  SpaceMismatch,
  DominanceViolation,
  SizeLimit,
  DepthExceeded,
  SamplerInconsistent,
  JunctionMismatch,
  NotALoop,
  NonConstant,
  SolverFailure,
  DimensionMismatch,
  DegenerateSpectrum,
  BranchFailure,
  ResonanceHit,
  ResonanceOnPath,
  ThetaDependence,
  InvariantViolation,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by path lifting when bisection cannot resolve the interval [r0, r1].
class DepthExceeded : public Error {
 public:
  DepthExceeded(double r0, double r1, const std::string& what)
      : Error(ErrorKind::DepthExceeded, what), r0_(r0), r1_(r1) {}

  double r0() const noexcept { return r0_; }
  double r1() const noexcept { return r1_; }

 private:
  double r0_, r1_;
};

/// Raised when a coupling path crosses the resonance set; `location` is the bracketed r*.
class ResonanceOnPath : public Error {
 public:
  ResonanceOnPath(double location, const std::string& what)
      : Error(ErrorKind::ResonanceOnPath, what), location_(location) {}

  double location() const noexcept { return location_; }

 private:
  double location_;
};

}  // namespace specflow

#endif  // SPECFLOW_ERROR_HPP
