#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace olb {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments outside an operation's domain (e.g. a chord gap outside (0, π)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A point that should be exterior to the oval is inside it or on it.
class ContainmentError : public Error {
 public:
  using Error::Error;
};

/// An oval that fails positivity / convexity / periodicity checks.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The billiard map has no image for a state. Carries the orbit index
/// when raised from an orbit iteration.
class StepFailure : public Error {
 public:
  explicit StepFailure(const std::string& what, std::size_t index = 0)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Failure of a table constructor; `kind` names the violated invariant.
class ConstructionError : public Error {
 public:
  enum class Kind {
    kFPrimeBound,
    kAntisymmetry,
    kNormalization,
    kAlphaMonotonicity,
    kConvexity,
    kArcConstraint,
    kSeamDiscontinuity,
  };

  ConstructionError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Malformed input files or unwritable outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace olb
