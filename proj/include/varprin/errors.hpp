#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace varprin {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller misuse: dimension mismatch, point outside the domain, bad config.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The oracle lacks a capability the operation needs (e.g. a gradient).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// The oracle produced a non-finite value; carries the offending point.
class OracleFault : public Error {
 public:
  OracleFault(const std::string& what, Eigen::VectorXd x) : Error(what), point_(std::move(x)) {}
  const Eigen::VectorXd& point() const { return point_; }

 private:
  Eigen::VectorXd point_;
};

/// The admissible region is empty.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// The objective diverges to -infinity on a set that should be compact.
class UnboundedBelowError : public Error {
 public:
  UnboundedBelowError(const std::string& what, Eigen::VectorXd x) : Error(what), point_(std::move(x)) {}
  const Eigen::VectorXd& point() const { return point_; }

 private:
  Eigen::VectorXd point_;
};

/// An iterative method did not reach its tolerance; the best iterate is attached.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, Eigen::VectorXd best = {}) : Error(what), best_(std::move(best)) {}
  const Eigen::VectorXd& best() const { return best_; }

 private:
  Eigen::VectorXd best_;
};

/// Two independent routes to the same quantity disagree beyond tolerance.
class InconsistencyError : public Error {
 public:
  InconsistencyError(const std::string& what, Eigen::VectorXd first, Eigen::VectorXd second)
      : Error(what), first_(std::move(first)), second_(std::move(second)) {}
  const Eigen::VectorXd& first() const { return first_; }
  const Eigen::VectorXd& second() const { return second_; }

 private:
  Eigen::VectorXd first_;
  Eigen::VectorXd second_;
};

}  // namespace varprin
