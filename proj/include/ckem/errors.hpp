#pragma once

#include <stdexcept>
#include <string>

namespace ckem {

/// Input outside the documented parameter domain (e.g. p not in (0,1)).
class ParameterDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A point-wise evaluation requested off the open interior of its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite integrand value at a quadrature node.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double x1, double x2)
      : std::runtime_error(what), x1_(x1), x2_(x2) {}
  double x1() const { return x1_; }
  double x2() const { return x2_; }

 private:
  double x1_;
  double x2_;
};

/// Killing potential / dimension data that violates the setup invariants.
class SetupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Singular linear system or vanishing denominator in a closed form.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation called on data that fails its precondition (e.g. invalid entry).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bad command-line or suite selection.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ckem
