#pragma once

#include <stdexcept>
#include <string>

namespace heunwell {

// Invalid input: bad parameters, points outside a domain, poles.
// The CLI maps these to exit code 1.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateB : public DomainError {
 public:
  using DomainError::DomainError;
};

// A numerical procedure did not reach its accuracy target.
// The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DenominatorZero : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RootNotFound : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotConverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TailNotSmall : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NormalizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoPhysicalRoot : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BlowUp : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace heunwell
