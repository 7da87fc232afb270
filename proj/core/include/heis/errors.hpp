#pragma once

#include <stdexcept>
#include <string>

namespace heis {

// Domain failures. The CLI maps every DomainError to exit code 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class WrongDimension : public DomainError {
 public:
  using DomainError::DomainError;
};

class SingularPoint : public DomainError {
 public:
  using DomainError::DomainError;
};

class OffSurface : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoConvergence : public DomainError {
 public:
  using DomainError::DomainError;
};

class AmbiguousProjection : public DomainError {
 public:
  using DomainError::DomainError;
};

class ReachExceeded : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotUmbilic : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace heis
