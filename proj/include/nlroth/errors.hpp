#pragma once

#include <stdexcept>
#include <string>

namespace nlroth {

/// Argument outside the mathematical domain of an operation (H < 1, q <= 0, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A caller-side contract was broken, e.g. an unbounded function handed to an
/// operation that requires 1-bounded inputs.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// A quantity that must be real and nonnegative came out negative beyond
/// rounding. Signals a broken implementation rather than bad input.
class NumericalIntegrityError : public std::runtime_error {
 public:
  explicit NumericalIntegrityError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed configuration, generator spec or input file.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// An experiment task failed after its configuration was accepted.
class TaskError : public std::runtime_error {
 public:
  explicit TaskError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlroth
