#pragma once

#include <stdexcept>
#include <string>

namespace speller {

// Raised when a value violates a documented range or structural invariant.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The posterior normalizer collapsed (non-finite score or likelihood).
class DegenerateState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// KL divergence asked for log(g/0) with g > 0.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scheduling bookkeeping went out of lockstep (score with nothing pending,
// or more flashes in flight than the observation delay allows).
class TrackerInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A policy/constraint combination that cannot produce a flash group.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace speller
