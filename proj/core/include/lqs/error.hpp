#pragma once

#include <stdexcept>
#include <string>

namespace lqs {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A substitution entry pairs variables of different sorts.
class SubstitutionError : public Error {
 public:
  using Error::Error;
};

// A rule or extraction was invoked outside its applicability condition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedAxiomError : public Error {
 public:
  using Error::Error;
};

// The oracle refuses inputs whose search space exceeds its bounds.
class BoundsExceededError : public Error {
 public:
  using Error::Error;
};

// A branch set refers to symbols the query context does not know.
class StaleBranchError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Engines disagreed on branch counts for the same input.
class ParityViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace lqs
