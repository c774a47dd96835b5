#pragma once

#include <stdexcept>

namespace mgvar {

// Invalid argument values (ranges, enum mismatches, malformed shapes).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An object violates a structural contract, e.g. a non-measurable stopping time.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A hypothesis of a verifier does not hold for the supplied input.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mgvar
