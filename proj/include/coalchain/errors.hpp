#pragma once

#include <stdexcept>
#include <string>

namespace coalchain {

/// Malformed or out-of-range user input (negative tonnage, bad file, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance data that cannot be scheduled at all (unreachable terminal, ...).
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search ran off the end of the time axis or the tide table.
class HorizonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Objective requested on a solution that does not schedule every vessel.
class IncompleteSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coalchain
