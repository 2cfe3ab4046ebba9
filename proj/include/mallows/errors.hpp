#pragma once

#include <stdexcept>

namespace mallows {

// An internal invariant of a construction failed; indicates a bug or corrupted input state.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The request exceeds what a component supports (e.g. exhaustive enumeration beyond its size limit).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mallows
