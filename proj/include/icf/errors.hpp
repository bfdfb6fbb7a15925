#pragma once

#include <stdexcept>
#include <string>

namespace icf {

// Bad user input: malformed documents, out-of-range ground sets, families
// that violate a stated precondition of the requested operation.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An internal budget or supported-range limit was exceeded (materialization
// budget, enumerator ceilings). Distinct from InputError so the CLI can map
// the two onto different exit codes.
class LimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace icf
