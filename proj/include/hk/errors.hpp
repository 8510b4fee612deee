#pragma once

#include <stdexcept>
#include <string>

namespace hk {

// Bad input from a caller: malformed rationals, violated preconditions.
struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal consistency check failed; the result would be wrong.
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hk
