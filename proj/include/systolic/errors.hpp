#pragma once

#include <stdexcept>
#include <string>

namespace systolic {

// Caller broke a documented contract (bad input, mismatched fields, ...).
// The CLI maps this to exit code 1.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A certified internal identity failed. This always signals a bug, never
// bad input; the CLI maps it to exit code 2.
class invariant_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw precondition_error(what);
}

inline void ensure(bool cond, const std::string& what) {
    if (!cond) throw invariant_violation(what);
}

} // namespace systolic
