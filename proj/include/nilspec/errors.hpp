#pragma once

#include <stdexcept>
#include <string>

namespace nilspec {

// Malformed input files or literals. The CLI maps this to exit code 2.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Valid input that violates a mathematical precondition (non-square matrix,
// endomorphism that is not an automorphism, ...). CLI exit code 1.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A redundant computation disagreed with the primary one. This always
// indicates a bug, never bad input.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace nilspec
