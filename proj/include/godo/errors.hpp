#pragma once

#include <stdexcept>
#include <string>

namespace godo {

// Bad user input: config keys, ranges, malformed rationals.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed serialized window text.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A construction could not satisfy its constraints (chain exhausted, too few cylinders, ...).
struct ConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An odometer operation was asked for more digits than the operands carry.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two independent computations disagreed. Always a bug or a corrupt tree.
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace godo
