#pragma once

#include <stdexcept>
#include <string>

namespace treestab {

// Error taxonomy shared by all modules. Expected algorithmic failures
// (search exhausted, stage starved) are *values*, not exceptions; these
// exceptions mark contract violations a caller can act on.

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace treestab
