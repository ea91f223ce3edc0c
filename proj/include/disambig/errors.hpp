#pragma once

#include <stdexcept>
#include <string>

namespace disambig {

// Bad input data: unreadable files, malformed rows, violated record invariants.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad or incompatible model files: corrupt stream, wrong version, wrong feature order.
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad command-line or config values.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace disambig
