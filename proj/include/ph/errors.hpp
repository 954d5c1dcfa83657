#pragma once

#include <stdexcept>
#include <string>

namespace ph {

// Bad argument values (sizes, ranges, incompatible inputs).  CLI exit code 2.
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed experiment / solver configuration.  CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable or malformed input files; messages carry line numbers where known.
// CLI exit code 3.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Inputs that parse but violate data invariants (asymmetric matrix, NaN, ...).
// CLI exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ph
