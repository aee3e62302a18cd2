#pragma once

#include <stdexcept>
#include <string>

namespace driftwatch {

// Ill-formed or non-finite input data: CSV parse failures, NaN observations,
// degenerate residual scale. CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when no optimizer start produced a finite objective value.
// CLI maps this to exit code 3.
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace driftwatch
