#pragma once

#include <iosfwd>
#include <string>

#include "driftwatch/simulate.hpp"

namespace driftwatch {

// Reads an observation series. Accepted layouts:
//   - two columns t,x (optional header): h is derived from the t column,
//     which must be equally spaced within 1e-9 relative tolerance;
//   - one column x (optional header): h must be passed by the caller (> 0).
// Throws DataError naming the offending line on malformed input, and
// std::invalid_argument when h is needed but absent.
SamplePath read_series_csv(std::istream& in, double h);
SamplePath read_series_csv_file(const std::string& filename, double h);

// Writes header "t,x" and one row per observation with t = i * step.
void write_path_csv(std::ostream& out, const SamplePath& path);

}  // namespace driftwatch
