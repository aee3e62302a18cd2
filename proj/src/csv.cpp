#include "driftwatch/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "driftwatch/errors.hpp"

namespace driftwatch {

namespace {

bool parse_number(const std::string& field, double& out) {
    const char* begin = field.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

SamplePath read_series_csv(std::istream& in, double h) {
    std::vector<double> times;
    std::vector<double> values;
    bool two_columns = false;
    bool saw_data = false;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.empty() || fields.size() > 2) {
            throw DataError("csv line " + std::to_string(line_no) +
                            ": expected 1 or 2 columns, got " +
                            std::to_string(fields.size()));
        }
        std::vector<double> nums(fields.size());
        bool all_numeric = true;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (!parse_number(fields[c], nums[c])) all_numeric = false;
        }
        if (!all_numeric) {
            if (!saw_data) continue;  // header row
            throw DataError("csv line " + std::to_string(line_no) +
                            ": non-numeric value '" + line + "'");
        }
        if (!saw_data) {
            saw_data = true;
            two_columns = fields.size() == 2;
        } else if ((fields.size() == 2) != two_columns) {
            throw DataError("csv line " + std::to_string(line_no) +
                            ": inconsistent column count");
        }
        if (two_columns) {
            times.push_back(nums[0]);
            values.push_back(nums[1]);
        } else {
            values.push_back(nums[0]);
        }
    }
    if (values.size() < 3) throw DataError("csv: need at least 3 observations");

    SamplePath path;
    path.values = std::move(values);
    if (two_columns) {
        const double spacing = times[1] - times[0];
        if (!(spacing > 0.0)) throw DataError("csv: t column must be increasing");
        for (std::size_t i = 1; i < times.size(); ++i) {
            const double d = times[i] - times[i - 1];
            if (std::abs(d - spacing) > 1e-9 * std::max(std::abs(spacing), 1.0)) {
                throw DataError("csv: t column not equally spaced at row " +
                                std::to_string(i + 1));
            }
        }
        path.step = spacing;
    } else {
        if (!(h > 0.0)) {
            throw std::invalid_argument("single-column input requires --h");
        }
        path.step = h;
    }
    path.validate();
    return path;
}

SamplePath read_series_csv_file(const std::string& filename, double h) {
    std::ifstream in(filename);
    if (!in) throw DataError("cannot open '" + filename + "'");
    return read_series_csv(in, h);
}

void write_path_csv(std::ostream& out, const SamplePath& path) {
    out << "t,x\n";
    char buf[64];
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n",
                      static_cast<double>(i) * path.step, path.values[i]);
        out << buf;
    }
}

}  // namespace driftwatch
