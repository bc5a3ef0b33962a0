#pragma once

#include <optional>
#include <string>
#include <vector>

namespace strelmine::csv {

// Minimal CSV support: comma-separated, no quoting, UTF-8 passthrough.
// Rows are trimmed of trailing '\r'; empty lines are skipped.

std::vector<std::vector<std::string>> read_file(const std::string& path);

std::vector<std::string> split_line(const std::string& line);

// Parses a floating point cell. Returns nullopt for a missing cell (empty,
// "NA", "NaN", "nan"); throws data_error when the cell is non-numeric junk.
std::optional<double> parse_cell(const std::string& cell, const std::string& context);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace strelmine::csv
