#include "strelmine/csvio.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "strelmine/errors.hpp"

namespace strelmine::csv {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_line(line));
  }
  return rows;
}

std::optional<double> parse_cell(const std::string& cell, const std::string& context) {
  if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan") return std::nullopt;
  const char* begin = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw data_error("unparseable numeric cell '" + cell + "' in " + context);
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace strelmine::csv
