#include "strelmine/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "strelmine/csvio.hpp"
#include "strelmine/errors.hpp"

namespace strelmine {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

SpatioTemporalTrace::SpatioTemporalTrace(std::vector<std::string> location_ids,
                                         std::vector<std::string> variables,
                                         std::vector<double> timestamps, std::string time_unit)
    : location_ids_(std::move(location_ids)),
      variables_(std::move(variables)),
      timestamps_(std::move(timestamps)),
      time_unit_(std::move(time_unit)) {
  if (timestamps_.empty()) throw data_error("trace needs at least one sample");
  if (variables_.empty()) throw data_error("trace needs at least one variable");
  for (std::size_t i = 1; i < timestamps_.size(); ++i) {
    if (!(timestamps_[i] > timestamps_[i - 1])) {
      throw data_error("timestamps must be strictly increasing");
    }
  }
  if (timestamps_.size() > 2) {
    const double step = timestamps_[1] - timestamps_[0];
    for (std::size_t i = 2; i < timestamps_.size(); ++i) {
      double d = timestamps_[i] - timestamps_[i - 1];
      if (std::abs(d - step) > 1e-6 * std::max(1.0, std::abs(step))) {
        throw data_error("timestamps do not form a uniform grid");
      }
    }
    // Snap to an exact arithmetic grid so interval membership tests are
    // stable against accumulated parsing noise.
    for (std::size_t i = 0; i < timestamps_.size(); ++i) {
      timestamps_[i] = timestamps_[0] + static_cast<double>(i) * step;
    }
  }
  values_.assign(location_ids_.size(),
                 std::vector<double>(timestamps_.size() * variables_.size(), kNan));
}

double SpatioTemporalTrace::dt() const {
  return timestamps_.size() > 1 ? timestamps_[1] - timestamps_[0] : 0.0;
}

double SpatioTemporalTrace::horizon() const { return timestamps_.back() - timestamps_.front(); }

int SpatioTemporalTrace::location_index(const std::string& id) const {
  for (std::size_t i = 0; i < location_ids_.size(); ++i) {
    if (location_ids_[i] == id) return static_cast<int>(i);
  }
  return -1;
}

int SpatioTemporalTrace::variable_index(const std::string& var) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i] == var) return static_cast<int>(i);
  }
  return -1;
}

bool SpatioTemporalTrace::is_missing(int loc, int t, int var) const {
  return std::isnan(value(loc, t, var));
}

double SpatioTemporalTrace::missing_fraction(int loc) const {
  const auto& row = values_[loc];
  std::size_t missing = 0;
  for (double v : row) {
    if (std::isnan(v)) ++missing;
  }
  return static_cast<double>(missing) / static_cast<double>(row.size());
}

bool SpatioTemporalTrace::has_missing() const {
  for (int loc = 0; loc < num_locations(); ++loc) {
    if (missing_fraction(loc) > 0.0) return true;
  }
  return false;
}

std::pair<double, double> SpatioTemporalTrace::variable_range(int var) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int loc = 0; loc < num_locations(); ++loc) {
    for (int t = 0; t < num_samples(); ++t) {
      double v = value(loc, t, var);
      if (std::isnan(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo > hi) throw data_error("variable has no non-missing values");
  return {lo, hi};
}

SpatioTemporalTrace load_traces_csv(const std::string& path,
                                    const std::vector<Location>& locations,
                                    const std::string& time_unit) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw data_error("empty trace file: " + path);
  const auto& header = rows.front();
  if (header.size() < 3 || header[0] != "location_id" || header[1] != "time") {
    throw data_error("trace CSV must start with header location_id,time,<vars...>: " + path);
  }
  std::vector<std::string> variables(header.begin() + 2, header.end());

  std::set<std::string> known_ids;
  for (const auto& loc : locations) known_ids.insert(loc.id);

  std::set<double> times;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw data_error("trace row " + std::to_string(r) + " has wrong column count");
    }
    if (!known_ids.count(row[0])) {
      throw data_error("trace references unknown location id: " + row[0]);
    }
    auto t = csv::parse_cell(row[1], "time column");
    if (!t) throw data_error("missing time value in trace row " + std::to_string(r));
    times.insert(*t);
  }
  if (times.empty()) throw data_error("trace file has no data rows: " + path);

  std::vector<double> timestamps(times.begin(), times.end());
  std::vector<std::string> ids;
  for (const auto& loc : locations) ids.push_back(loc.id);
  SpatioTemporalTrace trace(ids, variables, timestamps, time_unit);

  std::map<double, int> time_index;
  for (std::size_t i = 0; i < trace.timestamps().size(); ++i) {
    time_index[timestamps[i]] = static_cast<int>(i);
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    int loc = trace.location_index(row[0]);
    int t = time_index.at(*csv::parse_cell(row[1], "time column"));
    for (std::size_t v = 0; v < variables.size(); ++v) {
      auto cell = csv::parse_cell(row[2 + v], variables[v] + " at " + row[0]);
      if (cell) trace.set_value(loc, t, static_cast<int>(v), *cell);
    }
  }
  return trace;
}

void write_traces_csv(const std::string& path, const SpatioTemporalTrace& trace) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write file: " + path);
  out << "location_id,time";
  for (const auto& v : trace.variables()) out << ',' << v;
  out << '\n';
  for (int loc = 0; loc < trace.num_locations(); ++loc) {
    for (int t = 0; t < trace.num_samples(); ++t) {
      out << trace.location_ids()[loc] << ',' << csv::format_double(trace.timestamps()[t]);
      for (int v = 0; v < trace.num_variables(); ++v) {
        out << ',';
        if (!trace.is_missing(loc, t, v)) out << csv::format_double(trace.value(loc, t, v));
      }
      out << '\n';
    }
  }
}

CleanResult clean(const SpatioTemporalTrace& trace, double missing_frac_threshold) {
  std::vector<int> kept;
  std::vector<std::string> dropped;
  for (int loc = 0; loc < trace.num_locations(); ++loc) {
    if (trace.missing_fraction(loc) > missing_frac_threshold) {
      dropped.push_back(trace.location_ids()[loc]);
    } else {
      kept.push_back(loc);
    }
  }
  if (kept.empty()) throw data_error("cleaning dropped every location");

  std::vector<std::string> ids;
  for (int loc : kept) ids.push_back(trace.location_ids()[loc]);
  SpatioTemporalTrace out(ids, trace.variables(), trace.timestamps(), trace.time_unit());

  const int T = trace.num_samples();
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const int src = kept[k];
    for (int var = 0; var < trace.num_variables(); ++var) {
      for (int t = 0; t < T; ++t) {
        double v = trace.value(src, t, var);
        if (std::isnan(v)) {
          // Nearest non-missing sample in time; ties prefer the earlier one.
          int best = -1;
          for (int off = 1; off < T && best < 0; ++off) {
            if (t - off >= 0 && !trace.is_missing(src, t - off, var)) {
              best = t - off;
            } else if (t + off < T && !trace.is_missing(src, t + off, var)) {
              best = t + off;
            }
          }
          if (best < 0) {
            throw data_error("location " + ids[k] + " has an entirely missing variable " +
                             trace.variables()[var]);
          }
          v = trace.value(src, best, var);
        }
        out.set_value(static_cast<int>(k), t, var, v);
      }
    }
  }
  return {std::move(out), std::move(dropped)};
}

}  // namespace strelmine
