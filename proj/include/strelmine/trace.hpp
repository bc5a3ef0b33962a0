#pragma once

#include <string>
#include <vector>

#include "strelmine/geo.hpp"

namespace strelmine {

// Per-location multivariate time series on a shared uniform time grid.
// Missing cells are stored as NaN until clean() imputes them.
class SpatioTemporalTrace {
public:
  SpatioTemporalTrace() = default;
  SpatioTemporalTrace(std::vector<std::string> location_ids,
                      std::vector<std::string> variables, std::vector<double> timestamps,
                      std::string time_unit = "units");

  int num_locations() const { return static_cast<int>(location_ids_.size()); }
  int num_samples() const { return static_cast<int>(timestamps_.size()); }
  int num_variables() const { return static_cast<int>(variables_.size()); }

  const std::vector<std::string>& location_ids() const { return location_ids_; }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<double>& timestamps() const { return timestamps_; }
  const std::string& time_unit() const { return time_unit_; }
  double dt() const;
  // Trace duration from the first to the last sample.
  double horizon() const;

  int location_index(const std::string& id) const;  // -1 when absent
  int variable_index(const std::string& var) const;

  double value(int loc, int t, int var) const {
    return values_[loc][static_cast<std::size_t>(t) * variables_.size() + var];
  }
  void set_value(int loc, int t, int var, double v) {
    values_[loc][static_cast<std::size_t>(t) * variables_.size() + var] = v;
  }

  bool is_missing(int loc, int t, int var) const;
  double missing_fraction(int loc) const;
  bool has_missing() const;

  std::pair<double, double> variable_range(int var) const;  // over non-missing cells

private:
  std::vector<std::string> location_ids_;
  std::vector<std::string> variables_;
  std::vector<double> timestamps_;
  std::string time_unit_;
  std::vector<std::vector<double>> values_;  // [loc][t * num_variables + var]
};

// CSV columns: location_id,time,<var1>,<var2>,...  Rows may arrive in any
// order; the time column must form a uniform grid. Location ids that are
// not in `locations` are rejected; locations without rows come back as
// all-missing series.
SpatioTemporalTrace load_traces_csv(const std::string& path,
                                    const std::vector<Location>& locations,
                                    const std::string& time_unit = "units");

void write_traces_csv(const std::string& path, const SpatioTemporalTrace& trace);

struct CleanResult {
  SpatioTemporalTrace trace;
  std::vector<std::string> dropped_ids;
};

// Drops locations whose missing fraction exceeds the threshold, then fills
// the remaining gaps with the nearest non-missing value in time (ties go to
// the earlier sample). Throws data_error when every location is dropped.
CleanResult clean(const SpatioTemporalTrace& trace, double missing_frac_threshold = 0.15);

}  // namespace strelmine
