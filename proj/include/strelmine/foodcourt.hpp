#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strelmine/geo.hpp"
#include "strelmine/trace.hpp"

namespace strelmine {

// Synthetic crowd simulation over a rectangular grid of floor regions.
// Region index = row * grid_cols + col; region centers become the spatial
// locations. Everyone starts at the entrance at t = 0; at every decision
// period each customer draws a destination (one of the popular regions with
// probability popular_prob, otherwise a uniformly random non-popular
// region, which includes staying put) and walks straight toward its center
// at walking speed. Occupancy per region is sampled every minute.
struct FoodCourtConfig {
  int grid_cols = 5;
  int grid_rows = 4;
  double cell_m = 15.0;
  int entrance = 0;
  std::vector<int> popular = {7, 12, 18};
  int customers = 100;
  int horizon_min = 180;
  double popular_prob = 0.8;
  int decision_period_min = 10;
  double speed_mps = 1.4;
  // Grid anchor; offsets in meters convert to degrees around this point.
  double origin_lat = 0.0;
  double origin_lon = 0.0;

  int num_regions() const { return grid_cols * grid_rows; }
};

struct FoodCourtData {
  std::vector<Location> locations;
  SpatioTemporalTrace trace;  // variable "occupancy", minutes grid
};

FoodCourtConfig foodcourt_config_from_json(const std::string& json_text);
std::string foodcourt_config_to_json(const FoodCourtConfig& config);

// Deterministic under (config, seed).
FoodCourtData generate_food_court(const FoodCourtConfig& config, std::uint64_t seed);

}  // namespace strelmine
