#include "strelmine/foodcourt.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "strelmine/errors.hpp"
#include "strelmine/rng.hpp"

namespace strelmine {

namespace {

constexpr double kMetersPerDegLat = kEarthRadiusM * 3.14159265358979323846 / 180.0;

void validate(const FoodCourtConfig& c) {
  if (c.grid_cols < 1 || c.grid_rows < 1) throw config_error("grid must be at least 1x1");
  if (!(c.cell_m > 0.0)) throw config_error("cell size must be positive");
  if (c.entrance < 0 || c.entrance >= c.num_regions()) {
    throw config_error("entrance index out of range");
  }
  for (int p : c.popular) {
    if (p < 0 || p >= c.num_regions()) throw config_error("popular region index out of range");
  }
  if (c.popular.empty()) throw config_error("at least one popular region is required");
  if (c.customers < 0) throw config_error("customer count must be non-negative");
  if (c.horizon_min < 1) throw config_error("horizon must be at least 1 minute");
  if (!(c.popular_prob >= 0.0 && c.popular_prob <= 1.0)) {
    throw config_error("popular_prob must be in [0, 1]");
  }
  if (c.decision_period_min < 1) throw config_error("decision period must be >= 1 minute");
  if (!(c.speed_mps > 0.0)) throw config_error("walking speed must be positive");
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

}  // namespace

FoodCourtData generate_food_court(const FoodCourtConfig& config, std::uint64_t seed) {
  validate(config);
  const int regions = config.num_regions();

  std::vector<Vec2> centers(regions);
  for (int r = 0; r < config.grid_rows; ++r) {
    for (int col = 0; col < config.grid_cols; ++col) {
      centers[r * config.grid_cols + col] = {(col + 0.5) * config.cell_m,
                                             (r + 0.5) * config.cell_m};
    }
  }

  std::vector<Location> locations(regions);
  const double m_per_deg_lon =
      kMetersPerDegLat * std::cos(config.origin_lat * 3.14159265358979323846 / 180.0);
  std::vector<bool> is_popular(regions, false);
  for (int p : config.popular) is_popular[p] = true;
  for (int i = 0; i < regions; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "r%02d", i);
    locations[i].id = id;
    locations[i].lat = config.origin_lat + centers[i].y / kMetersPerDegLat;
    locations[i].lon = config.origin_lon + centers[i].x / m_per_deg_lon;
    locations[i].name = i == config.entrance ? "entrance" : (is_popular[i] ? "popular" : "floor");
  }

  std::vector<int> non_popular;
  for (int i = 0; i < regions; ++i) {
    if (!is_popular[i]) non_popular.push_back(i);
  }

  std::vector<std::string> ids;
  for (const auto& loc : locations) ids.push_back(loc.id);
  std::vector<double> timestamps(config.horizon_min + 1);
  for (int t = 0; t <= config.horizon_min; ++t) timestamps[t] = t;
  SpatioTemporalTrace trace(ids, {"occupancy"}, timestamps, "minutes");

  struct Customer {
    Vec2 pos;
    int destination = 0;
  };
  std::vector<Customer> customers(config.customers);
  for (auto& c : customers) {
    c.pos = centers[config.entrance];
    c.destination = config.entrance;
  }

  auto region_of = [&](const Vec2& p) {
    int col = std::clamp(static_cast<int>(p.x / config.cell_m), 0, config.grid_cols - 1);
    int row = std::clamp(static_cast<int>(p.y / config.cell_m), 0, config.grid_rows - 1);
    return row * config.grid_cols + col;
  };

  Rng rng(seed);
  const double step_m = config.speed_mps * 60.0;  // distance walked per sampled minute

  for (int t = 0; t <= config.horizon_min; ++t) {
    std::vector<double> occupancy(regions, 0.0);
    for (const auto& c : customers) occupancy[region_of(c.pos)] += 1.0;
    for (int r = 0; r < regions; ++r) trace.set_value(r, t, 0, occupancy[r]);
    if (t == config.horizon_min) break;

    if (t % config.decision_period_min == 0) {
      for (auto& c : customers) {
        if (rng.bernoulli(config.popular_prob)) {
          c.destination = config.popular[rng.next_below(config.popular.size())];
        } else if (!non_popular.empty()) {
          c.destination = non_popular[rng.next_below(non_popular.size())];
        }
      }
    }
    for (auto& c : customers) {
      const Vec2 goal = centers[c.destination];
      const double dx = goal.x - c.pos.x;
      const double dy = goal.y - c.pos.y;
      const double dist = std::hypot(dx, dy);
      if (dist <= step_m) {
        c.pos = goal;
      } else {
        c.pos.x += dx / dist * step_m;
        c.pos.y += dy / dist * step_m;
      }
    }
  }
  return {std::move(locations), std::move(trace)};
}

FoodCourtConfig foodcourt_config_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("generator config is malformed: ") + e.what());
  }
  FoodCourtConfig c;
  auto read = [&](const char* key, auto& slot) {
    if (doc.contains(key)) slot = doc.at(key).get<std::decay_t<decltype(slot)>>();
  };
  read("grid_cols", c.grid_cols);
  read("grid_rows", c.grid_rows);
  read("cell_m", c.cell_m);
  read("entrance", c.entrance);
  read("popular", c.popular);
  read("customers", c.customers);
  read("horizon_min", c.horizon_min);
  read("popular_prob", c.popular_prob);
  read("decision_period_min", c.decision_period_min);
  read("speed_mps", c.speed_mps);
  read("origin_lat", c.origin_lat);
  read("origin_lon", c.origin_lon);
  validate(c);
  return c;
}

std::string foodcourt_config_to_json(const FoodCourtConfig& c) {
  nlohmann::ordered_json doc;
  doc["grid_cols"] = c.grid_cols;
  doc["grid_rows"] = c.grid_rows;
  doc["cell_m"] = c.cell_m;
  doc["entrance"] = c.entrance;
  doc["popular"] = c.popular;
  doc["customers"] = c.customers;
  doc["horizon_min"] = c.horizon_min;
  doc["popular_prob"] = c.popular_prob;
  doc["decision_period_min"] = c.decision_period_min;
  doc["speed_mps"] = c.speed_mps;
  doc["origin_lat"] = c.origin_lat;
  doc["origin_lon"] = c.origin_lon;
  return doc.dump(2) + "\n";
}

}  // namespace strelmine
