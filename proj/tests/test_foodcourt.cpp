#include <doctest.h>

#include <algorithm>

#include "strelmine/errors.hpp"
#include "strelmine/foodcourt.hpp"
#include "strelmine/geo.hpp"
#include "strelmine/spatial_model.hpp"

using namespace strelmine;

TEST_CASE("defaults produce a 20-region grid anchored at the origin") {
  FoodCourtConfig cfg;
  cfg.customers = 10;
  cfg.horizon_min = 30;
  auto data = generate_food_court(cfg, 1);
  REQUIRE(data.locations.size() == 20);
  CHECK(data.trace.num_locations() == 20);
  CHECK(data.trace.num_samples() == 31);
  CHECK(data.trace.variables() == std::vector<std::string>{"occupancy"});
  // Neighboring cell centers sit one cell apart on the ground.
  double d = haversine_m(data.locations[0], data.locations[1]);
  CHECK(d == doctest::Approx(cfg.cell_m).epsilon(1e-3));
}

TEST_CASE("zero customers give an all-zero trace") {
  FoodCourtConfig cfg;
  cfg.customers = 0;
  cfg.horizon_min = 15;
  auto data = generate_food_court(cfg, 7);
  for (int loc = 0; loc < data.trace.num_locations(); ++loc) {
    for (int t = 0; t < data.trace.num_samples(); ++t) {
      CHECK(data.trace.value(loc, t, 0) == 0.0);
    }
  }
}

TEST_CASE("occupancy is conserved and starts at the entrance") {
  FoodCourtConfig cfg;
  cfg.customers = 57;
  cfg.horizon_min = 60;
  auto data = generate_food_court(cfg, 42);
  CHECK(data.trace.value(cfg.entrance, 0, 0) == 57.0);
  for (int t = 0; t < data.trace.num_samples(); ++t) {
    double total = 0.0;
    for (int loc = 0; loc < data.trace.num_locations(); ++loc) {
      total += data.trace.value(loc, t, 0);
    }
    CHECK(total == 57.0);
  }
}

TEST_CASE("identical config and seed reproduce the trace bit for bit") {
  FoodCourtConfig cfg;
  cfg.customers = 40;
  cfg.horizon_min = 45;
  auto a = generate_food_court(cfg, 99);
  auto b = generate_food_court(cfg, 99);
  for (int loc = 0; loc < a.trace.num_locations(); ++loc) {
    for (int t = 0; t < a.trace.num_samples(); ++t) {
      CHECK(a.trace.value(loc, t, 0) == b.trace.value(loc, t, 0));
    }
  }
  auto c = generate_food_court(cfg, 100);
  bool any_difference = false;
  for (int loc = 0; loc < a.trace.num_locations() && !any_difference; ++loc) {
    for (int t = 0; t < a.trace.num_samples() && !any_difference; ++t) {
      any_difference = a.trace.value(loc, t, 0) != c.trace.value(loc, t, 0);
    }
  }
  CHECK(any_difference);
}

TEST_CASE("popular regions end up busier than the typical floor cell") {
  FoodCourtConfig cfg;
  cfg.customers = 120;
  cfg.horizon_min = 180;
  auto data = generate_food_court(cfg, 2026);

  auto peak = [&](int loc) {
    double best = 0.0;
    for (int t = 0; t < data.trace.num_samples(); ++t) {
      best = std::max(best, data.trace.value(loc, t, 0));
    }
    return best;
  };
  std::vector<double> floor_peaks;
  for (int loc = 0; loc < data.trace.num_locations(); ++loc) {
    if (std::find(cfg.popular.begin(), cfg.popular.end(), loc) == cfg.popular.end() &&
        loc != cfg.entrance) {
      floor_peaks.push_back(peak(loc));
    }
  }
  std::sort(floor_peaks.begin(), floor_peaks.end());
  const double floor_median = floor_peaks[floor_peaks.size() / 2];
  for (int p : cfg.popular) {
    CHECK(peak(p) > floor_median);
  }
}

TEST_CASE("config validation") {
  FoodCourtConfig cfg;
  cfg.entrance = 99;
  CHECK_THROWS_AS(generate_food_court(cfg, 1), config_error);
  cfg = {};
  cfg.popular = {55};
  CHECK_THROWS_AS(generate_food_court(cfg, 1), config_error);
  cfg = {};
  cfg.popular_prob = 1.5;
  CHECK_THROWS_AS(generate_food_court(cfg, 1), config_error);
}

TEST_CASE("config json round trip") {
  FoodCourtConfig cfg;
  cfg.customers = 33;
  cfg.popular = {2, 5};
  auto text = foodcourt_config_to_json(cfg);
  auto back = foodcourt_config_from_json(text);
  CHECK(back.customers == 33);
  CHECK(back.popular == std::vector<int>{2, 5});
  CHECK(back.grid_cols == cfg.grid_cols);
  CHECK_THROWS_AS(foodcourt_config_from_json("{nope"), config_error);
}

TEST_CASE("generated locations feed the model builders") {
  FoodCourtConfig cfg;
  cfg.customers = 5;
  cfg.horizon_min = 10;
  auto data = generate_food_court(cfg, 3);
  auto model = build_enhanced_msg(data.locations, 2.0);
  CHECK(model.num_locations() == 20);
  CHECK(model.num_undirected_edges() >= 19);
  CHECK(isolated_nodes(model).empty());
}
