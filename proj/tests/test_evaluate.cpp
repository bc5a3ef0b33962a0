#include <doctest.h>

#include <cmath>
#include <functional>

#include "strelmine/errors.hpp"
#include "strelmine/evaluate.hpp"
#include "strelmine/parser.hpp"

#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace strelmine;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Instance {
  SpatialModel model;
  SpatioTemporalTrace trace;
};

Instance random_instance(Rng& rng, int max_nodes = 5, int max_samples = 6) {
  const int n = rng.uniform_int(1, max_nodes);
  auto locs = gen::random_locations(rng, n);
  auto model = gen::random_model(rng, locs, rng.uniform(0.3, 0.9));
  std::vector<std::string> ids;
  for (const auto& l : model.locations()) ids.push_back(l.id);
  auto trace = gen::random_trace(rng, ids, rng.uniform_int(2, max_samples), {"x", "y"});
  return {std::move(model), std::move(trace)};
}

}  // namespace

TEST_CASE("single isolated node: somewhere sees only the trivial route") {
  std::vector<Location> locs{{"solo", 10.0, 20.0, ""}};
  SpatialModel model(locs, {});
  SpatioTemporalTrace trace({"solo"}, {"x"}, {0.0});
  trace.set_value(0, 0, 0, 5.0);
  auto f = parse_formula("somewhere[0,100] (x > 0)");
  CHECK(robustness(f, model, trace, 0, 0) == 5.0);
  CHECK(satisfies(f, model, trace, 0, 0));
  // Positive lower distance bound excludes the trivial route.
  auto g = parse_formula("somewhere[1,100] (x > 0)");
  CHECK(robustness(g, model, trace, 0, 0) == -kInf);
  CHECK_FALSE(satisfies(g, model, trace, 0, 0));
}

TEST_CASE("atoms, boolean connectives, boundary cases") {
  std::vector<Location> locs{{"a", 10.0, 20.0, ""}};
  SpatialModel model(locs, {});
  SpatioTemporalTrace trace({"a"}, {"x"}, {0.0, 1.0});
  trace.set_value(0, 0, 0, 3.0);
  trace.set_value(0, 1, 0, 7.0);

  CHECK(robustness(parse_formula("true"), model, trace, 0, 0) == kInf);
  CHECK(robustness(parse_formula("x > 1"), model, trace, 0, 0) == 2.0);
  CHECK(robustness(parse_formula("x < 1"), model, trace, 0, 0) == -2.0);
  CHECK(robustness(parse_formula("x >= 3"), model, trace, 0, 0) == 0.0);
  // Strict vs non-strict atoms share robustness but not satisfaction.
  CHECK(robustness(parse_formula("x > 3"), model, trace, 0, 0) == 0.0);
  CHECK(satisfies(parse_formula("x >= 3"), model, trace, 0, 0));
  CHECK_FALSE(satisfies(parse_formula("x > 3"), model, trace, 0, 0));
  CHECK(robustness(parse_formula("!(x > 1)"), model, trace, 0, 0) == -2.0);
  CHECK(robustness(parse_formula("x > 1 & x < 10"), model, trace, 0, 0) == 2.0);
  CHECK(robustness(parse_formula("x > 5 | x < 1"), model, trace, 0, 0) == -2.0);
}

TEST_CASE("until respects the window and clips at the horizon") {
  std::vector<Location> locs{{"a", 10.0, 20.0, ""}};
  SpatialModel model(locs, {});
  SpatioTemporalTrace trace({"a"}, {"x"}, {0.0, 1.0, 2.0, 3.0});
  for (int t = 0; t < 4; ++t) trace.set_value(0, t, 0, t == 2 ? 9.0 : 1.0);

  // x exceeds 5 exactly at sample 2.
  CHECK(robustness(parse_formula("F[0,3] (x > 5)"), model, trace, 0, 0) == 4.0);
  CHECK(robustness(parse_formula("F[0,1] (x > 5)"), model, trace, 0, 0) == -4.0);
  CHECK(robustness(parse_formula("F[3,4] (x > 5)"), model, trace, 0, 0) == -8.0);
  // Window fully past the horizon: empty candidate set.
  CHECK(robustness(parse_formula("F[1,2] (x > 0)"), model, trace, 0, 3) == -kInf);
  CHECK(robustness(parse_formula("G[1,2] (x > 0)"), model, trace, 0, 3) == kInf);
  // Until needs the prefix to hold strictly before the witness.
  CHECK(robustness(parse_formula("(x < 5) U[0,3] (x > 5)"), model, trace, 0, 0) == 4.0);
  CHECK(satisfies(parse_formula("(x < 2) U[0,3] (x > 5)"), model, trace, 0, 0));
}

TEST_CASE("reach passes through its first argument") {
  // Chain a - b - c, roughly 1.1 km per hop.
  std::vector<Location> locs{{"a", 0.0, 0.0, ""}, {"b", 0.0, 0.01, ""}, {"c", 0.0, 0.02, ""}};
  auto model = build_full(locs);
  SpatioTemporalTrace trace({"a", "b", "c"}, {"x"}, {0.0});
  trace.set_value(0, 0, 0, 1.0);
  trace.set_value(1, 0, 0, -2.0);
  trace.set_value(2, 0, 0, 8.0);

  // Direct edge a-c is about 2.2 km, within [0, 3000]: reach c directly.
  auto f = parse_formula("(x > 0) R[0,3000] (x > 5)");
  CHECK(robustness(f, model, trace, 0, 0) == 1.0);
  // Restrict distance to force the two-hop route through b, whose value
  // drags the prefix minimum down.
  auto delta = build_delta(locs, 1200.0);
  CHECK(robustness(f, delta, trace, 0, 0) == -2.0);
  CHECK_FALSE(satisfies(f, delta, trace, 0, 0));
}

TEST_CASE("escape needs distance from the start") {
  std::vector<Location> locs{{"a", 0.0, 0.0, ""}, {"b", 0.0, 0.01, ""}, {"c", 0.0, 0.02, ""}};
  auto delta = build_delta(locs, 1200.0);  // chain topology
  SpatioTemporalTrace trace({"a", "b", "c"}, {"x"}, {0.0});
  trace.set_value(0, 0, 0, 4.0);
  trace.set_value(1, 0, 0, 3.0);
  trace.set_value(2, 0, 0, 2.0);

  // Escaping to >= 2 km means walking a-b-c; the worst value on the way is 2.
  auto f = parse_formula("E[2000,inf] (x > 0)");
  CHECK(robustness(f, delta, trace, 0, 0) == 2.0);
  // The self route satisfies [0, inf] trivially with the local value.
  auto g = parse_formula("E[0,inf] (x > 0)");
  CHECK(robustness(g, delta, trace, 2, 0) == 2.0);
}

TEST_CASE("evaluator validation errors") {
  std::vector<Location> locs{{"a", 10.0, 20.0, ""}};
  SpatialModel model(locs, {});
  SpatioTemporalTrace trace({"a"}, {"x"}, {0.0});
  trace.set_value(0, 0, 0, 0.0);
  CHECK_THROWS_AS(robustness(parse_formula("zzz > 0"), model, trace, 0, 0), eval_error);
  CHECK_THROWS_AS(robustness(parse_formula("x > 0"), model, trace, 0, 5), eval_error);
  CHECK_THROWS_AS(robustness(parse_formula("x > 0"), model, trace, 3, 0), eval_error);
  auto holed = parse_formula("x > $c", {.allow_holes = true});
  CHECK_THROWS_AS(robustness(holed, model, trace, 0, 0), eval_error);
  SpatioTemporalTrace other({"someone_else"}, {"x"}, {0.0});
  other.set_value(0, 0, 0, 0.0);
  CHECK_THROWS_AS(robustness(parse_formula("x > 0"), model, other, 0, 0), data_error);
}

TEST_CASE("robustness equals the exhaustive route/time oracle") {
  Rng rng(2024);
  gen::FormulaGenConfig cfg;
  int checked = 0;
  for (int round = 0; round < 300; ++round) {
    auto inst = random_instance(rng);
    cfg.dist_scale = std::max(100.0, gen::metric_diameter(inst.model));
    cfg.time_horizon = inst.trace.horizon() + 1.0;
    auto f = gen::random_formula(rng, cfg, 3);
    CAPTURE(to_string(*f));

    Evaluator ev(inst.model, inst.trace, f);
    oracle::Robustness oracle_rob(inst.model, inst.trace);
    oracle::Satisfaction oracle_sat(inst.model, inst.trace);
    for (int loc = 0; loc < inst.model.num_locations(); ++loc) {
      for (int t = 0; t < inst.trace.num_samples(); ++t) {
        const double expect = oracle_rob.eval(*f, loc, t);
        const double got = ev.robustness(loc, t);
        CHECK(got == expect);
        CHECK(ev.satisfies(loc, t) == oracle_sat.eval(*f, loc, t));
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("boolean satisfaction matches the robustness sign off zero") {
  Rng rng(77);
  gen::FormulaGenConfig cfg;
  int agreements = 0;
  for (int round = 0; round < 250; ++round) {
    auto inst = random_instance(rng);
    cfg.dist_scale = std::max(100.0, gen::metric_diameter(inst.model));
    cfg.time_horizon = inst.trace.horizon() + 1.0;
    auto f = gen::random_formula(rng, cfg, 3);
    Evaluator ev(inst.model, inst.trace, f);
    for (int loc = 0; loc < inst.model.num_locations(); ++loc) {
      double rho = ev.robustness(loc, 0);
      if (rho == 0.0) continue;
      CHECK(ev.satisfies(loc, 0) == (rho > 0.0));
      ++agreements;
    }
  }
  CHECK(agreements > 400);
}

TEST_CASE("desugaring congruence: identical robustness") {
  Rng rng(31);
  gen::FormulaGenConfig cfg;
  for (int round = 0; round < 120; ++round) {
    auto inst = random_instance(rng);
    cfg.dist_scale = std::max(100.0, gen::metric_diameter(inst.model));
    auto f = gen::random_formula(rng, cfg, 3);
    auto d = desugar(f);
    Evaluator ev1(inst.model, inst.trace, f);
    Evaluator ev2(inst.model, inst.trace, d);
    for (int loc = 0; loc < inst.model.num_locations(); ++loc) {
      CHECK(ev1.robustness(loc, 0) == ev2.robustness(loc, 0));
    }
  }
}

TEST_CASE("everywhere is the dual of somewhere at the robustness level") {
  Rng rng(32);
  gen::FormulaGenConfig cfg;
  for (int round = 0; round < 120; ++round) {
    auto inst = random_instance(rng);
    cfg.dist_scale = std::max(100.0, gen::metric_diameter(inst.model));
    auto inner = gen::random_formula(rng, cfg, 2);
    auto iv = gen::random_dist_interval(rng, cfg);
    auto ew = f_everywhere(iv, inner);
    auto dual = f_not(f_somewhere(iv, f_not(inner)));
    Evaluator ev1(inst.model, inst.trace, ew);
    Evaluator ev2(inst.model, inst.trace, dual);
    for (int loc = 0; loc < inst.model.num_locations(); ++loc) {
      CHECK(ev1.robustness(loc, 0) == ev2.robustness(loc, 0));
    }
  }
}

TEST_CASE("hop bound sufficiency: deeper enumeration never changes the value") {
  // For a finite upper distance bound, enumerating routes past the computed
  // hop bound cannot add candidates; the implementation must agree with an
  // oracle run three hops deeper.
  Rng rng(33);
  gen::FormulaGenConfig cfg;
  cfg.allow_inf_upper = false;
  for (int round = 0; round < 60; ++round) {
    auto inst = random_instance(rng, 4, 3);
    cfg.dist_scale = std::max(100.0, gen::metric_diameter(inst.model));
    auto f = f_somewhere(gen::random_dist_interval(rng, cfg), gen::random_atom(rng, cfg));
    const double d1 = f->interval.lo.value, d2 = f->interval.hi.value;
    const int deeper = oracle::hop_bound(inst.model, d2) + 3;

    double base = -oracle::kInf;
    oracle::Robustness rob(inst.model, inst.trace);
    oracle::for_each_candidate(
        inst.model, 0, d1, d2,
        [&](int cand, const auto&) { base = std::max(base, rob.eval(*f->kids[0], cand, 0)); },
        deeper);
    CHECK(robustness(f, inst.model, inst.trace, 0, 0) == base);
  }
}

TEST_CASE("hop bound formula") {
  std::vector<Location> locs{{"a", 0.0, 0.0, ""}, {"b", 0.0, 0.01, ""}};
  SpatialModel model(locs, {{0, 1, 100.0}});
  CHECK(reach_hop_bound(model, 0.0) == 1);
  CHECK(reach_hop_bound(model, 99.0) == 1);
  CHECK(reach_hop_bound(model, 100.0) == 2);  // need k*100 > 100
  CHECK(reach_hop_bound(model, 350.0) == 4);
  CHECK(reach_hop_bound(model, kInf) == 2);  // falls back to |L|
  SpatialModel empty(locs, {});
  CHECK(reach_hop_bound(empty, 1000.0) == 0);
}
