#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "strelmine/boxtree.hpp"
#include "strelmine/errors.hpp"
#include "strelmine/parser.hpp"
#include "strelmine/rng.hpp"

using namespace strelmine;

namespace {

PstrelTemplate two_param_template(double sup0 = 50.0, double sup1 = 2100.0) {
  // Wait-or-walk shape with one hole per parameter.
  PstrelTemplate tmpl;
  tmpl.skeleton = parse_formula("F[0,$tau] (B >= 1) | somewhere[0,$d] (S >= 1)",
                                {.allow_holes = true});
  tmpl.params = {ParamSpec{"tau", ParamKind::Timing, 0.0, sup0, 0.01, {}},
                 ParamSpec{"d", ParamKind::Spatial, 0.0, sup1, 0.01, {}}};
  tmpl.priority = {1, 0};
  return tmpl;
}

// Exhaustive split oracle: every midpoint on every feature, weighted Gini.
struct OracleSplit {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double weighted = 0.0;
};

double oracle_gini(const std::vector<int>& labels) {
  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  double g = 1.0;
  for (auto& [l, c] : counts) {
    double p = static_cast<double>(c) / labels.size();
    g -= p * p;
  }
  return g;
}

OracleSplit oracle_best_split(const Points& pts, const std::vector<int>& labels) {
  OracleSplit best;
  const int n = static_cast<int>(pts.size());
  const double node = oracle_gini(labels);
  for (std::size_t f = 0; f < pts[0].size(); ++f) {
    std::vector<double> values;
    for (const auto& p : pts) values.push_back(p[f]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const double t = 0.5 * (values[i] + values[i + 1]);
      std::vector<int> left, right;
      for (int p = 0; p < n; ++p) (pts[p][f] < t ? left : right).push_back(labels[p]);
      const double w =
          (left.size() * oracle_gini(left) + right.size() * oracle_gini(right)) / n;
      if (node - w <= 1e-12) continue;
      if (!best.found || w < best.weighted ||
          (w == best.weighted && (static_cast<int>(f) < best.feature ||
                                  (static_cast<int>(f) == best.feature && t < best.threshold)))) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = t;
        best.weighted = w;
      }
    }
  }
  return best;
}

// Random axis-aligned labeled boxes: recursively split the unit square and
// label leaves; points are sampled inside each leaf.
struct BoxData {
  Points points;
  std::vector<int> labels;
  int regions = 0;
};

BoxData random_box_data(Rng& rng, int max_depth_splits, int labels_count) {
  struct Region {
    double lo[2], hi[2];
  };
  std::vector<Region> regions{{{0.0, 0.0}, {1.0, 1.0}}};
  const int splits = rng.uniform_int(1, max_depth_splits);
  for (int s = 0; s < splits; ++s) {
    const std::size_t pick = rng.next_below(regions.size());
    Region r = regions[pick];
    const int dim = rng.uniform_int(0, 1);
    if (r.hi[dim] - r.lo[dim] < 0.1) continue;
    const double cut = rng.uniform(r.lo[dim] + 0.03, r.hi[dim] - 0.03);
    Region left = r, right = r;
    left.hi[dim] = cut;
    right.lo[dim] = cut;
    regions[pick] = left;
    regions.push_back(right);
  }
  BoxData data;
  data.regions = static_cast<int>(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const int label = 1 + static_cast<int>(rng.next_below(labels_count));
    const int count = rng.uniform_int(3, 8);
    for (int p = 0; p < count; ++p) {
      const auto& r = regions[i];
      data.points.push_back({rng.uniform(r.lo[0] + 1e-4, r.hi[0] - 1e-4),
                             rng.uniform(r.lo[1] + 1e-4, r.hi[1] - 1e-4)});
      data.labels.push_back(label);
    }
  }
  return data;
}

PstrelTemplate unit_template() {
  PstrelTemplate tmpl;
  tmpl.skeleton = parse_formula("F[0,$a] (x > 0) | somewhere[0,$b] (x > 0)",
                                {.allow_holes = true});
  tmpl.params = {ParamSpec{"a", ParamKind::Timing, 0.0, 1.0, 0.001, {}},
                 ParamSpec{"b", ParamKind::Spatial, 0.0, 1.0, 0.001, {}}};
  tmpl.priority = {0, 1};
  return tmpl;
}

}  // namespace

TEST_CASE("single-label data yields a single leaf") {
  Points pts{{0.1, 0.2}, {0.5, 0.6}, {0.9, 0.3}};
  auto tree = fit_tree(pts, {4, 4, 4}, 0);
  CHECK(tree.num_leaves() == 1);
  CHECK(tree.predict({0.0, 0.0}) == 4);
}

TEST_CASE("one threshold separates two labels; split matches the oracle") {
  Rng rng(11);
  for (int round = 0; round < 60; ++round) {
    const int n = rng.uniform_int(4, 20);
    Points pts;
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) {
      pts.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
      labels.push_back(pts.back()[0] < 0.5 ? 1 : 2);
    }
    if (std::set<int>(labels.begin(), labels.end()).size() < 2) continue;
    auto tree = fit_tree(pts, labels, 1);
    auto expect = oracle_best_split(pts, labels);
    REQUIRE(expect.found);
    REQUIRE_FALSE(tree.nodes[tree.root].is_leaf());
    CHECK(tree.nodes[tree.root].feature == expect.feature);
    CHECK(tree.nodes[tree.root].threshold == expect.threshold);
  }
}

TEST_CASE("random greedy splits match the exhaustive oracle at every node") {
  Rng rng(12);
  for (int round = 0; round < 40; ++round) {
    const int n = rng.uniform_int(5, 16);
    Points pts;
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) {
      pts.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
      labels.push_back(rng.uniform_int(1, 3));
    }
    auto tree = fit_tree(pts, labels, 1);
    auto expect = oracle_best_split(pts, labels);
    if (!expect.found) {
      CHECK(tree.nodes[tree.root].is_leaf());
    } else {
      CHECK(tree.nodes[tree.root].feature == expect.feature);
      CHECK(tree.nodes[tree.root].threshold == expect.threshold);
    }
  }
}

TEST_CASE("unpruned trees reach full training fidelity on box data") {
  Rng rng(13);
  for (int round = 0; round < 60; ++round) {
    auto data = random_box_data(rng, 6, 3);
    auto tree = fit_tree(data.points, data.labels, 0);
    CHECK(tree_accuracy(tree, data.points, data.labels) == 1.0);
  }
}

TEST_CASE("kfold behaviors") {
  // Identical points with one label: always perfect.
  Points same(12, {1.0, 2.0});
  std::vector<int> ones(12, 1);
  CHECK(kfold_cv(same, ones, 3, 4, 7) == 1.0);

  // Random labels over identical points approach the majority fraction.
  Rng rng(14);
  Points pts(60, {0.0, 0.0});
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) labels.push_back(i < 40 ? 1 : 2);
  const double acc = kfold_cv(pts, labels, 4, 5, 21);
  CHECK(acc == doctest::Approx(40.0 / 60.0).epsilon(0.15));

  // Determinism under a fixed seed.
  Points rnd;
  std::vector<int> rl;
  for (int i = 0; i < 30; ++i) {
    rnd.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
    rl.push_back(rng.uniform_int(1, 2));
  }
  CHECK(kfold_cv(rnd, rl, 3, 5, 1234) == kfold_cv(rnd, rl, 3, 5, 1234));
  CHECK_THROWS_AS(kfold_cv(rnd, rl, 3, 1, 9), data_error);
}

TEST_CASE("prune_search finds the smallest adequate depth") {
  // Separable by one threshold: depth 1 qualifies.
  Points pts;
  std::vector<int> labels;
  Rng rng(15);
  for (int i = 0; i < 40; ++i) {
    pts.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
    labels.push_back(pts.back()[1] < 0.5 ? 1 : 2);
  }
  auto tree = prune_search(pts, labels, 6, 5, 0.9, 3);
  REQUIRE(tree.has_value());
  CHECK(tree->max_depth == 1);

  // Threshold zero returns depth 1 immediately.
  auto loose = prune_search(pts, labels, 6, 5, 0.0, 3);
  REQUIRE(loose.has_value());
  CHECK(loose->max_depth == 1);

  // Impossible threshold yields nothing.
  CHECK_FALSE(prune_search(pts, labels, 2, 5, 1.1, 3).has_value());
}

TEST_CASE("paths_to_boxes intersects redundant bounds") {
  // Hand-built tree: p0 >= 3 twice along a path, then p1 < 2.
  DecisionTree tree;
  tree.max_depth = 3;
  tree.nodes.resize(7);
  tree.nodes[0] = {0, 3.0, 1, 2, -1};   // p0 < 3 -> leaf(1), else node 2
  tree.nodes[1] = {-1, 0.0, -1, -1, 1};
  tree.nodes[2] = {0, 5.0, 3, 4, -1};   // p0 < 5 -> leaf(2), else node 4
  tree.nodes[3] = {-1, 0.0, -1, -1, 2};
  tree.nodes[4] = {1, 2.0, 5, 6, -1};   // p1 < 2 -> leaf(3), else leaf(4)
  tree.nodes[5] = {-1, 0.0, -1, -1, 3};
  tree.nodes[6] = {-1, 0.0, -1, -1, 4};

  PstrelTemplate tmpl = unit_template();
  tmpl.params[0].inf = 0.0;
  tmpl.params[0].sup = 10.0;
  tmpl.params[1].inf = 0.0;
  tmpl.params[1].sup = 10.0;
  auto boxes = paths_to_boxes(tree, tmpl);
  REQUIRE(boxes.at(3).size() == 1);
  const auto& box = boxes.at(3)[0];
  CHECK(box.dims[0].lo == 5.0);
  CHECK(box.dims[0].hi == 10.0);
  CHECK(box.dims[0].hi_closed);
  CHECK(box.dims[1].lo == 0.0);
  CHECK(box.dims[1].hi == 2.0);
  CHECK_FALSE(box.dims[1].hi_closed);
}

TEST_CASE("box tiling is disjoint and covers the domain") {
  Rng rng(16);
  for (int round = 0; round < 20; ++round) {
    auto data = random_box_data(rng, 5, 3);
    auto tree = fit_tree(data.points, data.labels, 0);
    auto tmpl = unit_template();
    auto grouped = paths_to_boxes(tree, tmpl);
    std::vector<HyperBox> all;
    for (auto& [label, group] : grouped) {
      all.insert(all.end(), group.begin(), group.end());
    }
    for (int sample = 0; sample < 3000; ++sample) {
      std::vector<double> x{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
      int members = 0;
      for (const auto& box : all) members += box.contains(x) ? 1 : 0;
      CHECK(members == 1);
    }
  }
}

TEST_CASE("box membership equals tree prediction") {
  Rng rng(17);
  auto data = random_box_data(rng, 6, 3);
  auto tree = fit_tree(data.points, data.labels, 0);
  auto tmpl = unit_template();
  auto grouped = paths_to_boxes(tree, tmpl);
  for (int sample = 0; sample < 2000; ++sample) {
    std::vector<double> x{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
    const int predicted = tree.predict(x);
    int via_boxes = -1;
    for (const auto& [label, group] : grouped) {
      for (const auto& box : group) {
        if (box.contains(x)) via_boxes = label;
      }
    }
    CHECK(via_boxes == predicted);
  }
}

TEST_CASE("full-domain box renders as true") {
  auto tmpl = two_param_template();
  HyperBox box{{{0.0, 50.0, true}, {0.0, 2100.0, true}}};
  auto literals = box_to_formula(box, tmpl, infer_polarity(tmpl));
  CHECK(literals.empty());
  CHECK(literal_box_form(literals, tmpl) == "true");
  CHECK(literal_dsl_form(literals, tmpl) == "true");
}

TEST_CASE("corner literals keep only informative sides") {
  auto tmpl = two_param_template();  // tau in [0,50], d in [0,2100], both +
  auto pol = infer_polarity(tmpl);
  REQUIRE(pol[0] == Polarity::Pos);
  REQUIRE(pol[1] == Polarity::Pos);

  // Red-style box: restrictive sides strictly inside on both dimensions,
  // permissive corner at the global extreme.
  HyperBox red{{{17.09, 50.0, true}, {1000.98, 2100.0, true}}};
  auto lits = box_to_formula(red, tmpl, pol);
  REQUIRE(lits.size() == 2);
  CHECK(lits[0].negated);
  CHECK(lits[0].corner == std::vector<double>{17.09, 2100.0});
  CHECK(lits[1].negated);
  CHECK(lits[1].corner == std::vector<double>{50.0, 1000.98});
  CHECK(literal_box_form(lits, tmpl) == "!phi(17.09, 2100) & !phi(50, 1000.98)");

  // Green-style box: restrictive sides at the domain edge vanish.
  HyperBox green{{{0.0, 17.09, false}, {0.0, 2100.0, true}}};
  auto glits = box_to_formula(green, tmpl, pol);
  REQUIRE(glits.size() == 1);
  CHECK_FALSE(glits[0].negated);
  CHECK(literal_box_form(glits, tmpl) == "phi(17.09, 2100)");

  // Orange-style box keeps its positive corner and one negation.
  HyperBox orange{{{17.09, 50.0, true}, {0.0, 1000.98, false}}};
  auto olits = box_to_formula(orange, tmpl, pol);
  REQUIRE(olits.size() == 2);
  CHECK_FALSE(olits[0].negated);
  CHECK(literal_box_form(olits, tmpl) == "phi(50, 1000.98) & !phi(17.09, 1000.98)");
}

TEST_CASE("literal count never exceeds params plus one") {
  Rng rng(18);
  auto tmpl = unit_template();
  auto pol = infer_polarity(tmpl);
  for (int round = 0; round < 40; ++round) {
    auto data = random_box_data(rng, 6, 3);
    auto tree = fit_tree(data.points, data.labels, 0);
    for (const auto& [label, group] : paths_to_boxes(tree, tmpl)) {
      for (const auto& box : group) {
        CHECK(box_to_formula(box, tmpl, pol).size() <= tmpl.params.size() + 1);
      }
    }
  }
}

TEST_CASE("resolution-aware printing") {
  CHECK(format_at_resolution(17.0899999999, 0.01) == "17.09");
  CHECK(format_at_resolution(2100.0, 0.01) == "2100");
  CHECK(format_at_resolution(50.0, 0.01) == "50");
  CHECK(format_at_resolution(1000.98000001, 0.01) == "1000.98");
  CHECK(format_at_resolution(3.14159, 1.0) == "3");
  CHECK(format_at_resolution(3.14159, 0.001) == "3.142");
}

TEST_CASE("cluster formulas compose boxes per label") {
  Rng rng(19);
  auto data = random_box_data(rng, 5, 2);
  auto tree = fit_tree(data.points, data.labels, 0);
  auto tmpl = unit_template();
  auto formulas = cluster_formulas(tree, tmpl);
  CHECK_FALSE(formulas.empty());
  int total_boxes = 0;
  for (const auto& cf : formulas) {
    total_boxes += static_cast<int>(cf.boxes.size());
    CHECK(cf.box_literals.size() == cf.boxes.size());
    CHECK_FALSE(cf.box_form.empty());
    CHECK_FALSE(cf.dsl_form.empty());
  }
  CHECK(total_boxes == tree.num_leaves());
}

TEST_CASE("tree json export") {
  Points pts{{0.1, 0.1}, {0.9, 0.9}};
  auto tree = fit_tree(pts, {1, 2}, 0);
  auto text = tree_to_json(tree, unit_template());
  CHECK(text.find("\"features\"") != std::string::npos);
  CHECK(text.find("\"threshold\"") != std::string::npos);
}
