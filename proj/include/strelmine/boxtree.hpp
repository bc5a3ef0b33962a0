#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strelmine/clustering.hpp"
#include "strelmine/pstrel.hpp"

namespace strelmine {

// Axis-aligned classification tree. Internal nodes route x[feature] <
// threshold to the left child and x[feature] >= threshold to the right.
struct DecisionTree {
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = -1;  // leaves only

    bool is_leaf() const { return left < 0; }
  };

  std::vector<Node> nodes;
  int root = 0;
  int max_depth = 0;

  int predict(const std::vector<double>& x) const;
  int num_leaves() const;
  int depth() const;
};

// Greedy top-down fit minimizing weighted Gini impurity; candidate
// thresholds are midpoints between consecutive distinct sorted feature
// values. Splitting stops at purity, at max_depth, or when no split
// reduces impurity; ties prefer the lowest feature index, then the lowest
// threshold. Leaf labels are the majority (ties to the smallest label).
// max_depth <= 0 means unlimited.
DecisionTree fit_tree(const Points& points, const std::vector<int>& labels, int max_depth);

double tree_accuracy(const DecisionTree& tree, const Points& points,
                     const std::vector<int>& labels);

// Mean accuracy of K-fold cross validation at the given depth: the data is
// shuffled once under the seed and split into K near-equal folds.
double kfold_cv(const Points& points, const std::vector<int>& labels, int depth, int K,
                std::uint64_t seed);

// Smallest depth in 1..N whose cross-validation accuracy exceeds
// acc_threshold; the returned tree is refit at that depth on all data.
// nullopt when no depth qualifies.
std::optional<DecisionTree> prune_search(const Points& points, const std::vector<int>& labels,
                                         int N, int K, double acc_threshold, std::uint64_t seed);

// Axis-aligned region of parameter space. Sides whose upper bound came from
// a `< threshold` edge are half-open; sides ending at the template bound
// are closed. Printed corners use the side values as closed endpoints.
struct HyperBox {
  struct Side {
    double lo = 0.0;
    double hi = 0.0;
    bool hi_closed = true;
  };
  std::vector<Side> dims;

  bool contains(const std::vector<double>& x) const;
};

// Root-to-leaf paths intersected per dimension (at most one lower and one
// upper bound survive; unbounded sides come from the template bounds),
// grouped by leaf label. The boxes tile the template's bounding domain with
// disjoint membership.
std::map<int, std::vector<HyperBox>> paths_to_boxes(const DecisionTree& tree,
                                                    const PstrelTemplate& tmpl);

// One instantiated-template literal: the template evaluated at a parameter
// corner, possibly negated.
struct CornerLiteral {
  bool negated = false;
  std::vector<double> corner;  // aligned with template params
};

// Represents a box as at most |P|+1 literals: the instantiation at the
// box's most permissive corner plus, for every dimension whose restrictive
// side lies strictly inside the template bounds, the negated instantiation
// with that one dimension moved to its restrictive edge. A most-permissive
// literal equal to the globally most permissive instantiation is dropped.
// An empty result means the box covers the whole domain (formula `true`).
std::vector<CornerLiteral> box_to_formula(const HyperBox& box, const PstrelTemplate& tmpl,
                                          const std::vector<Polarity>& polarity);

struct ClusterFormula {
  int label = 0;
  std::vector<HyperBox> boxes;
  std::vector<std::vector<CornerLiteral>> box_literals;  // per box
  std::string box_form;  // e.g. "!phi(17.09, 2100) & !phi(50, 1000.98)"
  std::string dsl_form;  // fully expanded formula text
};

std::vector<ClusterFormula> cluster_formulas(const DecisionTree& tree,
                                             const PstrelTemplate& tmpl);

// Rendering helpers. Corner values print at the resolution implied by each
// parameter's delta (e.g. delta 0.01 prints two decimals).
std::string format_at_resolution(double value, double delta);
std::string literal_box_form(const std::vector<CornerLiteral>& literals,
                             const PstrelTemplate& tmpl);
std::string literal_dsl_form(const std::vector<CornerLiteral>& literals,
                             const PstrelTemplate& tmpl);

std::string tree_to_json(const DecisionTree& tree, const PstrelTemplate& tmpl);

}  // namespace strelmine
