#include "strelmine/boxtree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "strelmine/errors.hpp"
#include "strelmine/rng.hpp"

namespace strelmine {

int DecisionTree::predict(const std::vector<double>& x) const {
  int id = root;
  while (!nodes[id].is_leaf()) {
    id = x[nodes[id].feature] < nodes[id].threshold ? nodes[id].left : nodes[id].right;
  }
  return nodes[id].label;
}

int DecisionTree::num_leaves() const {
  int count = 0;
  for (const auto& n : nodes) {
    if (n.is_leaf()) ++count;
  }
  return count;
}

int DecisionTree::depth() const {
  std::vector<std::pair<int, int>> stack{{root, 0}};
  int best = 0;
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes[id].is_leaf()) {
      stack.push_back({nodes[id].left, d + 1});
      stack.push_back({nodes[id].right, d + 1});
    }
  }
  return best;
}

namespace {

// Strictly positive improvements only; exact-zero gains (and FP dust) stop
// the recursion.
constexpr double kGainEpsilon = 1e-12;

double gini(const std::map<int, int>& counts, int total) {
  double g = 1.0;
  for (const auto& [label, c] : counts) {
    const double p = static_cast<double>(c) / total;
    g -= p * p;
  }
  return g;
}

int majority_label(const std::map<int, int>& counts) {
  int best_label = 0, best_count = -1;
  for (const auto& [label, c] : counts) {
    if (c > best_count) {  // map order makes ties pick the smallest label
      best_count = c;
      best_label = label;
    }
  }
  return best_label;
}

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double weighted_gini = 0.0;
};

Split best_split(const Points& points, const std::vector<int>& labels,
                 const std::vector<int>& idx) {
  const int n = static_cast<int>(idx.size());
  const std::size_t dims = points[idx[0]].size();
  std::map<int, int> total_counts;
  for (int i : idx) ++total_counts[labels[i]];
  const double node_gini = gini(total_counts, n);

  Split best;
  for (std::size_t f = 0; f < dims; ++f) {
    std::vector<int> order = idx;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return points[a][f] < points[b][f] || (points[a][f] == points[b][f] && a < b);
    });
    std::map<int, int> left_counts;
    std::map<int, int> right_counts = total_counts;
    int n_left = 0;
    for (int i = 0; i + 1 < n; ++i) {
      const int p = order[i];
      ++left_counts[labels[p]];
      if (--right_counts[labels[p]] == 0) right_counts.erase(labels[p]);
      ++n_left;
      const double a = points[p][f];
      const double b = points[order[i + 1]][f];
      if (a == b) continue;
      const double threshold = 0.5 * (a + b);
      const double weighted =
          (n_left * gini(left_counts, n_left) + (n - n_left) * gini(right_counts, n - n_left)) /
          n;
      if (node_gini - weighted <= kGainEpsilon) continue;
      if (!best.found || weighted < best.weighted_gini ||
          (weighted == best.weighted_gini &&
           (static_cast<int>(f) < best.feature ||
            (static_cast<int>(f) == best.feature && threshold < best.threshold)))) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = threshold;
        best.weighted_gini = weighted;
      }
    }
  }
  return best;
}

int build_node(DecisionTree& tree, const Points& points, const std::vector<int>& labels,
               const std::vector<int>& idx, int depth, int max_depth) {
  std::map<int, int> counts;
  for (int i : idx) ++counts[labels[i]];

  const int id = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back({});
  if (counts.size() == 1 || (max_depth > 0 && depth >= max_depth)) {
    tree.nodes[id].label = majority_label(counts);
    return id;
  }
  Split split = best_split(points, labels, idx);
  if (!split.found) {
    tree.nodes[id].label = majority_label(counts);
    return id;
  }
  std::vector<int> left_idx, right_idx;
  for (int i : idx) {
    (points[i][split.feature] < split.threshold ? left_idx : right_idx).push_back(i);
  }
  tree.nodes[id].feature = split.feature;
  tree.nodes[id].threshold = split.threshold;
  tree.nodes[id].left = build_node(tree, points, labels, left_idx, depth + 1, max_depth);
  tree.nodes[id].right = build_node(tree, points, labels, right_idx, depth + 1, max_depth);
  return id;
}

}  // namespace

DecisionTree fit_tree(const Points& points, const std::vector<int>& labels, int max_depth) {
  if (points.empty() || labels.size() != points.size()) {
    throw data_error("fit_tree needs matching non-empty points and labels");
  }
  DecisionTree tree;
  tree.max_depth = max_depth;
  std::vector<int> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  tree.root = build_node(tree, points, labels, idx, 0, max_depth);
  return tree;
}

double tree_accuracy(const DecisionTree& tree, const Points& points,
                     const std::vector<int>& labels) {
  int correct = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (tree.predict(points[i]) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / points.size();
}

double kfold_cv(const Points& points, const std::vector<int>& labels, int depth, int K,
                std::uint64_t seed) {
  const int n = static_cast<int>(points.size());
  if (K < 2 || K > n) throw data_error("K must satisfy 2 <= K <= #points");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  // Near-equal folds: the first n % K folds take one extra point.
  std::vector<std::vector<int>> folds(K);
  const int base = n / K;
  const int extra = n % K;
  int cursor = 0;
  for (int f = 0; f < K; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    for (int i = 0; i < size; ++i) folds[f].push_back(order[cursor++]);
  }

  double acc_sum = 0.0;
  for (int f = 0; f < K; ++f) {
    Points train_pts;
    std::vector<int> train_labels;
    for (int g = 0; g < K; ++g) {
      if (g == f) continue;
      for (int i : folds[g]) {
        train_pts.push_back(points[i]);
        train_labels.push_back(labels[i]);
      }
    }
    DecisionTree tree = fit_tree(train_pts, train_labels, depth);
    int correct = 0;
    for (int i : folds[f]) {
      if (tree.predict(points[i]) == labels[i]) ++correct;
    }
    acc_sum += folds[f].empty() ? 1.0 : static_cast<double>(correct) / folds[f].size();
  }
  return acc_sum / K;
}

std::optional<DecisionTree> prune_search(const Points& points, const std::vector<int>& labels,
                                         int N, int K, double acc_threshold,
                                         std::uint64_t seed) {
  if (N < 1) throw data_error("prune_search needs N >= 1");
  for (int depth = 1; depth <= N; ++depth) {
    if (kfold_cv(points, labels, depth, K, seed) > acc_threshold) {
      return fit_tree(points, labels, depth);
    }
  }
  return std::nullopt;
}

bool HyperBox::contains(const std::vector<double>& x) const {
  for (std::size_t d = 0; d < dims.size(); ++d) {
    if (x[d] < dims[d].lo) return false;
    if (dims[d].hi_closed ? x[d] > dims[d].hi : x[d] >= dims[d].hi) return false;
  }
  return true;
}

std::map<int, std::vector<HyperBox>> paths_to_boxes(const DecisionTree& tree,
                                                    const PstrelTemplate& tmpl) {
  std::map<int, std::vector<HyperBox>> out;
  HyperBox start;
  for (const auto& p : tmpl.params) start.dims.push_back({p.inf, p.sup, true});

  std::vector<std::pair<int, HyperBox>> stack{{tree.root, start}};
  while (!stack.empty()) {
    auto [id, box] = stack.back();
    stack.pop_back();
    const auto& node = tree.nodes[id];
    if (node.is_leaf()) {
      out[node.label].push_back(box);
      continue;
    }
    HyperBox left = box;
    auto& lhs = left.dims[node.feature];
    if (node.threshold < lhs.hi) {
      lhs.hi = node.threshold;
      lhs.hi_closed = false;
    } else if (node.threshold == lhs.hi) {
      lhs.hi_closed = false;
    }
    HyperBox right = box;
    right.dims[node.feature].lo = std::max(right.dims[node.feature].lo, node.threshold);
    if (!(left.dims[node.feature].lo < left.dims[node.feature].hi) ||
        !(right.dims[node.feature].lo < right.dims[node.feature].hi)) {
      throw eval_error("decision tree path produced an empty region");
    }
    stack.push_back({node.left, left});
    stack.push_back({node.right, right});
  }
  return out;
}

std::vector<CornerLiteral> box_to_formula(const HyperBox& box, const PstrelTemplate& tmpl,
                                          const std::vector<Polarity>& polarity) {
  const std::size_t dims = tmpl.params.size();
  std::vector<double> permissive(dims), restrictive(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    const bool pos = polarity[d] == Polarity::Pos;
    permissive[d] = pos ? box.dims[d].hi : box.dims[d].lo;
    restrictive[d] = pos ? box.dims[d].lo : box.dims[d].hi;
  }
  std::vector<CornerLiteral> literals;
  bool globally_permissive = true;
  for (std::size_t d = 0; d < dims; ++d) {
    const bool pos = polarity[d] == Polarity::Pos;
    const double easy_bound = pos ? tmpl.params[d].sup : tmpl.params[d].inf;
    if (permissive[d] != easy_bound) globally_permissive = false;
  }
  if (!globally_permissive) literals.push_back({false, permissive});
  for (std::size_t d = 0; d < dims; ++d) {
    const bool pos = polarity[d] == Polarity::Pos;
    const double hard_bound = pos ? tmpl.params[d].inf : tmpl.params[d].sup;
    if (restrictive[d] == hard_bound) continue;  // at the domain edge; vacuous
    CornerLiteral lit;
    lit.negated = true;
    lit.corner = permissive;
    lit.corner[d] = restrictive[d];
    literals.push_back(std::move(lit));
  }
  return literals;
}

std::string format_at_resolution(double value, double delta) {
  int decimals = 0;
  if (delta > 0.0 && delta < 1.0) {
    decimals = std::min(12, static_cast<int>(std::ceil(-std::log10(delta) - 1e-9)));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

namespace {

std::string corner_call(const std::vector<double>& corner, const PstrelTemplate& tmpl) {
  std::string s = "phi(";
  for (std::size_t i = 0; i < corner.size(); ++i) {
    if (i) s += ", ";
    s += format_at_resolution(corner[i], tmpl.params[i].delta);
  }
  s += ")";
  return s;
}

ParamValuation rounded_valuation(const std::vector<double>& corner, const PstrelTemplate& tmpl) {
  ParamValuation v(corner.size());
  for (std::size_t i = 0; i < corner.size(); ++i) {
    v[i] = std::stod(format_at_resolution(corner[i], tmpl.params[i].delta));
  }
  return v;
}

}  // namespace

std::string literal_box_form(const std::vector<CornerLiteral>& literals,
                             const PstrelTemplate& tmpl) {
  if (literals.empty()) return "true";
  std::string s;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    if (i) s += " & ";
    if (literals[i].negated) s += "!";
    s += corner_call(literals[i].corner, tmpl);
  }
  return s;
}

std::string literal_dsl_form(const std::vector<CornerLiteral>& literals,
                             const PstrelTemplate& tmpl) {
  if (literals.empty()) return "true";
  std::string s;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    if (i) s += " & ";
    auto inst = instantiate(tmpl, rounded_valuation(literals[i].corner, tmpl));
    if (literals[i].negated) {
      s += "!(" + to_string(*inst) + ")";
    } else {
      s += "(" + to_string(*inst) + ")";
    }
  }
  return s;
}

std::vector<ClusterFormula> cluster_formulas(const DecisionTree& tree,
                                             const PstrelTemplate& tmpl) {
  const auto polarity = validate_template(tmpl);
  auto grouped = paths_to_boxes(tree, tmpl);
  std::vector<ClusterFormula> out;
  for (const auto& [label, boxes] : grouped) {
    ClusterFormula cf;
    cf.label = label;
    cf.boxes = boxes;
    for (const auto& box : boxes) {
      cf.box_literals.push_back(box_to_formula(box, tmpl, polarity));
    }
    const bool many = cf.box_literals.size() > 1;
    for (std::size_t b = 0; b < cf.box_literals.size(); ++b) {
      if (b) {
        cf.box_form += " | ";
        cf.dsl_form += " | ";
      }
      std::string bf = literal_box_form(cf.box_literals[b], tmpl);
      std::string df = literal_dsl_form(cf.box_literals[b], tmpl);
      const bool multi_lit = cf.box_literals[b].size() > 1;
      cf.box_form += (many && multi_lit) ? "(" + bf + ")" : bf;
      cf.dsl_form += (many && multi_lit) ? "(" + df + ")" : df;
    }
    out.push_back(std::move(cf));
  }
  return out;
}

std::string tree_to_json(const DecisionTree& tree, const PstrelTemplate& tmpl) {
  nlohmann::ordered_json doc;
  doc["max_depth"] = tree.max_depth;
  doc["root"] = tree.root;
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (const auto& p : tmpl.params) features.push_back(p.name);
  doc["features"] = features;
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto& n : tree.nodes) {
    nlohmann::ordered_json j;
    if (n.is_leaf()) {
      j["label"] = n.label;
    } else {
      j["feature"] = n.feature;
      j["threshold"] = n.threshold;
      j["left"] = n.left;
      j["right"] = n.right;
    }
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

}  // namespace strelmine
