#include "strelmine/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "strelmine/errors.hpp"

namespace strelmine {

namespace {

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void check_points(const Points& points) {
  if (points.empty()) throw data_error("no points to cluster");
  for (const auto& p : points) {
    if (p.size() != points.front().size()) throw data_error("points have mixed dimensions");
    for (double v : p) {
      if (!std::isfinite(v)) throw data_error("points must be finite-valued");
    }
  }
}

}  // namespace

Points minmax_normalize(const Points& points, std::vector<int>* dropped_dims) {
  check_points(points);
  const std::size_t dims = points.front().size();
  std::vector<double> lo(dims, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dims, -std::numeric_limits<double>::infinity());
  for (const auto& p : points) {
    for (std::size_t d = 0; d < dims; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  std::vector<std::size_t> kept;
  for (std::size_t d = 0; d < dims; ++d) {
    if (hi[d] > lo[d]) {
      kept.push_back(d);
    } else if (dropped_dims) {
      dropped_dims->push_back(static_cast<int>(d));
    }
  }
  Points out(points.size(), std::vector<double>(kept.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const std::size_t d = kept[k];
      out[i][k] = (points[i][d] - lo[d]) / (hi[d] - lo[d]);
    }
  }
  return out;
}

Dendrogram ahc_dendrogram(const Points& points) {
  check_points(points);
  const int n = static_cast<int>(points.size());
  // Active clusters keyed by their smallest point index; linkage updated
  // with the complete-linkage rule dist(A+B, X) = max(dist(A,X), dist(B,X)),
  // which reproduces the from-scratch maxima exactly.
  std::vector<int> active;
  for (int i = 0; i < n; ++i) active.push_back(i);
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      dist[i][j] = dist[j][i] = euclid(points[i], points[j]);
    }
  }
  Dendrogram out;
  while (active.size() > 1) {
    int best_a = -1, best_b = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const int a = active[x], b = active[y];
        const double d = dist[a][b];
        if (d < best_d) {
          best_d = d;
          best_a = a;
          best_b = b;
        }
      }
    }
    // active is sorted ascending, so the scan already prefers the smallest
    // (a, b) pair among equal distances.
    out.merges.push_back({best_a, best_b, best_d});
    for (int c : active) {
      if (c == best_a || c == best_b) continue;
      dist[best_a][c] = dist[c][best_a] = std::max(dist[best_a][c], dist[best_b][c]);
    }
    active.erase(std::find(active.begin(), active.end(), best_b));
  }
  return out;
}

ClusterAssignment ahc_complete(const Points& points, int k, bool normalize) {
  check_points(points);
  const int n = static_cast<int>(points.size());
  if (k < 1 || k > n) throw data_error("cluster count k is out of range");
  const Points work = normalize ? minmax_normalize(points) : points;
  Dendrogram dendro = ahc_dendrogram(work);
  // Replay the first n - k merges with a union-find keyed on the smaller id.
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int m = 0; m < n - k; ++m) {
    parent[dendro.merges[m].b] = dendro.merges[m].a;
  }
  // Label clusters 1..k ordered by smallest member index.
  std::vector<int> rep_label(n, 0);
  ClusterAssignment out;
  out.labels.resize(n);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (rep_label[r] == 0) rep_label[r] = ++next;
    out.labels[i] = rep_label[r];
  }
  out.num_clusters = next;
  return out;
}

double silhouette(const Points& points, const std::vector<int>& labels) {
  check_points(points);
  const int n = static_cast<int>(points.size());
  if (labels.size() != points.size()) throw data_error("labels do not match points");
  std::vector<int> unique = labels;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (unique.size() < 2) throw data_error("silhouette needs at least 2 clusters");

  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double intra_sum = 0.0;
    int intra_count = 0;
    std::map<int, std::pair<double, int>> other;  // label -> (sum, count)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = euclid(points[i], points[j]);
      if (labels[j] == labels[i]) {
        intra_sum += d;
        ++intra_count;
      } else {
        auto& acc = other[labels[j]];
        acc.first += d;
        ++acc.second;
      }
    }
    if (intra_count == 0) continue;  // singleton contributes 0
    const double a = intra_sum / intra_count;
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [label, acc] : other) {
      b = std::min(b, acc.first / acc.second);
    }
    const double m = std::max(a, b);
    total += m > 0.0 ? (b - a) / m : 0.0;
  }
  return total / n;
}

ChooseKResult choose_k(const Points& points, int kmin, int kmax, bool normalize) {
  check_points(points);
  const int n = static_cast<int>(points.size());
  if (!(2 <= kmin && kmin <= kmax && kmax <= n)) {
    throw data_error("choose_k needs 2 <= kmin <= kmax <= #points");
  }
  const Points work = normalize ? minmax_normalize(points) : points;
  ChooseKResult out;
  out.k = 0;
  out.best_score = -std::numeric_limits<double>::infinity();
  for (int k = kmin; k <= kmax; ++k) {
    auto assignment = ahc_complete(work, k, /*normalize=*/false);
    const double s = silhouette(work, assignment.labels);
    out.scores[k] = s;
    if (s > out.best_score) {
      out.best_score = s;
      out.k = k;
    }
  }
  return out;
}

}  // namespace strelmine
