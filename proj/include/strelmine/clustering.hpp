#pragma once

#include <map>
#include <string>
#include <vector>

namespace strelmine {

using Points = std::vector<std::vector<double>>;

// Per-dimension min-max scaling to [0, 1]. Zero-variance dimensions are
// dropped (their indices reported through dropped_dims); scaling identical
// points in every dimension yields zero-dimensional points.
Points minmax_normalize(const Points& points, std::vector<int>* dropped_dims = nullptr);

struct MergeStep {
  int a = 0;  // cluster ids: the smallest member point index
  int b = 0;  // a < b
  double height = 0.0;
};

struct Dendrogram {
  std::vector<MergeStep> merges;  // n - 1 steps
};

// Bottom-up complete-linkage merging over the Euclidean metric. Ties on the
// merge distance are broken by the smallest (id, id) pair; a merged cluster
// keeps the smaller id.
Dendrogram ahc_dendrogram(const Points& points);

struct ClusterAssignment {
  std::vector<int> labels;  // per point, 1..num_clusters
  int num_clusters = 0;
};

// Cuts the complete-linkage dendrogram at k clusters. Labels are assigned
// 1..k in order of each cluster's smallest point index.
ClusterAssignment ahc_complete(const Points& points, int k, bool normalize = true);

// Mean silhouette score in [-1, 1]; singleton clusters contribute 0.
// Distances are measured on the given points; normalize beforehand when the
// dimensions mix units. Throws data_error when fewer than 2 clusters.
double silhouette(const Points& points, const std::vector<int>& labels);

struct ChooseKResult {
  int k = 0;
  double best_score = 0.0;
  std::map<int, double> scores;  // per candidate k
};

// Picks k in [kmin, kmax] maximizing the silhouette of the complete-linkage
// cut; ties go to the smallest k.
ChooseKResult choose_k(const Points& points, int kmin, int kmax, bool normalize = true);

}  // namespace strelmine
