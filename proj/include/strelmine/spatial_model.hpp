#pragma once

#include <cstddef>
#include <vector>

#include "strelmine/geo.hpp"

namespace strelmine {

// Weighted location graph. Weights are distances in meters, strictly
// positive. All builders produce symmetric graphs; each undirected edge is
// stored once as (u < v) plus adjacency entries in both directions.
class SpatialModel {
public:
  struct Edge {
    int u = 0;
    int v = 0;
    double weight_m = 0.0;
  };

  struct Neighbor {
    int index = 0;
    double weight_m = 0.0;
  };

  SpatialModel() = default;
  // Throws data_error on self-loops, non-positive weights, duplicate pairs
  // or invalid indices.
  SpatialModel(std::vector<Location> locations, std::vector<Edge> edges, bool symmetric = true);

  const std::vector<Location>& locations() const { return locations_; }
  int num_locations() const { return static_cast<int>(locations_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_undirected_edges() const { return edges_.size(); }
  std::size_t num_directed_edges() const { return 2 * edges_.size(); }
  bool symmetric() const { return symmetric_; }

  const std::vector<Neighbor>& neighbors(int i) const { return adjacency_[i]; }
  int degree(int i) const { return static_cast<int>(adjacency_[i].size()); }
  bool has_edge(int u, int v) const;

  // Smallest edge weight; +infinity when the graph has no edges.
  double min_edge_weight() const { return min_edge_weight_; }

private:
  std::vector<Location> locations_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  double min_edge_weight_ = 0.0;
  bool symmetric_ = true;
};

// Complete graph over the haversine metric.
SpatialModel build_full(std::vector<Location> locations);

// Edge (u, w, v) present iff haversine(u, v) = w < delta_m. May be
// disconnected. Throws data_error for delta_m <= 0.
SpatialModel build_delta(std::vector<Location> locations, double delta_m);

// Minimum spanning tree of the complete haversine graph (Prim, ties broken
// by smallest node index). Connected, |undirected edges| = |L| - 1.
SpatialModel build_mst(std::vector<Location> locations);

// MST augmented with a direct edge for every pair whose graph distance in
// the growing model exceeds alpha times the haversine distance; pairs are
// scanned in index order (i < j). Final graph satisfies
// induced_distance(i, j) <= alpha * haversine(i, j) for all pairs.
// Throws data_error for alpha <= 1.
SpatialModel build_enhanced_msg(std::vector<Location> locations, double alpha);

// Shortest-path distance over edge weights; +infinity when unreachable.
double induced_distance(const SpatialModel& model, int from, int to);
std::vector<double> shortest_paths_from(const SpatialModel& model, int from);

std::vector<int> isolated_nodes(const SpatialModel& model);

// Largest finite induced distance over all pairs (0 for a single location).
double graph_diameter(const SpatialModel& model);

}  // namespace strelmine
