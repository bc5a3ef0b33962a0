#include "strelmine/spatial_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "strelmine/errors.hpp"

namespace strelmine {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SpatialModel::SpatialModel(std::vector<Location> locations, std::vector<Edge> edges,
                           bool symmetric)
    : locations_(std::move(locations)), symmetric_(symmetric) {
  validate_locations(locations_);
  const int n = num_locations();
  adjacency_.assign(n, {});
  min_edge_weight_ = kInf;
  std::set<std::pair<int, int>> seen;
  for (auto e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n) throw data_error("edge index out of range");
    if (e.u == e.v) throw data_error("self-loop edge rejected");
    if (!(e.weight_m > 0.0) || !std::isfinite(e.weight_m)) {
      throw data_error("edge weight must be positive and finite");
    }
    if (!seen.insert({e.u, e.v}).second) throw data_error("duplicate edge rejected");
    edges_.push_back(e);
    min_edge_weight_ = std::min(min_edge_weight_, e.weight_m);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (const auto& e : edges_) {
    adjacency_[e.u].push_back({e.v, e.weight_m});
    adjacency_[e.v].push_back({e.u, e.weight_m});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
  }
}

bool SpatialModel::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= num_locations() || v >= num_locations()) return false;
  for (const auto& nb : adjacency_[u]) {
    if (nb.index == v) return true;
  }
  return false;
}

SpatialModel build_full(std::vector<Location> locations) {
  validate_locations(locations);
  if (locations.empty()) throw data_error("need at least one location");
  std::vector<SpatialModel::Edge> edges;
  const int n = static_cast<int>(locations.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double w = haversine_m(locations[i], locations[j]);
      if (!(w > 0.0)) throw data_error("coincident locations produce a zero-weight edge");
      edges.push_back({i, j, w});
    }
  }
  return SpatialModel(std::move(locations), std::move(edges));
}

SpatialModel build_delta(std::vector<Location> locations, double delta_m) {
  validate_locations(locations);
  if (locations.empty()) throw data_error("need at least one location");
  if (!(delta_m > 0.0)) throw data_error("delta must be positive");
  std::vector<SpatialModel::Edge> edges;
  const int n = static_cast<int>(locations.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double w = haversine_m(locations[i], locations[j]);
      if (w > 0.0 && w < delta_m) edges.push_back({i, j, w});
    }
  }
  return SpatialModel(std::move(locations), std::move(edges));
}

SpatialModel build_mst(std::vector<Location> locations) {
  validate_locations(locations);
  if (locations.empty()) throw data_error("need at least one location");
  const int n = static_cast<int>(locations.size());
  std::vector<SpatialModel::Edge> edges;
  if (n > 1) {
    // Prim over the complete haversine graph, starting from node 0. The
    // strict '<' scan picks the smallest node index among equal keys.
    std::vector<double> key(n, kInf);
    std::vector<int> parent(n, -1);
    std::vector<bool> in_tree(n, false);
    key[0] = 0.0;
    for (int step = 0; step < n; ++step) {
      int u = -1;
      for (int v = 0; v < n; ++v) {
        if (!in_tree[v] && (u == -1 || key[v] < key[u])) u = v;
      }
      in_tree[u] = true;
      if (parent[u] >= 0) edges.push_back({parent[u], u, key[u]});
      for (int v = 0; v < n; ++v) {
        if (in_tree[v] || v == u) continue;
        double w = haversine_m(locations[u], locations[v]);
        if (w < key[v]) {
          key[v] = w;
          parent[v] = u;
        }
      }
    }
  }
  return SpatialModel(std::move(locations), std::move(edges));
}

namespace {

std::vector<double> dijkstra(const std::vector<std::vector<SpatialModel::Neighbor>>& adj,
                             int from) {
  const int n = static_cast<int>(adj.size());
  std::vector<double> dist(n, kInf);
  dist[from] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0.0, from});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& nb : adj[u]) {
      double nd = d + nb.weight_m;
      if (nd < dist[nb.index]) {
        dist[nb.index] = nd;
        pq.push({nd, nb.index});
      }
    }
  }
  return dist;
}

}  // namespace

SpatialModel build_enhanced_msg(std::vector<Location> locations, double alpha) {
  if (!(alpha > 1.0)) throw data_error("alpha must be greater than 1");
  SpatialModel mst = build_mst(std::move(locations));
  const int n = mst.num_locations();
  std::vector<std::vector<SpatialModel::Neighbor>> adj(n);
  std::vector<SpatialModel::Edge> edges = mst.edges();
  for (const auto& e : edges) {
    adj[e.u].push_back({e.v, e.weight_m});
    adj[e.v].push_back({e.u, e.weight_m});
  }
  // Scan pairs in index order; shortest paths are recomputed against the
  // growing graph, so earlier additions shorten later queries.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double direct = haversine_m(mst.locations()[i], mst.locations()[j]);
      double via_graph = dijkstra(adj, i)[j];
      if (via_graph > alpha * direct) {
        edges.push_back({i, j, direct});
        adj[i].push_back({j, direct});
        adj[j].push_back({i, direct});
      }
    }
  }
  return SpatialModel(mst.locations(), std::move(edges));
}

std::vector<double> shortest_paths_from(const SpatialModel& model, int from) {
  if (from < 0 || from >= model.num_locations()) throw data_error("node index out of range");
  std::vector<std::vector<SpatialModel::Neighbor>> adj(model.num_locations());
  for (int i = 0; i < model.num_locations(); ++i) adj[i] = model.neighbors(i);
  return dijkstra(adj, from);
}

double induced_distance(const SpatialModel& model, int from, int to) {
  if (to < 0 || to >= model.num_locations()) throw data_error("node index out of range");
  return shortest_paths_from(model, from)[to];
}

std::vector<int> isolated_nodes(const SpatialModel& model) {
  std::vector<int> out;
  for (int i = 0; i < model.num_locations(); ++i) {
    if (model.degree(i) == 0) out.push_back(i);
  }
  return out;
}

double graph_diameter(const SpatialModel& model) {
  double best = 0.0;
  for (int i = 0; i < model.num_locations(); ++i) {
    for (double d : shortest_paths_from(model, i)) {
      if (std::isfinite(d)) best = std::max(best, d);
    }
  }
  return best;
}

}  // namespace strelmine
