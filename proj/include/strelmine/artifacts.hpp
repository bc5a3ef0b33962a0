#pragma once

#include <map>
#include <string>
#include <vector>

#include "strelmine/boxtree.hpp"
#include "strelmine/clustering.hpp"
#include "strelmine/spatial_model.hpp"

namespace strelmine {

// FeatureCollection with one Point feature per location (id, name, and
// cluster label when available) and one LineString feature per undirected
// edge with a weight_m property.
std::string model_to_geojson(const SpatialModel& model,
                             const std::map<std::string, int>* cluster_of_id = nullptr);

// Parameter-space scatter colored by cluster label with hyperbox overlays.
// Plots the first two parameters in the template's priority order (a single
// parameter collapses the y axis). Output is deterministic.
std::string scatter_svg(const PstrelTemplate& tmpl, const Points& points,
                        const std::vector<int>& labels,
                        const std::map<int, std::vector<HyperBox>>& boxes);

}  // namespace strelmine
