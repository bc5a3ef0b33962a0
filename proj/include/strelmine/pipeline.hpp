#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strelmine/foodcourt.hpp"

namespace strelmine {

enum class ModelStrategy { Full, Delta, Mst, EnhancedMsg };

struct PipelineConfig {
  // Input: either file paths or a generator block, never both.
  std::string locations_path;
  std::string traces_path;
  std::optional<FoodCourtConfig> generator;

  ModelStrategy strategy = ModelStrategy::EnhancedMsg;
  double delta_m = 0.0;  // Delta strategy
  double alpha = 2.0;    // EnhancedMsg strategy

  std::string template_path;
  std::string template_json;  // inline alternative to template_path

  double missing_threshold = 0.15;

  // Clustering: fixed k, or a silhouette search over [k_min, k_max].
  int k_fixed = 0;
  int k_min = 2;
  int k_max = 6;
  bool normalize = true;

  int tree_depth_limit = 10;  // N
  int kfold = 5;              // K
  double acc_threshold = 0.9;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> generator_seed;  // default: derived from seed
  std::optional<std::uint64_t> tree_seed;       // default: derived from seed

  std::string time_unit = "units";
  std::string output_dir;

  static PipelineConfig from_json_file(const std::string& path);
  static PipelineConfig from_json(const std::string& json_text);
};

struct PipelineReport {
  int num_locations = 0;
  std::size_t num_edges = 0;
  std::vector<std::string> dropped_locations;
  std::vector<std::string> unprojectable_locations;
  int num_clusters = 0;
  double silhouette_score = 0.0;
  int tree_depth = 0;
  bool depth_search_satisfied = false;
  double cv_accuracy = 0.0;
  int total_boxes = 0;
  // Fraction of projected locations whose box-membership label matches
  // their cluster label.
  double agreement = 0.0;
};

// Runs ingest -> clean -> model -> project -> cluster -> tree -> formulas
// and writes model.geojson, projections.csv, clusters.csv, silhouette.json,
// tree.json, formulas.txt, scatter.svg and report.json into output_dir.
// On a stage failure, partial artifacts stay behind next to a FAILED marker
// naming the stage, and the error is rethrown.
PipelineReport run_pipeline(const PipelineConfig& config);

}  // namespace strelmine
