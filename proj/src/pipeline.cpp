#include "strelmine/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "strelmine/artifacts.hpp"
#include "strelmine/boxtree.hpp"
#include "strelmine/clustering.hpp"
#include "strelmine/csvio.hpp"
#include "strelmine/errors.hpp"
#include "strelmine/projection.hpp"
#include "strelmine/rng.hpp"

namespace strelmine {

namespace fs = std::filesystem;

namespace {

ModelStrategy strategy_from_string(const std::string& s) {
  if (s == "full") return ModelStrategy::Full;
  if (s == "delta") return ModelStrategy::Delta;
  if (s == "mst") return ModelStrategy::Mst;
  if (s == "enhanced_msg") return ModelStrategy::EnhancedMsg;
  throw config_error("unknown model strategy: " + s);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write file: " + path.string());
  out << text;
}

class StageClock {
public:
  void start(const std::string& stage) {
    stage_ = stage;
    begin_ = std::chrono::steady_clock::now();
  }
  void stop() {
    auto end = std::chrono::steady_clock::now();
    timings_.emplace_back(
        stage_, std::chrono::duration_cast<std::chrono::microseconds>(end - begin_).count() /
                    1000.0);
  }
  const std::string& current() const { return stage_; }
  const std::vector<std::pair<std::string, double>>& timings() const { return timings_; }

private:
  std::string stage_;
  std::chrono::steady_clock::time_point begin_;
  std::vector<std::pair<std::string, double>> timings_;
};

}  // namespace

PipelineConfig PipelineConfig::from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("pipeline config is malformed: ") + e.what());
  }
  PipelineConfig cfg;
  try {
    const bool has_traces = doc.contains("traces") || doc.contains("locations");
    const bool has_generator = doc.contains("generator");
    if (has_traces && has_generator) {
      throw config_error("config must give either traces/locations or a generator, not both");
    }
    if (!has_traces && !has_generator) {
      throw config_error("config needs either traces/locations paths or a generator block");
    }
    if (has_traces) {
      cfg.locations_path = doc.at("locations").get<std::string>();
      cfg.traces_path = doc.at("traces").get<std::string>();
    } else {
      const auto& gen = doc.at("generator");
      if (gen.at("kind").get<std::string>() != "foodcourt") {
        throw config_error("only the foodcourt generator is available");
      }
      cfg.generator = foodcourt_config_from_json(gen.dump());
      if (gen.contains("seed")) cfg.generator_seed = gen.at("seed").get<std::uint64_t>();
    }

    const auto& model = doc.at("model");
    cfg.strategy = strategy_from_string(model.at("strategy").get<std::string>());
    if (cfg.strategy == ModelStrategy::Delta) cfg.delta_m = model.at("delta").get<double>();
    if (cfg.strategy == ModelStrategy::EnhancedMsg) {
      cfg.alpha = model.value("alpha", 2.0);
    }

    if (doc.contains("template")) {
      cfg.template_path = doc.at("template").get<std::string>();
    } else if (doc.contains("template_inline")) {
      cfg.template_json = doc.at("template_inline").dump();
    } else {
      throw config_error("config needs a template path or template_inline block");
    }

    if (doc.contains("clean")) {
      cfg.missing_threshold = doc.at("clean").value("missing_threshold", 0.15);
    }

    if (doc.contains("clustering")) {
      const auto& cl = doc.at("clustering");
      if (cl.contains("k")) {
        cfg.k_fixed = cl.at("k").get<int>();
      } else {
        cfg.k_min = cl.value("k_min", 2);
        cfg.k_max = cl.value("k_max", 6);
      }
      cfg.normalize = cl.value("normalize", true);
    }

    if (doc.contains("tree")) {
      const auto& tr = doc.at("tree");
      cfg.tree_depth_limit = tr.value("max_depth_limit", 10);
      cfg.kfold = tr.value("kfold", 5);
      cfg.acc_threshold = tr.value("acc_threshold", 0.9);
      if (tr.contains("seed")) cfg.tree_seed = tr.at("seed").get<std::uint64_t>();
    }

    cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.time_unit = doc.value("time_unit", std::string("units"));
    cfg.output_dir = doc.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("pipeline config is missing fields: ") + e.what());
  }
  return cfg;
}

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto cfg = from_json(ss.str());
  // Relative paths resolve against the config file's directory.
  const fs::path base = fs::path(path).parent_path();
  auto rebase = [&](std::string& p) {
    if (!p.empty() && fs::path(p).is_relative()) p = (base / p).string();
  };
  rebase(cfg.locations_path);
  rebase(cfg.traces_path);
  rebase(cfg.template_path);
  rebase(cfg.output_dir);
  return cfg;
}

PipelineReport run_pipeline(const PipelineConfig& config) {
  if (config.output_dir.empty()) throw config_error("output_dir is required");
  fs::create_directories(config.output_dir);
  const fs::path out_dir(config.output_dir);
  std::error_code ec;
  fs::remove(out_dir / "FAILED", ec);

  StageClock clock;
  const auto wall_begin = std::chrono::steady_clock::now();
  PipelineReport report;
  try {
    // --- ingest ---------------------------------------------------------
    clock.start("ingest");
    std::vector<Location> locations;
    SpatioTemporalTrace raw_trace;
    if (config.generator) {
      const std::uint64_t gen_seed =
          config.generator_seed ? *config.generator_seed : Rng::mix(config.seed, 1);
      auto data = generate_food_court(*config.generator, gen_seed);
      locations = std::move(data.locations);
      raw_trace = std::move(data.trace);
      write_locations_csv((out_dir / "locations.csv").string(), locations);
      write_traces_csv((out_dir / "trace.csv").string(), raw_trace);
    } else {
      locations = load_locations_csv(config.locations_path);
      raw_trace = load_traces_csv(config.traces_path, locations, config.time_unit);
    }
    clock.stop();

    // --- clean ----------------------------------------------------------
    clock.start("clean");
    CleanResult cleaned = clean(raw_trace, config.missing_threshold);
    report.dropped_locations = cleaned.dropped_ids;
    std::set<std::string> dropped(cleaned.dropped_ids.begin(), cleaned.dropped_ids.end());
    std::vector<Location> kept;
    for (const auto& loc : locations) {
      if (!dropped.count(loc.id)) kept.push_back(loc);
    }
    clock.stop();

    // --- model ----------------------------------------------------------
    clock.start("model");
    SpatialModel model = [&] {
      switch (config.strategy) {
        case ModelStrategy::Full: return build_full(kept);
        case ModelStrategy::Delta: return build_delta(kept, config.delta_m);
        case ModelStrategy::Mst: return build_mst(kept);
        case ModelStrategy::EnhancedMsg: return build_enhanced_msg(kept, config.alpha);
      }
      throw config_error("unknown model strategy");
    }();
    report.num_locations = model.num_locations();
    report.num_edges = model.num_undirected_edges();
    clock.stop();

    // --- project --------------------------------------------------------
    clock.start("project");
    PstrelTemplate tmpl = config.template_path.empty()
                              ? parse_template_json(config.template_json)
                              : load_template_json(config.template_path);
    resolve_bounds(tmpl, model, cleaned.trace);
    ProjectAllResult projections = project_all(tmpl, model, cleaned.trace);
    for (int loc : projections.failed) {
      report.unprojectable_locations.push_back(model.locations()[loc].id);
    }
    write_projections_csv((out_dir / "projections.csv").string(), tmpl, model, projections);
    if (projections.projected.empty()) {
      throw data_error("no location admits a projection under this template");
    }
    clock.stop();

    // --- cluster --------------------------------------------------------
    clock.start("cluster");
    Points points;
    for (int loc : projections.projected) {
      points.push_back(projections.per_location[loc].valuation);
    }
    nlohmann::ordered_json silhouette_doc;
    int k = config.k_fixed;
    if (k == 0) {
      const int n = static_cast<int>(points.size());
      const int kmax = std::min(config.k_max, n);
      const int kmin = std::min(config.k_min, kmax);
      if (kmin < 2 || kmin > kmax) {
        throw data_error("too few projected locations for the clustering range");
      }
      auto chosen = choose_k(points, kmin, kmax, config.normalize);
      k = chosen.k;
      nlohmann::ordered_json scores;
      for (const auto& [kk, score] : chosen.scores) scores[std::to_string(kk)] = score;
      silhouette_doc["scores"] = std::move(scores);
      report.silhouette_score = chosen.best_score;
    }
    auto assignment = ahc_complete(points, k, config.normalize);
    report.num_clusters = assignment.num_clusters;
    if (config.k_fixed != 0 && assignment.num_clusters >= 2) {
      const Points work = config.normalize ? minmax_normalize(points) : points;
      report.silhouette_score = silhouette(work, assignment.labels);
      silhouette_doc["scores"][std::to_string(k)] = report.silhouette_score;
    }
    silhouette_doc["chosen_k"] = k;
    write_text(out_dir / "silhouette.json", silhouette_doc.dump(2) + "\n");

    std::map<std::string, int> cluster_of_id;
    {
      std::ofstream out(out_dir / "clusters.csv");
      if (!out) throw data_error("cannot write clusters.csv");
      out << "location_id,cluster\n";
      for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& id = model.locations()[projections.projected[i]].id;
        cluster_of_id[id] = assignment.labels[i];
        out << id << ',' << assignment.labels[i] << '\n';
      }
    }
    clock.stop();

    // --- tree -----------------------------------------------------------
    clock.start("tree");
    const std::uint64_t tree_seed =
        config.tree_seed ? *config.tree_seed : Rng::mix(config.seed, 2);
    DecisionTree tree;
    if (assignment.num_clusters == 1) {
      tree = fit_tree(points, assignment.labels, 1);
      report.depth_search_satisfied = true;
      report.cv_accuracy = 1.0;
    } else {
      auto pruned = prune_search(points, assignment.labels, config.tree_depth_limit,
                                 std::min(config.kfold, static_cast<int>(points.size())),
                                 config.acc_threshold, tree_seed);
      if (pruned) {
        tree = std::move(*pruned);
        report.depth_search_satisfied = true;
      } else {
        // No depth within the limit cross-validates above the threshold;
        // fall back to the depth-limited fit and say so in the report.
        tree = fit_tree(points, assignment.labels, config.tree_depth_limit);
      }
      report.cv_accuracy = kfold_cv(points, assignment.labels, tree.max_depth,
                                    std::min(config.kfold, static_cast<int>(points.size())),
                                    tree_seed);
    }
    report.tree_depth = tree.depth();
    write_text(out_dir / "tree.json", tree_to_json(tree, tmpl));
    clock.stop();

    // --- formulas -------------------------------------------------------
    clock.start("formulas");
    auto formulas = cluster_formulas(tree, tmpl);
    std::map<int, int> boxes_per_label;
    std::ostringstream formula_text;
    formula_text << "template: " << to_string(*tmpl.skeleton) << "\n";
    formula_text << "parameters:";
    for (const auto& p : tmpl.params) formula_text << " " << p.name;
    formula_text << "\n\n";
    for (const auto& cf : formulas) {
      boxes_per_label[cf.label] = static_cast<int>(cf.boxes.size());
      report.total_boxes += static_cast<int>(cf.boxes.size());
      formula_text << "cluster " << cf.label << " (" << cf.boxes.size() << " box"
                   << (cf.boxes.size() == 1 ? "" : "es") << ")\n";
      formula_text << "  box form: " << cf.box_form << "\n";
      formula_text << "  formula:  " << cf.dsl_form << "\n\n";
    }
    write_text(out_dir / "formulas.txt", formula_text.str());

    // Agreement between box membership and cluster labels.
    {
      int match = 0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (tree.predict(points[i]) == assignment.labels[i]) ++match;
      }
      report.agreement = points.empty() ? 1.0 : static_cast<double>(match) / points.size();
    }

    auto boxes = paths_to_boxes(tree, tmpl);
    write_text(out_dir / "scatter.svg", scatter_svg(tmpl, points, assignment.labels, boxes));
    write_text(out_dir / "model.geojson", model_to_geojson(model, &cluster_of_id));

    nlohmann::ordered_json rep;
    rep["status"] = "ok";
    rep["num_locations"] = report.num_locations;
    rep["num_edges"] = report.num_edges;
    rep["dropped_locations"] = report.dropped_locations;
    rep["unprojectable_locations"] = report.unprojectable_locations;
    rep["num_clusters"] = report.num_clusters;
    rep["silhouette"] = report.silhouette_score;
    rep["tree"] = {{"depth", report.tree_depth},
                   {"depth_search_satisfied", report.depth_search_satisfied},
                   {"cv_accuracy", report.cv_accuracy}};
    nlohmann::ordered_json box_counts;
    for (const auto& [label, count] : boxes_per_label) {
      box_counts[std::to_string(label)] = count;
    }
    rep["cluster_boxes"] = std::move(box_counts);
    rep["agreement"] = report.agreement;
    clock.stop();

    nlohmann::ordered_json stage_ms;
    double sum = 0.0;
    for (const auto& [stage, ms] : clock.timings()) {
      stage_ms[stage] = ms;
      sum += ms;
    }
    rep["stages_ms"] = std::move(stage_ms);
    const auto wall_end = std::chrono::steady_clock::now();
    double wall =
        std::chrono::duration_cast<std::chrono::microseconds>(wall_end - wall_begin).count() /
        1000.0;
    // Guard against clock rounding: the per-stage sum never exceeds wall.
    rep["wall_ms"] = std::max(wall, sum);
    write_text(out_dir / "report.json", rep.dump(2) + "\n");
  } catch (const std::exception& e) {
    write_text(out_dir / "FAILED", "stage: " + clock.current() + "\nerror: " + e.what() + "\n");
    throw;
  }
  return report;
}

}  // namespace strelmine
