#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "strelmine/errors.hpp"
#include "strelmine/evaluate.hpp"
#include "strelmine/parser.hpp"
#include "strelmine/pipeline.hpp"
#include "strelmine/rng.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitEval = 4;

strelmine::SpatialModel build_model(std::vector<strelmine::Location> locations,
                                    const std::string& strategy, double delta, double alpha) {
  if (strategy == "full") return strelmine::build_full(std::move(locations));
  if (strategy == "delta") return strelmine::build_delta(std::move(locations), delta);
  if (strategy == "mst") return strelmine::build_mst(std::move(locations));
  if (strategy == "enhanced_msg") {
    return strelmine::build_enhanced_msg(std::move(locations), alpha);
  }
  throw strelmine::config_error("unknown model strategy: " + strategy);
}

std::string show(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int run_command(const std::string& config_path) {
  auto config = strelmine::PipelineConfig::from_json_file(config_path);
  auto report = strelmine::run_pipeline(config);
  std::cout << "pipeline complete: " << report.num_locations << " locations, "
            << report.num_edges << " edges, " << report.num_clusters << " clusters, "
            << report.total_boxes << " boxes\n";
  std::cout << "artifacts in " << config.output_dir << "\n";
  return 0;
}

int monitor_command(const std::string& locations_path, const std::string& trace_path,
                    const std::string& formula_text, const std::string& strategy, double delta,
                    double alpha, const std::string& loc_id, int time_index,
                    const std::string& time_unit) {
  auto locations = strelmine::load_locations_csv(locations_path);
  auto trace = strelmine::load_traces_csv(trace_path, locations, time_unit);
  auto cleaned = strelmine::clean(trace);
  for (const auto& id : cleaned.dropped_ids) {
    std::cerr << "note: dropped " << id << " (too many missing values)\n";
  }
  std::vector<strelmine::Location> kept;
  for (const auto& loc : locations) {
    if (cleaned.trace.location_index(loc.id) >= 0) kept.push_back(loc);
  }
  auto model = build_model(std::move(kept), strategy, delta, alpha);
  auto formula = strelmine::parse_formula(formula_text);
  strelmine::Evaluator ev(model, cleaned.trace, formula);

  if (!loc_id.empty() && model.locations().end() ==
                             std::find_if(model.locations().begin(), model.locations().end(),
                                          [&](const auto& l) { return l.id == loc_id; })) {
    throw strelmine::data_error("unknown location id: " + loc_id);
  }
  std::cout << "location_id,robustness,satisfied\n";
  for (int loc = 0; loc < model.num_locations(); ++loc) {
    const auto& id = model.locations()[loc].id;
    if (!loc_id.empty() && id != loc_id) continue;
    try {
      double rho = ev.robustness(loc, time_index);
      bool sat = ev.satisfies(loc, time_index);
      std::cout << id << ',' << show(rho) << ',' << (sat ? "true" : "false") << '\n';
    } catch (const strelmine::eval_error& e) {
      throw strelmine::eval_error(std::string(e.what()) + " (at location " + id + ")");
    }
  }
  return 0;
}

int gen_foodcourt_command(const std::string& config_path, std::uint64_t seed,
                          const std::string& out_dir) {
  strelmine::FoodCourtConfig config;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw strelmine::config_error("cannot open config file: " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    config = strelmine::foodcourt_config_from_json(ss.str());
  }
  auto data = strelmine::generate_food_court(config, seed);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  strelmine::write_locations_csv((dir / "locations.csv").string(), data.locations);
  strelmine::write_traces_csv((dir / "trace.csv").string(), data.trace);
  std::ofstream cfg(dir / "generator.json");
  cfg << strelmine::foodcourt_config_to_json(config);
  std::cout << "wrote locations.csv and trace.csv to " << out_dir << " (seed " << seed << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STREL specification mining over weighted spatial graphs"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the full mining pipeline from a JSON config");
  run->add_option("config", config_path, "Pipeline config JSON")->required();

  std::string m_locations, m_trace, m_formula, m_strategy = "enhanced_msg", m_loc;
  std::string m_time_unit = "units";
  double m_delta = 1000.0, m_alpha = 2.0;
  int m_time = 0;
  auto* monitor = app.add_subcommand("monitor", "Evaluate one formula over a trace");
  monitor->add_option("--model,--locations", m_locations, "Locations CSV")->required();
  monitor->add_option("--trace", m_trace, "Trace CSV")->required();
  monitor->add_option("--formula", m_formula, "Formula text")->required();
  monitor->add_option("--strategy", m_strategy, "full|delta|mst|enhanced_msg");
  monitor->add_option("--delta", m_delta, "Distance cutoff in meters (delta strategy)");
  monitor->add_option("--alpha", m_alpha, "Stretch factor (enhanced_msg strategy)");
  monitor->add_option("--loc", m_loc, "Restrict output to one location id");
  monitor->add_option("--time", m_time, "Grid index to evaluate at (default 0)");
  monitor->add_option("--time-unit", m_time_unit, "Label for the trace time unit");

  std::string g_config, g_out;
  std::uint64_t g_seed = 0;
  auto* gen = app.add_subcommand("gen-foodcourt", "Generate the synthetic food-court dataset");
  gen->add_option("--config", g_config, "Generator config JSON (defaults when omitted)");
  gen->add_option("--seed", g_seed, "Generator seed")->required();
  gen->add_option("--out", g_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_command(config_path);
    if (*monitor) {
      return monitor_command(m_locations, m_trace, m_formula, m_strategy, m_delta, m_alpha,
                             m_loc, m_time, m_time_unit);
    }
    if (*gen) return gen_foodcourt_command(g_config, g_seed, g_out);
  } catch (const strelmine::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const strelmine::syntax_error& e) {
    std::cerr << "formula error: " << e.what() << "\n";
    return kExitEval;
  } catch (const strelmine::eval_error& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kExitEval;
  } catch (const strelmine::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
