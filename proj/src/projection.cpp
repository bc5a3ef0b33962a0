#include "strelmine/projection.hpp"

#include <fstream>

#include "strelmine/csvio.hpp"
#include "strelmine/errors.hpp"
#include "strelmine/evaluate.hpp"

namespace strelmine {

namespace {

double robustness_at(const PstrelTemplate& tmpl, const ParamValuation& v,
                     const SpatialModel& model, const SpatioTemporalTrace& trace, int location) {
  Evaluator ev(model, trace, instantiate(tmpl, v));
  return ev.robustness(location, 0);
}

}  // namespace

ProjectionResult project_lex(const PstrelTemplate& tmpl, const SpatialModel& model,
                             const SpatioTemporalTrace& trace, int location) {
  const auto polarity = validate_template(tmpl);
  for (const auto& p : tmpl.params) {
    if (!p.bounds_resolved() || std::isnan(p.delta)) {
      throw config_error("template bounds are unresolved; call resolve_bounds first");
    }
  }

  ParamValuation v = most_permissive(tmpl, polarity);
  if (robustness_at(tmpl, v, model, trace, location) < 0.0) {
    ProjectionResult r;
    r.error = "most permissive instantiation is unsatisfied";
    return r;
  }

  for (int pi : tmpl.priority) {
    double lo = tmpl.params[pi].inf;
    double hi = tmpl.params[pi].sup;
    const double delta = tmpl.params[pi].delta;
    const bool pos = polarity[pi] == Polarity::Pos;
    while (hi - lo >= delta) {
      const double mid = 0.5 * (lo + hi);
      v[pi] = mid;
      const bool sat = robustness_at(tmpl, v, model, trace, location) >= 0.0;
      if (sat == pos) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    v[pi] = pos ? hi : lo;
  }
  ProjectionResult r;
  r.ok = true;
  r.valuation = std::move(v);
  return r;
}

ProjectAllResult project_all(const PstrelTemplate& tmpl, const SpatialModel& model,
                             const SpatioTemporalTrace& trace) {
  ProjectAllResult out;
  out.per_location.resize(model.num_locations());
  for (int loc = 0; loc < model.num_locations(); ++loc) {
    out.per_location[loc] = project_lex(tmpl, model, trace, loc);
    if (out.per_location[loc].ok) {
      out.projected.push_back(loc);
    } else {
      out.failed.push_back(loc);
    }
  }
  return out;
}

void write_projections_csv(const std::string& path, const PstrelTemplate& tmpl,
                           const SpatialModel& model, const ProjectAllResult& result) {
  std::ofstream outfile(path);
  if (!outfile) throw data_error("cannot write file: " + path);
  outfile << "location_id";
  for (const auto& p : tmpl.params) outfile << ',' << p.name;
  outfile << ",status\n";
  for (int loc = 0; loc < model.num_locations(); ++loc) {
    const auto& r = result.per_location[loc];
    outfile << model.locations()[loc].id;
    for (std::size_t i = 0; i < tmpl.params.size(); ++i) {
      outfile << ',';
      if (r.ok) outfile << csv::format_double(r.valuation[i]);
    }
    outfile << ',' << (r.ok ? "ok" : "unprojectable") << '\n';
  }
}

}  // namespace strelmine
