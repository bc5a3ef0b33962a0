#pragma once

#include <string>
#include <vector>

#include "strelmine/pstrel.hpp"

namespace strelmine {

struct ProjectionResult {
  bool ok = false;
  ParamValuation valuation;  // aligned with template params when ok
  std::string error;         // set when !ok
};

// Lexicographic projection of one location's trace onto the template's
// parameter space. Parameters are tightened one at a time in priority
// order by bisection: the search keeps the valuation satisfying (robustness
// >= 0 counts as satisfying) and stops once the bracket is narrower than
// the parameter's delta, returning the satisfying endpoint (upper for
// positive polarity, lower for negative). Parameters not yet optimized stay
// at their most permissive extreme. Fails, without clamping, when even the
// most permissive instantiation is unsatisfied at the location.
ProjectionResult project_lex(const PstrelTemplate& tmpl, const SpatialModel& model,
                             const SpatioTemporalTrace& trace, int location);

struct ProjectAllResult {
  std::vector<ProjectionResult> per_location;  // aligned with model locations
  std::vector<int> projected;                  // indices with ok == true
  std::vector<int> failed;
};

ProjectAllResult project_all(const PstrelTemplate& tmpl, const SpatialModel& model,
                             const SpatioTemporalTrace& trace);

// CSV artifact: location_id,<param...>,status
void write_projections_csv(const std::string& path, const PstrelTemplate& tmpl,
                           const SpatialModel& model, const ProjectAllResult& result);

}  // namespace strelmine
