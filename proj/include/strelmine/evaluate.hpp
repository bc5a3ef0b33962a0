#pragma once

#include <memory>
#include <vector>

#include "strelmine/formula.hpp"
#include "strelmine/spatial_model.hpp"
#include "strelmine/trace.hpp"

namespace strelmine {

// Number of route hops that can still produce a candidate location within
// distance d2: the smallest k with k * min_edge_weight > d2. Falls back to
// |L| when d2 is infinite (positive weights make longer simple routes
// redundant for an unbounded upper distance); that fallback is exact for
// intervals starting at 0 and a documented approximation otherwise.
int reach_hop_bound(const SpatialModel& model, double d2_m);

// Evaluates one concrete formula over a (model, trace) pair. Robustness and
// boolean satisfaction are memoized per node, so repeated queries at
// different locations/times are cheap. Instances hold no shared mutable
// state beyond their own caches; use one instance per thread.
//
// Spatial operators quantify over routes through the model. A route
// contributes a candidate location at its first visit only, with the
// accumulated edge distance up to that visit; the escape operator scores
// the reached location itself together with the route prefix, while reach
// scores the prefix against its first argument and the reached location
// against its second.
class Evaluator {
public:
  // Throws eval_error when the formula has unresolved parameter holes or
  // references a variable absent from the trace; throws data_error when a
  // model location has no series in the trace.
  Evaluator(const SpatialModel& model, const SpatioTemporalTrace& trace, FormulaPtr formula);
  ~Evaluator();

  Evaluator(Evaluator&&) noexcept;
  Evaluator& operator=(Evaluator&&) noexcept;

  double robustness(int location, int time);
  bool satisfies(int location, int time);

  int num_locations() const;
  int num_samples() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot helpers.
double robustness(const FormulaPtr& formula, const SpatialModel& model,
                  const SpatioTemporalTrace& trace, int location, int time);
bool satisfies(const FormulaPtr& formula, const SpatialModel& model,
               const SpatioTemporalTrace& trace, int location, int time);

}  // namespace strelmine
