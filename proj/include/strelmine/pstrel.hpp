#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strelmine/formula.hpp"
#include "strelmine/spatial_model.hpp"
#include "strelmine/trace.hpp"

namespace strelmine {

// Direction in which growing a parameter makes the formula easier to
// satisfy: Pos means larger values are more permissive.
enum class Polarity { Pos, Neg };

enum class ParamKind { Magnitude, Timing, Spatial };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::Magnitude;
  // Bounds may be left as NaN and resolved from the data later.
  double inf = std::numeric_limits<double>::quiet_NaN();
  double sup = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();  // default (sup-inf)/256
  std::optional<Polarity> declared_polarity;

  bool bounds_resolved() const { return !std::isnan(inf) && !std::isnan(sup); }
};

// A formula skeleton with named parameter holes, parameter metadata, and a
// priority order for the lexicographic projection.
struct PstrelTemplate {
  FormulaPtr skeleton;
  std::vector<ParamSpec> params;  // declaration order, used for printing
  std::vector<int> priority;      // indices into params, optimization order

  int param_index(const std::string& name) const;
};

// Parameter values aligned with PstrelTemplate::params.
using ParamValuation = std::vector<double>;

// Syntactic polarity of every parameter, computed by structural recursion
// over the desugared skeleton (negation flips, interval upper bounds of
// until/reach/escape are positive, lower bounds negative, `x > c` makes c
// negative, `x < c` positive). Throws config_error when a parameter's
// polarity is not uniquely determined or contradicts a declared polarity.
std::vector<Polarity> infer_polarity(const PstrelTemplate& tmpl);

// Validates hole/parameter correspondence (each hole exactly once, kinds
// matching the syntactic position) and returns polarities.
std::vector<Polarity> validate_template(const PstrelTemplate& tmpl);

// Fills unresolved bounds from the data: magnitude parameters get the range
// of the referenced variable, timing parameters [0, horizon], spatial
// parameters [0, graph diameter]; missing deltas become (sup - inf) / 256.
void resolve_bounds(PstrelTemplate& tmpl, const SpatialModel& model,
                    const SpatioTemporalTrace& trace);

FormulaPtr instantiate(const PstrelTemplate& tmpl, const ParamValuation& valuation);

// The valuation with every parameter at its easy extreme per polarity.
ParamValuation most_permissive(const PstrelTemplate& tmpl,
                               const std::vector<Polarity>& polarity);

// Template JSON schema:
//   {
//     "formula": "somewhere[0,$d] (F[0,180] (occupancy > $c))",
//     "params": [
//       {"name":"c","kind":"magnitude","bounds":[0,500],"delta":1.0,"polarity":"-"},
//       {"name":"d","kind":"spatial"}
//     ],
//     "order": ["c","d"]
//   }
// bounds/delta/polarity are optional.
PstrelTemplate load_template_json(const std::string& path);
PstrelTemplate parse_template_json(const std::string& json_text);

std::string to_string(Polarity p);

}  // namespace strelmine
