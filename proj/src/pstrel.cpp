#include "strelmine/pstrel.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "strelmine/errors.hpp"
#include "strelmine/parser.hpp"

namespace strelmine {

int PstrelTemplate::param_index(const std::string& name) const {
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::string to_string(Polarity p) { return p == Polarity::Pos ? "+" : "-"; }

namespace {

Polarity flip(Polarity p) { return p == Polarity::Pos ? Polarity::Neg : Polarity::Pos; }

void note(std::map<std::string, std::set<Polarity>>& acc, const Scalar& s, Polarity p) {
  if (s.is_hole()) acc[s.hole].insert(p);
}

// sign == false inside an odd number of negations.
void collect_polarities(const Formula& f, bool positive,
                        std::map<std::string, std::set<Polarity>>& acc) {
  auto oriented = [&](Polarity p) { return positive ? p : flip(p); };
  switch (f.op) {
    case Op::True:
      return;
    case Op::Atom: {
      const bool upper_is_easier = (f.cmp == Cmp::Lt || f.cmp == Cmp::Le);
      note(acc, f.threshold, oriented(upper_is_easier ? Polarity::Pos : Polarity::Neg));
      return;
    }
    case Op::Not:
      collect_polarities(*f.kids[0], !positive, acc);
      return;
    case Op::And:
      collect_polarities(*f.kids[0], positive, acc);
      collect_polarities(*f.kids[1], positive, acc);
      return;
    case Op::Until:
    case Op::Reach:
    case Op::Escape:
      note(acc, f.interval.lo, oriented(Polarity::Neg));
      note(acc, f.interval.hi, oriented(Polarity::Pos));
      for (const auto& k : f.kids) collect_polarities(*k, positive, acc);
      return;
    default:
      throw config_error("derived operator survived desugaring in polarity analysis");
  }
}

struct HoleUse {
  int count = 0;
  ParamKind kind = ParamKind::Magnitude;
  std::string variable;  // for magnitude holes, the atom's variable
};

void collect_holes(const Formula& f, std::map<std::string, HoleUse>& uses) {
  if (f.op == Op::Atom && f.threshold.is_hole()) {
    auto& u = uses[f.threshold.hole];
    ++u.count;
    u.kind = ParamKind::Magnitude;
    u.variable = f.var;
  }
  if (is_temporal(f.op) || is_spatial(f.op)) {
    const ParamKind kind = is_temporal(f.op) ? ParamKind::Timing : ParamKind::Spatial;
    for (const Scalar* s : {&f.interval.lo, &f.interval.hi}) {
      if (s->is_hole()) {
        auto& u = uses[s->hole];
        ++u.count;
        u.kind = kind;
      }
    }
  }
  for (const auto& k : f.kids) collect_holes(*k, uses);
}

const char* kind_name(ParamKind k) {
  switch (k) {
    case ParamKind::Magnitude: return "magnitude";
    case ParamKind::Timing: return "timing";
    case ParamKind::Spatial: return "spatial";
  }
  return "?";
}

}  // namespace

std::vector<Polarity> infer_polarity(const PstrelTemplate& tmpl) {
  std::map<std::string, std::set<Polarity>> acc;
  collect_polarities(*desugar(tmpl.skeleton), true, acc);
  std::vector<Polarity> out;
  out.reserve(tmpl.params.size());
  for (const auto& p : tmpl.params) {
    auto it = acc.find(p.name);
    if (it == acc.end()) {
      throw config_error("parameter " + p.name + " does not occur in the formula");
    }
    if (it->second.size() != 1) {
      throw config_error("parameter " + p.name +
                         " is non-monotone: both polarities occur in the formula");
    }
    Polarity inferred = *it->second.begin();
    if (p.declared_polarity && *p.declared_polarity != inferred) {
      throw config_error("declared polarity of " + p.name +
                         " contradicts the syntactic polarity " + to_string(inferred));
    }
    out.push_back(inferred);
  }
  return out;
}

std::vector<Polarity> validate_template(const PstrelTemplate& tmpl) {
  if (!tmpl.skeleton) throw config_error("template has no formula");
  std::map<std::string, HoleUse> uses;
  collect_holes(*tmpl.skeleton, uses);
  std::set<std::string> declared;
  for (const auto& p : tmpl.params) {
    if (!declared.insert(p.name).second) {
      throw config_error("duplicate parameter name: " + p.name);
    }
    auto it = uses.find(p.name);
    if (it == uses.end()) {
      throw config_error("parameter " + p.name + " does not occur in the formula");
    }
    if (it->second.count != 1) {
      throw config_error("parameter " + p.name + " must occur exactly once in the skeleton");
    }
    if (it->second.kind != p.kind) {
      throw config_error("parameter " + p.name + " is declared " + kind_name(p.kind) +
                         " but occurs in a " + kind_name(it->second.kind) + " position");
    }
  }
  for (const auto& [hole, use] : uses) {
    if (!declared.count(hole)) {
      throw config_error("formula hole $" + hole + " has no parameter declaration");
    }
  }
  if (tmpl.priority.size() != tmpl.params.size()) {
    throw config_error("priority order must list every parameter exactly once");
  }
  std::set<int> seen;
  for (int idx : tmpl.priority) {
    if (idx < 0 || idx >= static_cast<int>(tmpl.params.size()) || !seen.insert(idx).second) {
      throw config_error("priority order must list every parameter exactly once");
    }
  }
  auto polarity = infer_polarity(tmpl);
  for (const auto& p : tmpl.params) {
    if (p.bounds_resolved()) {
      if (!(std::isfinite(p.inf) && std::isfinite(p.sup) && p.inf < p.sup)) {
        throw config_error("parameter " + p.name + " needs finite bounds with inf < sup");
      }
      if (!std::isnan(p.delta) && !(p.delta > 0.0 && p.delta < p.sup - p.inf)) {
        throw config_error("parameter " + p.name + " needs 0 < delta < sup - inf");
      }
      if ((p.kind == ParamKind::Timing || p.kind == ParamKind::Spatial) && p.inf < 0.0) {
        throw config_error("parameter " + p.name + " must have non-negative bounds");
      }
    }
  }
  return polarity;
}

namespace {

struct MagnitudeVarFinder {
  std::map<std::string, std::string> var_of_hole;
  void run(const Formula& f) {
    if (f.op == Op::Atom && f.threshold.is_hole()) var_of_hole[f.threshold.hole] = f.var;
    for (const auto& k : f.kids) run(*k);
  }
};

}  // namespace

void resolve_bounds(PstrelTemplate& tmpl, const SpatialModel& model,
                    const SpatioTemporalTrace& trace) {
  MagnitudeVarFinder finder;
  finder.run(*tmpl.skeleton);
  for (auto& p : tmpl.params) {
    if (!p.bounds_resolved()) {
      switch (p.kind) {
        case ParamKind::Magnitude: {
          int var = trace.variable_index(finder.var_of_hole.at(p.name));
          if (var < 0) throw config_error("template references a variable absent from the trace");
          auto [lo, hi] = trace.variable_range(var);
          if (!(lo < hi)) {
            throw config_error("variable range is degenerate; declare bounds for " + p.name);
          }
          p.inf = lo;
          p.sup = hi;
          break;
        }
        case ParamKind::Timing:
          if (!(trace.horizon() > 0.0)) {
            throw config_error("trace horizon is zero; declare bounds for " + p.name);
          }
          p.inf = 0.0;
          p.sup = trace.horizon();
          break;
        case ParamKind::Spatial: {
          double diam = graph_diameter(model);
          if (!(diam > 0.0)) {
            throw config_error("graph diameter is zero; declare bounds for " + p.name);
          }
          p.inf = 0.0;
          p.sup = diam;
          break;
        }
      }
    }
    if (std::isnan(p.delta)) p.delta = (p.sup - p.inf) / 256.0;
  }
  validate_template(tmpl);
}

namespace {

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, double>& values) {
  auto subst_scalar = [&](const Scalar& s) {
    if (!s.is_hole()) return s;
    auto it = values.find(s.hole);
    if (it == values.end()) throw config_error("no value for parameter " + s.hole);
    return Scalar::lit(it->second);
  };
  Formula out = *f;
  bool changed = false;
  if (f->op == Op::Atom && f->threshold.is_hole()) {
    out.threshold = subst_scalar(f->threshold);
    changed = true;
  }
  if ((is_temporal(f->op) || is_spatial(f->op)) &&
      (f->interval.lo.is_hole() || f->interval.hi.is_hole())) {
    out.interval.lo = subst_scalar(f->interval.lo);
    out.interval.hi = subst_scalar(f->interval.hi);
    changed = true;
  }
  for (std::size_t i = 0; i < f->kids.size(); ++i) {
    auto k = substitute(f->kids[i], values);
    if (k != f->kids[i]) {
      out.kids[i] = k;
      changed = true;
    }
  }
  if (!changed) return f;
  return std::make_shared<const Formula>(std::move(out));
}

}  // namespace

FormulaPtr instantiate(const PstrelTemplate& tmpl, const ParamValuation& valuation) {
  if (valuation.size() != tmpl.params.size()) {
    throw config_error("valuation size does not match the parameter list");
  }
  std::map<std::string, double> values;
  for (std::size_t i = 0; i < tmpl.params.size(); ++i) {
    values[tmpl.params[i].name] = valuation[i];
  }
  return substitute(tmpl.skeleton, values);
}

ParamValuation most_permissive(const PstrelTemplate& tmpl,
                               const std::vector<Polarity>& polarity) {
  ParamValuation v(tmpl.params.size());
  for (std::size_t i = 0; i < tmpl.params.size(); ++i) {
    v[i] = polarity[i] == Polarity::Pos ? tmpl.params[i].sup : tmpl.params[i].inf;
  }
  return v;
}

PstrelTemplate parse_template_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("template JSON is malformed: ") + e.what());
  }
  PstrelTemplate tmpl;
  try {
    tmpl.skeleton = parse_formula(doc.at("formula").get<std::string>(), {.allow_holes = true});
    for (const auto& p : doc.at("params")) {
      ParamSpec spec;
      spec.name = p.at("name").get<std::string>();
      std::string kind = p.at("kind").get<std::string>();
      if (kind == "magnitude") {
        spec.kind = ParamKind::Magnitude;
      } else if (kind == "timing") {
        spec.kind = ParamKind::Timing;
      } else if (kind == "spatial") {
        spec.kind = ParamKind::Spatial;
      } else {
        throw config_error("unknown parameter kind: " + kind);
      }
      if (p.contains("bounds")) {
        spec.inf = p.at("bounds").at(0).get<double>();
        spec.sup = p.at("bounds").at(1).get<double>();
      }
      if (p.contains("delta")) spec.delta = p.at("delta").get<double>();
      if (p.contains("polarity")) {
        std::string pol = p.at("polarity").get<std::string>();
        if (pol == "+") {
          spec.declared_polarity = Polarity::Pos;
        } else if (pol == "-") {
          spec.declared_polarity = Polarity::Neg;
        } else {
          throw config_error("polarity must be \"+\" or \"-\"");
        }
      }
      tmpl.params.push_back(std::move(spec));
    }
    for (const auto& name : doc.at("order")) {
      int idx = tmpl.param_index(name.get<std::string>());
      if (idx < 0) throw config_error("order references unknown parameter " + name.dump());
      tmpl.priority.push_back(idx);
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("template JSON is missing fields: ") + e.what());
  }
  // Bound checks inside only apply to bounds given explicitly; data-derived
  // defaults are validated again after resolve_bounds.
  validate_template(tmpl);
  return tmpl;
}

PstrelTemplate load_template_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open template file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_template_json(ss.str());
}

}  // namespace strelmine
