#include "strelmine/formula.hpp"

#include <cmath>

#include "strelmine/csvio.hpp"
#include "strelmine/errors.hpp"

namespace strelmine {

namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

FormulaPtr f_true() {
  static const FormulaPtr t = make(Formula{});
  return t;
}

FormulaPtr f_atom(std::string var, Cmp cmp, Scalar threshold) {
  Formula f;
  f.op = Op::Atom;
  f.var = std::move(var);
  f.cmp = cmp;
  f.threshold = std::move(threshold);
  return make(std::move(f));
}

namespace {
FormulaPtr unary(Op op, Interval i, FormulaPtr a) {
  Formula f;
  f.op = op;
  f.interval = std::move(i);
  f.kids = {std::move(a)};
  return make(std::move(f));
}

FormulaPtr binary(Op op, Interval i, FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.op = op;
  f.interval = std::move(i);
  f.kids = {std::move(a), std::move(b)};
  return make(std::move(f));
}
}  // namespace

FormulaPtr f_not(FormulaPtr a) {
  Formula f;
  f.op = Op::Not;
  f.kids = {std::move(a)};
  return make(std::move(f));
}

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.op = Op::And;
  f.kids = {std::move(a), std::move(b)};
  return make(std::move(f));
}

FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.op = Op::Or;
  f.kids = {std::move(a), std::move(b)};
  return make(std::move(f));
}

FormulaPtr f_until(Interval i, FormulaPtr a, FormulaPtr b) {
  return binary(Op::Until, std::move(i), std::move(a), std::move(b));
}
FormulaPtr f_eventually(Interval i, FormulaPtr a) {
  return unary(Op::Eventually, std::move(i), std::move(a));
}
FormulaPtr f_globally(Interval i, FormulaPtr a) {
  return unary(Op::Globally, std::move(i), std::move(a));
}
FormulaPtr f_reach(Interval i, FormulaPtr a, FormulaPtr b) {
  return binary(Op::Reach, std::move(i), std::move(a), std::move(b));
}
FormulaPtr f_escape(Interval i, FormulaPtr a) {
  return unary(Op::Escape, std::move(i), std::move(a));
}
FormulaPtr f_somewhere(Interval i, FormulaPtr a) {
  return unary(Op::Somewhere, std::move(i), std::move(a));
}
FormulaPtr f_everywhere(Interval i, FormulaPtr a) {
  return unary(Op::Everywhere, std::move(i), std::move(a));
}
FormulaPtr f_surround(Interval i, FormulaPtr a, FormulaPtr b) {
  return binary(Op::Surround, std::move(i), std::move(a), std::move(b));
}

bool is_temporal(Op op) {
  return op == Op::Until || op == Op::Eventually || op == Op::Globally;
}

bool is_spatial(Op op) {
  return op == Op::Reach || op == Op::Escape || op == Op::Somewhere ||
         op == Op::Everywhere || op == Op::Surround;
}

FormulaPtr desugar(const FormulaPtr& f) {
  switch (f->op) {
    case Op::True:
    case Op::Atom:
      return f;
    case Op::Not: {
      auto a = desugar(f->kids[0]);
      return a == f->kids[0] ? f : f_not(a);
    }
    case Op::And: {
      auto a = desugar(f->kids[0]);
      auto b = desugar(f->kids[1]);
      return (a == f->kids[0] && b == f->kids[1]) ? f : f_and(a, b);
    }
    case Op::Or:
      return f_not(f_and(f_not(desugar(f->kids[0])), f_not(desugar(f->kids[1]))));
    case Op::Until: {
      auto a = desugar(f->kids[0]);
      auto b = desugar(f->kids[1]);
      return (a == f->kids[0] && b == f->kids[1]) ? f : f_until(f->interval, a, b);
    }
    case Op::Eventually:
      return f_until(f->interval, f_true(), desugar(f->kids[0]));
    case Op::Globally:
      return f_not(f_until(f->interval, f_true(), f_not(desugar(f->kids[0]))));
    case Op::Reach: {
      auto a = desugar(f->kids[0]);
      auto b = desugar(f->kids[1]);
      return (a == f->kids[0] && b == f->kids[1]) ? f : f_reach(f->interval, a, b);
    }
    case Op::Escape: {
      auto a = desugar(f->kids[0]);
      return a == f->kids[0] ? f : f_escape(f->interval, a);
    }
    case Op::Somewhere:
      return f_reach(f->interval, f_true(), desugar(f->kids[0]));
    case Op::Everywhere:
      return f_not(f_reach(f->interval, f_true(), f_not(desugar(f->kids[0]))));
    case Op::Surround: {
      auto a = desugar(f->kids[0]);
      auto b = desugar(f->kids[1]);
      // a & !(a R[d1,d2] !(a | b)) & !(E[d2,inf] a)
      auto not_a_or_b = f_and(f_not(a), f_not(b));
      auto reach_part = f_not(f_reach(f->interval, a, not_a_or_b));
      Interval esc;
      esc.lo = f->interval.hi;
      esc.hi = Scalar::lit(std::numeric_limits<double>::infinity());
      auto escape_part = f_not(f_escape(esc, a));
      return f_and(a, f_and(reach_part, escape_part));
    }
  }
  throw eval_error("unknown operator in desugar");
}

bool is_concrete(const Formula& f) {
  if (f.op == Op::Atom && f.threshold.is_hole()) return false;
  if ((is_temporal(f.op) || is_spatial(f.op)) &&
      (f.interval.lo.is_hole() || f.interval.hi.is_hole())) {
    return false;
  }
  for (const auto& k : f.kids) {
    if (!is_concrete(*k)) return false;
  }
  return true;
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.op != b.op || a.kids.size() != b.kids.size()) return false;
  auto scalar_eq = [](const Scalar& x, const Scalar& y) {
    if (x.is_hole() || y.is_hole()) return x.hole == y.hole;
    return x.value == y.value;
  };
  if (a.op == Op::Atom) {
    if (a.var != b.var || a.cmp != b.cmp || !scalar_eq(a.threshold, b.threshold)) return false;
  }
  if (is_temporal(a.op) || is_spatial(a.op)) {
    if (!scalar_eq(a.interval.lo, b.interval.lo) || !scalar_eq(a.interval.hi, b.interval.hi)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (!structurally_equal(*a.kids[i], *b.kids[i])) return false;
  }
  return true;
}

int formula_size(const Formula& f) {
  int n = 1;
  for (const auto& k : f.kids) n += formula_size(*k);
  return n;
}

std::string to_string(Cmp cmp) {
  switch (cmp) {
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
  }
  return "?";
}

std::string to_string(const Scalar& s) {
  if (s.is_hole()) return "$" + s.hole;
  if (std::isinf(s.value)) return s.value > 0 ? "inf" : "-inf";
  return csv::format_double(s.value);
}

std::string to_string(const Interval& i) {
  return "[" + to_string(i.lo) + "," + to_string(i.hi) + "]";
}

namespace {

std::string wrap(const Formula& f) {
  if (f.op == Op::True || f.op == Op::Atom) return to_string(f);
  return "(" + to_string(f) + ")";
}

}  // namespace

std::string to_string(const Formula& f) {
  switch (f.op) {
    case Op::True:
      return "true";
    case Op::Atom:
      return f.var + " " + to_string(f.cmp) + " " + to_string(f.threshold);
    case Op::Not:
      return "!" + wrap(*f.kids[0]);
    case Op::And:
      return wrap(*f.kids[0]) + " & " + wrap(*f.kids[1]);
    case Op::Or:
      return wrap(*f.kids[0]) + " | " + wrap(*f.kids[1]);
    case Op::Until:
      return wrap(*f.kids[0]) + " U" + to_string(f.interval) + " " + wrap(*f.kids[1]);
    case Op::Eventually:
      return "F" + to_string(f.interval) + " " + wrap(*f.kids[0]);
    case Op::Globally:
      return "G" + to_string(f.interval) + " " + wrap(*f.kids[0]);
    case Op::Reach:
      return wrap(*f.kids[0]) + " R" + to_string(f.interval) + " " + wrap(*f.kids[1]);
    case Op::Escape:
      return "E" + to_string(f.interval) + " " + wrap(*f.kids[0]);
    case Op::Somewhere:
      return "somewhere" + to_string(f.interval) + " " + wrap(*f.kids[0]);
    case Op::Everywhere:
      return "everywhere" + to_string(f.interval) + " " + wrap(*f.kids[0]);
    case Op::Surround:
      return "surround" + to_string(f.interval) + " (" + to_string(*f.kids[0]) + ", " +
             to_string(*f.kids[1]) + ")";
  }
  return "?";
}

}  // namespace strelmine
