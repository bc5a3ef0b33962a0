#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace strelmine {

enum class Cmp { Gt, Ge, Lt, Le };

// A numeric slot that is either a literal value or a named parameter hole
// (written `$name` in the DSL). Template skeletons carry holes; formulas
// fed to the evaluators must be concrete.
struct Scalar {
  double value = 0.0;
  std::string hole;

  bool is_hole() const { return !hole.empty(); }

  static Scalar lit(double v) { return Scalar{v, {}}; }
  static Scalar param(std::string name) { return Scalar{0.0, std::move(name)}; }
};

// Closed interval [lo, hi]; hi may be +infinity for distance intervals.
struct Interval {
  Scalar lo = Scalar::lit(0.0);
  Scalar hi = Scalar::lit(std::numeric_limits<double>::infinity());

  bool contains(double d) const { return d >= lo.value && d <= hi.value; }
};

enum class Op {
  True,
  Atom,
  Not,
  And,
  Or,
  Until,       // time interval
  Eventually,  // time interval
  Globally,    // time interval
  Reach,       // distance interval, 2 children
  Escape,      // distance interval, 1 child
  Somewhere,   // distance interval, 1 child
  Everywhere,  // distance interval, 1 child
  Surround     // distance interval, 2 children
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op = Op::True;
  // Atom fields.
  std::string var;
  Cmp cmp = Cmp::Gt;
  Scalar threshold;
  // Temporal/spatial operator interval.
  Interval interval;
  std::vector<FormulaPtr> kids;
};

FormulaPtr f_true();
FormulaPtr f_atom(std::string var, Cmp cmp, Scalar threshold);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_until(Interval i, FormulaPtr a, FormulaPtr b);
FormulaPtr f_eventually(Interval i, FormulaPtr a);
FormulaPtr f_globally(Interval i, FormulaPtr a);
FormulaPtr f_reach(Interval i, FormulaPtr a, FormulaPtr b);
FormulaPtr f_escape(Interval i, FormulaPtr a);
FormulaPtr f_somewhere(Interval i, FormulaPtr a);
FormulaPtr f_everywhere(Interval i, FormulaPtr a);
FormulaPtr f_surround(Interval i, FormulaPtr a, FormulaPtr b);

bool is_temporal(Op op);
bool is_spatial(Op op);

// Rewrites derived operators into the core set {True, Atom, Not, And,
// Until, Reach, Escape}:
//   a | b             -> !(!a & !b)
//   F[I] a            -> true U[I] a
//   G[I] a            -> !(true U[I] !a)
//   somewhere[D] a    -> true R[D] a
//   everywhere[D] a   -> !(true R[D] !a)
//   surround[d1,d2](a, b) -> a & !(a R[d1,d2] !(a | b)) & !(E[d2,inf] a)
FormulaPtr desugar(const FormulaPtr& f);

bool is_concrete(const Formula& f);
bool structurally_equal(const Formula& a, const Formula& b);
int formula_size(const Formula& f);

std::string to_string(const Formula& f);
std::string to_string(const Scalar& s);
std::string to_string(const Interval& i);
std::string to_string(Cmp cmp);

}  // namespace strelmine
