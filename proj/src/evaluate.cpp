#include "strelmine/evaluate.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "strelmine/errors.hpp"

namespace strelmine {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hard ceiling on walk-enumeration states per spatial evaluation; guards
// against pathological distance bounds (tiny minimum edge weight under a
// huge d2, or unbounded intervals on dense graphs).
constexpr std::size_t kStateBudget = 2'000'000;

struct RobustSem {
  using V = double;
  static V top() { return kInf; }
  static V bottom() { return -kInf; }
  static V meet(V a, V b) { return a < b ? a : b; }
  static V join(V a, V b) { return a > b ? a : b; }
  static V neg(V a) { return -a; }
  static V atom(double x, Cmp cmp, double c) {
    switch (cmp) {
      case Cmp::Gt:
      case Cmp::Ge:
        return x - c;
      case Cmp::Lt:
      case Cmp::Le:
        return c - x;
    }
    return 0.0;
  }
};

struct BoolSem {
  using V = char;  // 0 / 1
  static V top() { return 1; }
  static V bottom() { return 0; }
  static V meet(V a, V b) { return a && b; }
  static V join(V a, V b) { return a || b; }
  static V neg(V a) { return a ? 0 : 1; }
  static V atom(double x, Cmp cmp, double c) {
    switch (cmp) {
      case Cmp::Gt: return x > c;
      case Cmp::Ge: return x >= c;
      case Cmp::Lt: return x < c;
      case Cmp::Le: return x <= c;
    }
    return 0;
  }
};

}  // namespace

int reach_hop_bound(const SpatialModel& model, double d2_m) {
  if (model.num_undirected_edges() == 0) return 0;
  if (std::isinf(d2_m)) return model.num_locations();
  const double dmin = model.min_edge_weight();
  if (d2_m / dmin > 1e6) {
    throw eval_error("distance bound is too large relative to the smallest edge weight");
  }
  int k = static_cast<int>(d2_m / dmin) + 1;
  while (k > 1 && (static_cast<double>(k - 1) * dmin) > d2_m) --k;
  while (static_cast<double>(k) * dmin <= d2_m) ++k;
  return k;
}

struct Evaluator::Impl {
  const SpatialModel& model;
  const SpatioTemporalTrace& trace;
  FormulaPtr root_input;

  struct Node {
    Op op = Op::True;
    int kid0 = -1;
    int kid1 = -1;
    int var = -1;  // trace variable index for atoms
    Cmp cmp = Cmp::Gt;
    double threshold = 0.0;
    double lo = 0.0;
    double hi = 0.0;
  };

  std::vector<Node> nodes;
  int root = -1;
  int num_loc = 0;
  int num_t = 0;
  std::vector<int> trace_loc;  // model location index -> trace location index

  // Lazy per-node value tables, indexed loc * num_t + t.
  std::vector<std::vector<double>> rob_vals;
  std::vector<std::vector<char>> rob_done;
  std::vector<std::vector<char>> sat_vals;
  std::vector<std::vector<char>> sat_done;

  Impl(const SpatialModel& m, const SpatioTemporalTrace& tr, FormulaPtr f)
      : model(m), trace(tr), root_input(std::move(f)) {
    num_loc = model.num_locations();
    num_t = trace.num_samples();
    trace_loc.resize(num_loc);
    for (int i = 0; i < num_loc; ++i) {
      int idx = trace.location_index(model.locations()[i].id);
      if (idx < 0) {
        throw data_error("no trace series for location " + model.locations()[i].id);
      }
      trace_loc[i] = idx;
    }
    FormulaPtr core = desugar(root_input);
    std::unordered_map<const Formula*, int> memo;
    root = intern(core, memo);
    rob_vals.resize(nodes.size());
    rob_done.resize(nodes.size());
    sat_vals.resize(nodes.size());
    sat_done.resize(nodes.size());
  }

  int intern(const FormulaPtr& f, std::unordered_map<const Formula*, int>& memo) {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    Node n;
    n.op = f->op;
    switch (f->op) {
      case Op::True:
        break;
      case Op::Atom: {
        if (f->threshold.is_hole()) {
          throw eval_error("formula has an unresolved parameter hole: $" + f->threshold.hole);
        }
        n.var = trace.variable_index(f->var);
        if (n.var < 0) throw eval_error("variable absent from trace: " + f->var);
        n.cmp = f->cmp;
        n.threshold = f->threshold.value;
        break;
      }
      case Op::Not:
        n.kid0 = intern(f->kids[0], memo);
        break;
      case Op::And:
        n.kid0 = intern(f->kids[0], memo);
        n.kid1 = intern(f->kids[1], memo);
        break;
      case Op::Until:
      case Op::Reach: {
        if (f->interval.lo.is_hole() || f->interval.hi.is_hole()) {
          throw eval_error("formula has an unresolved interval parameter");
        }
        n.lo = f->interval.lo.value;
        n.hi = f->interval.hi.value;
        n.kid0 = intern(f->kids[0], memo);
        n.kid1 = intern(f->kids[1], memo);
        break;
      }
      case Op::Escape: {
        if (f->interval.lo.is_hole() || f->interval.hi.is_hole()) {
          throw eval_error("formula has an unresolved interval parameter");
        }
        n.lo = f->interval.lo.value;
        n.hi = f->interval.hi.value;
        n.kid0 = intern(f->kids[0], memo);
        break;
      }
      default:
        throw eval_error("derived operator survived desugaring");
    }
    nodes.push_back(n);
    int id = static_cast<int>(nodes.size()) - 1;
    memo.emplace(f.get(), id);
    return id;
  }

  template <class Sem>
  std::vector<typename Sem::V>& table(int node);
  template <class Sem>
  std::vector<char>& done_table(int node);

  // Walk-enumeration kernel shared by reach and escape. Computes, for every
  // start location, the best candidate over routes that first visit some
  // target at an accumulated distance within [d1, d2]: the target scores
  // r_end, every strictly earlier position scores r_pre. Escape passes the
  // same field for both.
  template <class Sem>
  std::vector<typename Sem::V> reach_kernel(const std::vector<typename Sem::V>& r_pre,
                                            const std::vector<typename Sem::V>& r_end,
                                            double d1, double d2) const {
    using V = typename Sem::V;
    const int n = num_loc;
    std::vector<V> out(n, Sem::bottom());
    if (d2 < d1) return out;
    const bool self_ok = (d1 <= 0.0);
    if (self_ok) {
      for (int i = 0; i < n; ++i) out[i] = Sem::join(out[i], r_end[i]);
    }
    const int max_hops = reach_hop_bound(model, d2);
    if (max_hops == 0) return out;
    const bool unbounded = std::isinf(d2);
    std::size_t states = 0;

    // Distance -> best prefix score for walks of exactly h hops that end at
    // the target without touching it earlier. Distances accumulate from the
    // target side outward; under an unbounded upper limit they saturate at
    // d1 since only the comparison with d1 remains relevant.
    std::vector<std::map<double, V>> layer(n), next(n);
    for (int target = 0; target < n; ++target) {
      for (int i = 0; i < n; ++i) layer[i].clear();
      for (const auto& nb : model.neighbors(target)) {
        double d = unbounded && nb.weight_m >= d1 ? d1 : nb.weight_m;
        if (!unbounded && d > d2) continue;
        auto [it, inserted] = layer[nb.index].try_emplace(d, r_pre[nb.index]);
        if (!inserted) it->second = Sem::join(it->second, r_pre[nb.index]);
      }
      for (int h = 1; h <= max_hops; ++h) {
        bool any = false;
        for (int u = 0; u < n; ++u) {
          for (const auto& [d, val] : layer[u]) {
            any = true;
            if (d >= d1 && d <= d2) {
              out[u] = Sem::join(out[u], Sem::meet(r_end[target], val));
            }
          }
        }
        if (!any || h == max_hops) break;
        for (int i = 0; i < n; ++i) next[i].clear();
        for (int v = 0; v < n; ++v) {
          if (layer[v].empty()) continue;
          for (const auto& nb : model.neighbors(v)) {
            const int u = nb.index;
            if (u == target) continue;
            const V ru = r_pre[u];
            for (const auto& [d, val] : layer[v]) {
              double nd = nb.weight_m + d;
              if (!unbounded && nd > d2) continue;
              if (unbounded && nd >= d1) nd = d1;
              V nv = Sem::meet(ru, val);
              auto [it, inserted] = next[u].try_emplace(nd, nv);
              if (!inserted) it->second = Sem::join(it->second, nv);
              if (++states > kStateBudget) {
                throw eval_error("spatial operator exceeded the route enumeration budget");
              }
            }
          }
        }
        layer.swap(next);
      }
    }
    return out;
  }

  template <class Sem>
  typename Sem::V value(int id, int loc, int t) {
    auto& tab = table<Sem>(id);
    auto& done = done_table<Sem>(id);
    if (tab.empty()) {
      tab.assign(static_cast<std::size_t>(num_loc) * num_t, typename Sem::V());
      done.assign(static_cast<std::size_t>(num_loc) * num_t, 0);
    }
    const std::size_t slot = static_cast<std::size_t>(loc) * num_t + t;
    if (done[slot]) return tab[slot];
    const Node& n = nodes[id];
    typename Sem::V result;
    switch (n.op) {
      case Op::True:
        result = Sem::top();
        break;
      case Op::Atom:
        result = Sem::atom(trace.value(trace_loc[loc], t, n.var), n.cmp, n.threshold);
        break;
      case Op::Not:
        result = Sem::neg(value<Sem>(n.kid0, loc, t));
        break;
      case Op::And:
        result = Sem::meet(value<Sem>(n.kid0, loc, t), value<Sem>(n.kid1, loc, t));
        break;
      case Op::Until: {
        const auto& ts = trace.timestamps();
        typename Sem::V acc = Sem::bottom();
        typename Sem::V prefix = Sem::top();
        for (int j = t; j < num_t; ++j) {
          const double off = ts[j] - ts[t];
          if (off > n.hi) break;
          if (off >= n.lo) {
            acc = Sem::join(acc, Sem::meet(value<Sem>(n.kid1, loc, j), prefix));
          }
          prefix = Sem::meet(prefix, value<Sem>(n.kid0, loc, j));
        }
        result = acc;
        break;
      }
      case Op::Reach:
      case Op::Escape: {
        // Whole spatial slice at this time, cached for every location.
        std::vector<typename Sem::V> pre(num_loc), end(num_loc);
        for (int l = 0; l < num_loc; ++l) pre[l] = value<Sem>(n.kid0, l, t);
        if (n.op == Op::Reach) {
          for (int l = 0; l < num_loc; ++l) end[l] = value<Sem>(n.kid1, l, t);
        } else {
          end = pre;
        }
        auto slice = reach_kernel<Sem>(pre, end, n.lo, n.hi);
        for (int l = 0; l < num_loc; ++l) {
          const std::size_t s = static_cast<std::size_t>(l) * num_t + t;
          tab[s] = slice[l];
          done[s] = 1;
        }
        return tab[slot];
      }
      default:
        throw eval_error("derived operator survived desugaring");
    }
    tab[slot] = result;
    done[slot] = 1;
    return result;
  }

  void check_point(int loc, int t) const {
    if (loc < 0 || loc >= num_loc) throw eval_error("location index out of range");
    if (t < 0 || t >= num_t) throw eval_error("time index outside the trace grid");
  }
};

template <>
std::vector<double>& Evaluator::Impl::table<RobustSem>(int node) {
  return rob_vals[node];
}
template <>
std::vector<char>& Evaluator::Impl::table<BoolSem>(int node) {
  return sat_vals[node];
}
template <>
std::vector<char>& Evaluator::Impl::done_table<RobustSem>(int node) {
  return rob_done[node];
}
template <>
std::vector<char>& Evaluator::Impl::done_table<BoolSem>(int node) {
  return sat_done[node];
}

Evaluator::Evaluator(const SpatialModel& model, const SpatioTemporalTrace& trace,
                     FormulaPtr formula)
    : impl_(std::make_unique<Impl>(model, trace, std::move(formula))) {}

Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

double Evaluator::robustness(int location, int time) {
  impl_->check_point(location, time);
  return impl_->value<RobustSem>(impl_->root, location, time);
}

bool Evaluator::satisfies(int location, int time) {
  impl_->check_point(location, time);
  return impl_->value<BoolSem>(impl_->root, location, time) != 0;
}

int Evaluator::num_locations() const { return impl_->num_loc; }
int Evaluator::num_samples() const { return impl_->num_t; }

double robustness(const FormulaPtr& formula, const SpatialModel& model,
                  const SpatioTemporalTrace& trace, int location, int time) {
  Evaluator ev(model, trace, formula);
  return ev.robustness(location, time);
}

bool satisfies(const FormulaPtr& formula, const SpatialModel& model,
               const SpatioTemporalTrace& trace, int location, int time) {
  Evaluator ev(model, trace, formula);
  return ev.satisfies(location, time);
}

}  // namespace strelmine
