#include "gubs/bounded.hpp"

#include <atomic>
#include <climits>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gubs::logic {
namespace {

using Mask = std::uint64_t;

struct Node {
  Op op = Op::Top;
  int a = -1;
  int b = -1;
  int ref = -1;  // prop, nominal or key index
};

struct Compiled {
  std::vector<Node> nodes;  // children precede parents
  int root = 0;
  std::vector<Prop> props;
  std::vector<std::string> noms;
  std::vector<ContextSet> keys;
};

class Compiler {
 public:
  explicit Compiler(Compiled& out) : out_(out) {}

  void prepare(const Formula& f) {
    Vocabulary v = vocabulary(f);
    for (const auto& p : v.props) prop_ix_.emplace(p, add(out_.props, p));
    for (const auto& n : v.nominals) nom_ix_.emplace(n, add(out_.noms, n));
    for (const auto& k : v.keys) key_ix_.emplace(k, add(out_.keys, k));
  }

  int build(const Formula& f) {
    std::string key = f.canonical();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Node n;
    n.op = f.op();
    switch (f.op()) {
      case Op::Top: break;
      case Op::Prop: n.ref = prop_ix_.at(f.prop()); break;
      case Op::Nom: n.ref = nom_ix_.at(f.nominal()); break;
      case Op::And:
      case Op::Or:
      case Op::Implies:
        n.a = build(f.lhs());
        n.b = build(f.rhs());
        break;
      case Op::At:
        n.ref = nom_ix_.at(f.nominal());
        n.a = build(f.lhs());
        break;
      case Op::Diamond:
      case Op::DiamondConv:
      case Op::Box:
      case Op::BoxConv:
        n.ref = key_ix_.at(f.contexts());
        n.a = build(f.lhs());
        break;
      case Op::Not:
      case Op::Always:
      case Op::Exists: n.a = build(f.lhs()); break;
    }
    out_.nodes.push_back(n);
    int id = static_cast<int>(out_.nodes.size()) - 1;
    memo_.emplace(std::move(key), id);
    return id;
  }

 private:
  template <typename T>
  static int add(std::vector<T>& xs, const T& x) {
    xs.push_back(x);
    return static_cast<int>(xs.size()) - 1;
  }

  Compiled& out_;
  std::map<Prop, int> prop_ix_;
  std::map<std::string, int> nom_ix_;
  std::map<ContextSet, int> key_ix_;
  std::map<std::string, int> memo_;
};

Compiled compile(const Formula& f) {
  Compiled c;
  Compiler comp(c);
  comp.prepare(f);
  c.root = comp.build(f);
  return c;
}

constexpr int kUnknown = -2;
constexpr int kNowhere = -1;

// Partial interpretation: each prop bit and edge bit is known or unknown.
struct Frame {
  int n = 0;
  Mask all = 0;
  std::vector<int> place;
  std::vector<Mask> pk, pv;  // per prop
  std::vector<Mask> ek, ev;  // per key * n + world: successors

  Frame(const Compiled& c, int worlds)
      : n(worlds),
        all((Mask{1} << worlds) - 1),
        place(c.noms.size(), kUnknown),
        pk(c.props.size(), 0),
        pv(c.props.size(), 0),
        ek(c.keys.size() * static_cast<std::size_t>(worlds), 0),
        ev(c.keys.size() * static_cast<std::size_t>(worlds), 0) {}
};

struct Var {
  bool edge = false;
  int idx = 0;  // prop or key
  int from = 0;
  int to = 0;
};

std::vector<Var> variables(const Compiled& c, int n) {
  std::vector<Var> vars;
  for (int w = 0; w < n; ++w) {
    for (int p = 0; p < static_cast<int>(c.props.size()); ++p) vars.push_back({false, p, w, w});
    for (int k = 0; k < static_cast<int>(c.keys.size()); ++k) {
      for (int v = 0; v <= w; ++v) {
        vars.push_back({true, k, w, v});
        if (v < w) vars.push_back({true, k, v, w});
      }
    }
  }
  return vars;
}

void assign(Frame& fr, const Var& v, bool value) {
  if (v.edge) {
    std::size_t i = static_cast<std::size_t>(v.idx) * fr.n + v.from;
    fr.ek[i] |= Mask{1} << v.to;
    if (value) fr.ev[i] |= Mask{1} << v.to;
  } else {
    fr.pk[v.idx] |= Mask{1} << v.from;
    if (value) fr.pv[v.idx] |= Mask{1} << v.from;
  }
}

void unassign(Frame& fr, const Var& v) {
  Mask bit = ~(Mask{1} << (v.edge ? v.to : v.from));
  if (v.edge) {
    std::size_t i = static_cast<std::size_t>(v.idx) * fr.n + v.from;
    fr.ek[i] &= bit;
    fr.ev[i] &= bit;
  } else {
    fr.pk[v.idx] &= bit;
    fr.pv[v.idx] &= bit;
  }
}

// must: worlds where f is true in every completion; may: in some completion.
struct Tri {
  Mask must = 0;
  Mask may = 0;
};

class Evaluator {
 public:
  explicit Evaluator(const Compiled& c) : c_(c), vals_(c.nodes.size()) {}

  Tri run(const Frame& fr) {
    const int n = fr.n;
    const Mask all = fr.all;
    const std::size_t kn = c_.keys.size() * static_cast<std::size_t>(n);
    sure_.assign(kn, 0);
    maybe_.assign(kn, 0);
    sure_t_.assign(kn, 0);
    maybe_t_.assign(kn, 0);
    for (std::size_t i = 0; i < kn; ++i) {
      sure_[i] = fr.ev[i] & fr.ek[i];
      maybe_[i] = (fr.ev[i] | ~fr.ek[i]) & all;
    }
    for (std::size_t k = 0; k < c_.keys.size(); ++k) {
      for (int w = 0; w < n; ++w) {
        for (int v = 0; v < n; ++v) {
          Mask bit = Mask{1} << v;
          if (sure_[k * n + w] & bit) sure_t_[k * n + v] |= Mask{1} << w;
          if (maybe_[k * n + w] & bit) maybe_t_[k * n + v] |= Mask{1} << w;
        }
      }
    }
    for (std::size_t i = 0; i < c_.nodes.size(); ++i) {
      const Node& nd = c_.nodes[i];
      Tri r;
      switch (nd.op) {
        case Op::Top: r = {all, all}; break;
        case Op::Prop:
          r.must = fr.pv[nd.ref] & fr.pk[nd.ref];
          r.may = (fr.pv[nd.ref] | ~fr.pk[nd.ref]) & all;
          break;
        case Op::Nom: {
          int p = fr.place[nd.ref];
          if (p == kUnknown) r = {0, all};
          else if (p >= 0) r = {Mask{1} << p, Mask{1} << p};
          break;
        }
        case Op::Not: {
          const Tri& a = vals_[nd.a];
          r = {~a.may & all, ~a.must & all};
          break;
        }
        case Op::And: {
          const Tri& a = vals_[nd.a];
          const Tri& b = vals_[nd.b];
          r = {a.must & b.must, a.may & b.may};
          break;
        }
        case Op::Or: {
          const Tri& a = vals_[nd.a];
          const Tri& b = vals_[nd.b];
          r = {a.must | b.must, a.may | b.may};
          break;
        }
        case Op::Implies: {
          const Tri& a = vals_[nd.a];
          const Tri& b = vals_[nd.b];
          r = {(~a.may & all) | b.must, (~a.must & all) | b.may};
          break;
        }
        case Op::At: {
          const Tri& a = vals_[nd.a];
          int p = fr.place[nd.ref];
          if (p == kUnknown) {
            r = {0, a.may ? all : 0};
          } else if (p >= 0) {
            Mask bit = Mask{1} << p;
            r = {(a.must & bit) ? all : 0, (a.may & bit) ? all : 0};
          }
          break;
        }
        case Op::Diamond:
        case Op::DiamondConv: {
          const Tri& a = vals_[nd.a];
          bool conv = nd.op == Op::DiamondConv;
          const auto& sure = conv ? sure_t_ : sure_;
          const auto& maybe = conv ? maybe_t_ : maybe_;
          for (int w = 0; w < n; ++w) {
            std::size_t i = static_cast<std::size_t>(nd.ref) * n + w;
            if (sure[i] & a.must) r.must |= Mask{1} << w;
            if (maybe[i] & a.may) r.may |= Mask{1} << w;
          }
          break;
        }
        case Op::Box:
        case Op::BoxConv: {
          const Tri& a = vals_[nd.a];
          bool conv = nd.op == Op::BoxConv;
          const auto& sure = conv ? sure_t_ : sure_;
          const auto& maybe = conv ? maybe_t_ : maybe_;
          for (int w = 0; w < n; ++w) {
            std::size_t i = static_cast<std::size_t>(nd.ref) * n + w;
            if ((maybe[i] & ~a.must) == 0) r.must |= Mask{1} << w;
            if ((sure[i] & ~a.may) == 0) r.may |= Mask{1} << w;
          }
          break;
        }
        case Op::Always: {
          const Tri& a = vals_[nd.a];
          r = {a.must == all ? all : 0, a.may == all ? all : 0};
          break;
        }
        case Op::Exists: {
          const Tri& a = vals_[nd.a];
          r = {a.must ? all : 0, a.may ? all : 0};
          break;
        }
      }
      vals_[i] = r;
    }
    return vals_[c_.root];
  }

 private:
  const Compiled& c_;
  std::vector<Tri> vals_;
  std::vector<Mask> sure_, maybe_, sure_t_, maybe_t_;
};

KripkeModel to_model(const Compiled& c, const Frame& fr) {
  KripkeModel m(fr.n);
  for (std::size_t p = 0; p < c.props.size(); ++p) {
    for (int w = 0; w < fr.n; ++w) {
      if (fr.pv[p] & (Mask{1} << w)) m.set_prop(c.props[p], w);
    }
  }
  for (std::size_t k = 0; k < c.keys.size(); ++k) {
    for (int w = 0; w < fr.n; ++w) {
      for (int v = 0; v < fr.n; ++v) {
        if (fr.ev[k * fr.n + w] & (Mask{1} << v)) m.add_edge(c.keys[k], w, v);
      }
    }
  }
  for (std::size_t a = 0; a < c.noms.size(); ++a) {
    if (fr.place[a] >= 0) m.set_nominal(c.noms[a], fr.place[a]);
  }
  return m;
}

long long placement_count(std::size_t noms, int n) {
  long long total = 1;
  for (std::size_t i = 0; i < noms; ++i) total *= n + 1;
  return total;
}

// Digit 0 is "nowhere", digit d > 0 is world d - 1; first nominal is most significant.
void apply_placement(Frame& fr, long long index) {
  for (std::size_t i = fr.place.size(); i-- > 0;) {
    int digit = static_cast<int>(index % (fr.n + 1));
    index /= fr.n + 1;
    fr.place[i] = digit == 0 ? kNowhere : digit - 1;
  }
}

class Search {
 public:
  Search(const Compiled& c, const std::vector<Var>& vars, std::atomic<std::uint64_t>& steps,
         std::uint64_t budget)
      : c_(c), vars_(vars), steps_(steps), budget_(budget), eval_(c) {}

  // Stop early once a task ordered before `self` has succeeded.
  void watch(const std::atomic<long long>* best, long long self) {
    best_ = best;
    self_ = self;
  }

  bool dfs(Frame& fr, std::size_t i) {
    std::uint64_t s = steps_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (s > budget_) throw BudgetExceeded(s);
    if (best_ && best_->load(std::memory_order_relaxed) < self_) return false;
    Tri r = eval_.run(fr);
    if (r.may != fr.all) return false;
    if (r.must == fr.all) return true;  // unassigned bits stay false
    if (i == vars_.size()) return false;
    assign(fr, vars_[i], false);
    if (dfs(fr, i + 1)) return true;
    unassign(fr, vars_[i]);
    assign(fr, vars_[i], true);
    if (dfs(fr, i + 1)) return true;
    unassign(fr, vars_[i]);
    return false;
  }

 private:
  const Compiled& c_;
  const std::vector<Var>& vars_;
  std::atomic<std::uint64_t>& steps_;
  std::uint64_t budget_;
  Evaluator eval_;
  const std::atomic<long long>* best_ = nullptr;
  long long self_ = 0;
};

void check_bound(int max_worlds) {
  if (max_worlds < 1 || max_worlds > kMaxWorldsCap) {
    throw std::invalid_argument("world bound must be in 1.." + std::to_string(kMaxWorldsCap));
  }
}

}  // namespace

std::optional<KripkeModel> sat_bounded_serial(const Formula& f, int max_worlds,
                                              const BoundedOptions& opts) {
  check_bound(max_worlds);
  Compiled c = compile(f);
  std::atomic<std::uint64_t> steps{0};
  for (int n = 1; n <= max_worlds; ++n) {
    std::vector<Var> vars = variables(c, n);
    Search search(c, vars, steps, opts.budget);
    long long placements = placement_count(c.noms.size(), n);
    for (long long p = 0; p < placements; ++p) {
      Frame fr(c, n);
      apply_placement(fr, p);
      if (search.dfs(fr, 0)) return to_model(c, fr);
    }
  }
  return std::nullopt;
}

std::optional<KripkeModel> sat_bounded(const Formula& f, int max_worlds,
                                       const BoundedOptions& opts) {
  check_bound(max_worlds);
  Compiled c = compile(f);
  std::atomic<std::uint64_t> steps{0};
  for (int n = 1; n <= max_worlds; ++n) {
    std::vector<Var> vars = variables(c, n);
    std::size_t depth = 0;
    long long placements = placement_count(c.noms.size(), n);
    while (depth < vars.size() && depth < 12 && (placements << depth) < 256) ++depth;
    const long long tasks = placements << depth;

    std::atomic<long long> best{LLONG_MAX};
    std::atomic<bool> over{false};
    std::uint64_t over_at = 0;
    std::optional<KripkeModel> found;

    int jobs = opts.jobs;
#ifdef _OPENMP
    if (jobs <= 0) jobs = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
#endif
    for (long long t = 0; t < tasks; ++t) {
      if (over.load() || t > best.load()) continue;
      try {
        Frame fr(c, n);
        apply_placement(fr, t >> depth);
        for (std::size_t i = 0; i < depth; ++i) {
          assign(fr, vars[i], (t >> (depth - 1 - i)) & 1);
        }
        Search search(c, vars, steps, opts.budget);
        search.watch(&best, t);
        if (search.dfs(fr, depth)) {
#ifdef _OPENMP
#pragma omp critical(gubs_bounded_best)
#endif
          {
            if (t < best.load()) {
              best.store(t);
              found = to_model(c, fr);
            }
          }
        }
      } catch (const BudgetExceeded& e) {
#ifdef _OPENMP
#pragma omp critical(gubs_bounded_over)
#endif
        {
          over.store(true);
          over_at = e.explored();
        }
      }
    }
    (void)jobs;
    if (over.load()) throw BudgetExceeded(over_at);
    if (found) return found;
  }
  return std::nullopt;
}

std::optional<KripkeModel> sat_brute_force(const Formula& f, int max_worlds,
                                           std::uint64_t budget) {
  check_bound(max_worlds);
  Compiled c = compile(f);
  std::uint64_t steps = 0;
  for (int n = 1; n <= max_worlds; ++n) {
    std::vector<Var> vars = variables(c, n);
    if (vars.size() >= 40) throw BudgetExceeded(steps);
    long long placements = placement_count(c.noms.size(), n);
    for (long long p = 0; p < placements; ++p) {
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << vars.size()); ++bits) {
        if (++steps > budget) throw BudgetExceeded(steps);
        Frame fr(c, n);
        apply_placement(fr, p);
        for (std::size_t i = 0; i < vars.size(); ++i) {
          assign(fr, vars[i], (bits >> (vars.size() - 1 - i)) & 1);
        }
        KripkeModel m = to_model(c, fr);
        if (validates(m, f)) return m;
      }
    }
  }
  return std::nullopt;
}

}  // namespace gubs::logic
