#include "gubs/tableau.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

namespace gubs::logic {
namespace {

// Sorted branch levels a label entry depends on.
using Deps = std::vector<int>;

Deps join(const Deps& a, const Deps& b) {
  Deps out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Deps without(const Deps& a, int level) {
  Deps out;
  for (int x : a) {
    if (x != level) out.push_back(x);
  }
  return out;
}

bool mentions(const Deps& a, int level) { return std::binary_search(a.begin(), a.end(), level); }

struct Term {
  Op op = Op::Top;
  int a = -1;
  int b = -1;
  int ref = -1;  // nominal or key index
};

// Interned NNF formulas; ids are stable for one run.
class Store {
 public:
  int intern(const Formula& f) {
    std::string text = f.canonical();
    if (auto it = ids_.find(text); it != ids_.end()) return it->second;
    Term t;
    t.op = f.op();
    switch (f.op()) {
      case Op::Top:
      case Op::Prop: break;
      case Op::Nom: t.ref = nominal(f.nominal()); break;
      case Op::Not:
        if (f.lhs().op() != Op::Top && f.lhs().op() != Op::Prop && f.lhs().op() != Op::Nom) {
          throw FragmentError("negation above a compound formula after normalisation");
        }
        t.a = intern(f.lhs());
        break;
      case Op::And:
      case Op::Or:
        t.a = intern(f.lhs());
        t.b = intern(f.rhs());
        break;
      case Op::At:
        t.ref = nominal(f.nominal());
        t.a = intern(f.lhs());
        break;
      case Op::Diamond:
      case Op::DiamondConv:
      case Op::Box:
      case Op::BoxConv:
        t.ref = key(f.contexts());
        t.a = intern(f.lhs());
        break;
      case Op::Always:
      case Op::Exists: t.a = intern(f.lhs()); break;
      case Op::Implies: throw FragmentError("implication left after normalisation");
    }
    int id = static_cast<int>(terms_.size());
    terms_.push_back(t);
    forms_.push_back(f);
    neg_.push_back(-1);
    ids_.emplace(std::move(text), id);
    return id;
  }

  int negation(int id) {
    if (neg_[id] < 0) {
      int n = intern(nnf(Formula::negation(forms_[id])));
      neg_[id] = n;
      neg_[n] = id;
    }
    return neg_[id];
  }

  const Term& term(int id) const { return terms_[id]; }
  const Formula& formula(int id) const { return forms_[id]; }
  int nominal_count() const { return static_cast<int>(noms_.size()); }
  const std::string& nominal_name(int i) const { return noms_[i]; }
  const ContextSet& key_set(int i) const { return keys_[i]; }

 private:
  int nominal(const std::string& n) {
    for (std::size_t i = 0; i < noms_.size(); ++i) {
      if (noms_[i] == n) return static_cast<int>(i);
    }
    noms_.push_back(n);
    return static_cast<int>(noms_.size()) - 1;
  }
  int key(const ContextSet& k) {
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (keys_[i] == k) return static_cast<int>(i);
    }
    keys_.push_back(k);
    return static_cast<int>(keys_.size()) - 1;
  }

  std::vector<Term> terms_;
  std::vector<Formula> forms_;
  std::vector<int> neg_;
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> noms_;
  std::vector<ContextSet> keys_;
};

struct TNode {
  std::map<int, Deps> label;
  int alias = -1;    // set when merged into another node
  int creator = -1;  // node whose diamond produced this one
  bool pruned = false;
};

using EdgeKey = std::tuple<int, int, int>;  // key, from, to

struct State {
  std::vector<TNode> nodes;
  std::map<EdgeKey, Deps> edges;
  std::vector<int> nominal_node;
  std::set<std::pair<int, int>> generated;
  std::set<int> exists_done;
  std::map<int, Deps> globals;
  std::optional<Deps> clash;
};

struct Outcome {
  bool sat = false;
  Deps deps;
  std::optional<KripkeModel> model;
};

class Tableau {
 public:
  Tableau(const Formula& f, const TableauOptions& opts) : input_(f), opts_(opts) {}

  TableauResult run() {
    State s;
    int root = store_.intern(nnf(Formula::always(input_)));
    s.nominal_node.assign(static_cast<std::size_t>(store_.nominal_count()), -1);
    int w = new_node(s);
    add(s, w, root, {});
    Outcome o = solve(std::move(s), 0);
    TableauResult r;
    r.satisfiable = o.sat;
    r.model = std::move(o.model);
    r.steps = steps_;
    r.branches = branches_;
    return r;
  }

 private:
  void tick() {
    if (++steps_ > opts_.budget) throw BudgetExceeded(steps_);
  }

  int resolve(const State& s, int x) const {
    while (x >= 0 && s.nodes[x].alias >= 0) x = s.nodes[x].alias;
    return x;
  }

  bool alive(const State& s, int x) const { return s.nodes[x].alias < 0 && !s.nodes[x].pruned; }

  void grow_nominals(State& s) const {
    s.nominal_node.resize(static_cast<std::size_t>(store_.nominal_count()), -1);
  }

  int new_node(State& s, int creator = -1) {
    if (static_cast<int>(s.nodes.size()) >= opts_.max_nodes) throw BudgetExceeded(steps_);
    s.nodes.emplace_back();
    s.nodes.back().creator = creator;
    int x = static_cast<int>(s.nodes.size()) - 1;
    for (const auto& [g, d] : s.globals) add(s, x, g, d);
    return x;
  }

  // Returns true when the label grew.
  bool add(State& s, int x, int f, const Deps& d) {
    x = resolve(s, x);
    auto& label = s.nodes[x].label;
    if (label.count(f)) return false;
    const Term t = store_.term(f);
    if (t.op == Op::Not && store_.term(t.a).op == Op::Top) {
      if (!s.clash) s.clash = d;
      return false;
    }
    int n = store_.negation(f);
    if (auto it = label.find(n); it != label.end()) {
      if (!s.clash) s.clash = join(d, it->second);
    }
    label.emplace(f, d);
    return true;
  }

  void add_edge(State& s, int k, int from, int to, const Deps& d) {
    s.edges.emplace(EdgeKey{k, from, to}, d);
  }

  // Moves node x into y; `d` justifies their identity.
  void merge(State& s, int x, int y, const Deps& d) {
    auto label = s.nodes[x].label;
    s.nodes[x].alias = y;
    for (const auto& [f, fd] : label) add(s, y, f, join(fd, d));
    std::vector<std::pair<EdgeKey, Deps>> moved;
    for (auto it = s.edges.begin(); it != s.edges.end();) {
      auto [k, from, to] = it->first;
      if (from == x || to == x) {
        moved.push_back({{k, from == x ? y : from, to == x ? y : to}, join(it->second, d)});
        it = s.edges.erase(it);
      } else {
        ++it;
      }
    }
    for (auto& [e, ed] : moved) s.edges.emplace(e, ed);
    prune_below(s, x);
  }

  // Drops unnamed nodes created (transitively) by x; what they propagated stays.
  void prune_below(State& s, int x) {
    std::vector<bool> gone(s.nodes.size(), false);
    gone[x] = true;
    bool any = false;
    for (int z = x + 1; z < static_cast<int>(s.nodes.size()); ++z) {
      int c = s.nodes[z].creator;
      if (c < 0 || !gone[c] || !alive(s, z) || named(s, z)) continue;
      gone[z] = true;
      s.nodes[z].pruned = true;
      any = true;
    }
    if (!any) return;
    for (auto it = s.edges.begin(); it != s.edges.end();) {
      auto [k, from, to] = it->first;
      if (s.nodes[from].pruned || s.nodes[to].pruned) {
        it = s.edges.erase(it);
      } else {
        ++it;
      }
    }
  }

  bool apply(State& s, int x, int f, const Deps& d) {
    const Term t = store_.term(f);
    bool changed = false;
    switch (t.op) {
      case Op::And:
        changed |= add(s, x, t.a, d);
        changed |= add(s, x, t.b, d);
        break;
      case Op::Or: {
        const auto& label = s.nodes[x].label;
        if (label.count(t.a) || label.count(t.b)) break;
        if (auto it = label.find(store_.negation(t.a)); it != label.end()) {
          changed |= add(s, x, t.b, join(d, it->second));
        } else if (auto jt = label.find(store_.negation(t.b)); jt != label.end()) {
          changed |= add(s, x, t.a, join(d, jt->second));
        }
        break;
      }
      case Op::Nom: {
        grow_nominals(s);
        int n = resolve(s, s.nominal_node[t.ref]);
        if (n < 0) {
          s.nominal_node[t.ref] = x;
          changed = true;
        } else if (n != x) {
          merge(s, x, n, join(d, s.nodes[n].label.at(f)));
          changed = true;
        }
        break;
      }
      case Op::At: {
        grow_nominals(s);
        int n = resolve(s, s.nominal_node[t.ref]);
        int nom = store_.intern(Formula::nom(store_.nominal_name(t.ref)));
        if (n < 0) {
          n = new_node(s);
          add(s, n, nom, d);
          s.nominal_node[t.ref] = n;
          changed = true;
        }
        changed |= add(s, n, t.a, join(d, s.nodes[n].label.at(nom)));
        break;
      }
      case Op::Box:
      case Op::BoxConv: {
        bool fwd = t.op == Op::Box;
        std::vector<std::pair<int, Deps>> targets;
        for (const auto& [e, ed] : s.edges) {
          auto [k, from, to] = e;
          if (k != t.ref) continue;
          if (fwd && from == x) targets.push_back({to, ed});
          if (!fwd && to == x) targets.push_back({from, ed});
        }
        for (const auto& [z, ed] : targets) changed |= add(s, z, t.a, join(d, ed));
        break;
      }
      case Op::Always:
        if (!s.globals.count(t.a)) {
          s.globals.emplace(t.a, d);
          changed = true;
        }
        break;
      case Op::Exists:
        if (!s.exists_done.count(f)) {
          s.exists_done.insert(f);
          int z = new_node(s);
          add(s, z, t.a, d);
          changed = true;
        }
        break;
      default: break;
    }
    return changed;
  }

  // Applies every non-generating rule until nothing changes.
  void saturate(State& s) {
    bool changed = true;
    while (changed && !s.clash) {
      changed = false;
      for (int x = 0; x < static_cast<int>(s.nodes.size()) && !s.clash; ++x) {
        if (!alive(s, x)) continue;
        for (const auto& [g, d] : s.globals) changed |= add(s, x, g, d);
        std::vector<std::pair<int, Deps>> entries(s.nodes[x].label.begin(),
                                                  s.nodes[x].label.end());
        for (const auto& [f, d] : entries) {
          tick();
          changed |= apply(s, x, f, d);
          if (s.clash || !alive(s, x)) break;
        }
      }
    }
  }

  struct Branch {
    int node;
    int formula;
    Deps deps;
  };

  std::optional<Branch> open_disjunction(const State& s) const {
    for (int x = 0; x < static_cast<int>(s.nodes.size()); ++x) {
      if (!alive(s, x)) continue;
      const auto& label = s.nodes[x].label;
      for (const auto& [f, d] : label) {
        const Term t = store_.term(f);
        if (t.op != Op::Or) continue;
        if (label.count(t.a) || label.count(t.b)) continue;
        return Branch{x, f, d};
      }
    }
    return std::nullopt;
  }

  struct Blocking {
    std::vector<int> by;        // direct blocker, or -1
    std::vector<bool> dropped;  // created below a blocked node
  };

  bool named(const State& s, int x) const {
    for (const auto& [f, d] : s.nodes[x].label) {
      if (store_.term(f).op == Op::Nom) return true;
    }
    return false;
  }

  // Anywhere equality blocking; nodes created by a blocked node are dropped.
  Blocking blocking(const State& s) const {
    const int n = static_cast<int>(s.nodes.size());
    Blocking b{std::vector<int>(n, -1), std::vector<bool>(n, false)};
    for (int x = 0; x < n; ++x) {
      if (!alive(s, x) || named(s, x)) continue;
      int c = resolve(s, s.nodes[x].creator);
      if (c >= 0 && !named(s, c) && (b.by[c] >= 0 || b.dropped[c])) {
        b.dropped[x] = true;
        continue;
      }
      const auto& lx = s.nodes[x].label;
      for (int y = 0; y < x; ++y) {
        if (!alive(s, y) || b.by[y] >= 0 || b.dropped[y]) continue;
        const auto& ly = s.nodes[y].label;
        if (lx.size() != ly.size()) continue;
        if (std::equal(lx.begin(), lx.end(), ly.begin(),
                       [](const auto& l, const auto& r) { return l.first == r.first; })) {
          b.by[x] = y;
          break;
        }
      }
    }
    return b;
  }

  bool generate(State& s) {
    Blocking b = blocking(s);
    bool changed = false;
    int count = static_cast<int>(s.nodes.size());
    for (int x = 0; x < count; ++x) {
      if (!alive(s, x) || b.by[x] >= 0 || b.dropped[x]) continue;
      std::vector<std::pair<int, Deps>> entries(s.nodes[x].label.begin(),
                                                s.nodes[x].label.end());
      for (const auto& [f, d] : entries) {
        const Term t = store_.term(f);
        if (t.op != Op::Diamond && t.op != Op::DiamondConv) continue;
        if (!s.generated.insert({x, f}).second) continue;
        tick();
        int z = new_node(s, x);
        if (t.op == Op::Diamond) {
          add_edge(s, t.ref, x, z, d);
        } else {
          add_edge(s, t.ref, z, x, d);
        }
        add(s, z, t.a, d);
        changed = true;
      }
    }
    return changed;
  }

  Outcome solve(State s, int depth) {
    for (;;) {
      saturate(s);
      if (s.clash) return Outcome{false, *s.clash, std::nullopt};
      if (auto br = open_disjunction(s)) {
        ++branches_;
        const int level = depth + 1;
        const Term t = store_.term(br->formula);
        State left = s;
        add(left, br->node, t.a, join(br->deps, {level}));
        Outcome r1 = solve(std::move(left), level);
        if (r1.sat || !mentions(r1.deps, level)) return r1;
        Deps because = without(r1.deps, level);
        add(s, br->node, store_.negation(t.a), because);
        add(s, br->node, t.b, join(br->deps, because));
        continue;
      }
      if (generate(s)) continue;
      return Outcome{true, {}, extract(s)};
    }
  }

  KripkeModel extract(const State& s) {
    Blocking b = blocking(s);
    std::vector<int> index(s.nodes.size(), -1);
    int worlds = 0;
    for (int x = 0; x < static_cast<int>(s.nodes.size()); ++x) {
      if (alive(s, x) && !b.dropped[x]) index[x] = worlds++;
    }
    KripkeModel m(worlds);
    std::set<EdgeKey> edges;
    for (const auto& [e, d] : s.edges) {
      if (index[std::get<1>(e)] >= 0 && index[std::get<2>(e)] >= 0) edges.insert(e);
    }

    // A blocked node borrows the witnesses of its blocker.
    for (int x = 0; x < static_cast<int>(s.nodes.size()); ++x) {
      if (index[x] < 0 || b.by[x] < 0) continue;
      int y = b.by[x];
      for (const auto& [f, d] : s.nodes[x].label) {
        const Term t = store_.term(f);
        if (t.op != Op::Diamond && t.op != Op::DiamondConv) continue;
        bool fwd = t.op == Op::Diamond;
        auto witness = [&](int from) -> int {
          for (const auto& [k, a, b] : edges) {
            if (k != t.ref) continue;
            int self = fwd ? a : b;
            int other = fwd ? b : a;
            if (self == from && s.nodes[other].label.count(t.a)) return other;
          }
          return -1;
        };
        if (witness(x) >= 0) continue;
        int z = witness(y);
        if (z < 0) throw std::logic_error("tableau: blocker lacks a witness");
        edges.insert(fwd ? EdgeKey{t.ref, x, z} : EdgeKey{t.ref, z, x});
      }
    }

    for (const auto& [k, a, b] : edges) m.add_edge(store_.key_set(k), index[a], index[b]);
    for (int x = 0; x < static_cast<int>(s.nodes.size()); ++x) {
      if (index[x] < 0) continue;
      for (const auto& [f, d] : s.nodes[x].label) {
        if (store_.term(f).op == Op::Prop) m.set_prop(store_.formula(f).prop(), index[x]);
      }
    }
    for (int a = 0; a < store_.nominal_count(); ++a) {
      if (a >= static_cast<int>(s.nominal_node.size())) break;
      int n = resolve(s, s.nominal_node[a]);
      if (n >= 0) m.set_nominal(store_.nominal_name(a), index[n]);
    }
    if (!validates(m, input_)) {
      throw std::logic_error("tableau: extracted model does not validate the input");
    }
    return m;
  }

  Formula input_;
  TableauOptions opts_;
  Store store_;
  std::uint64_t steps_ = 0;
  int branches_ = 0;
};

}  // namespace

TableauResult run_tableau(const Formula& f, const TableauOptions& opts) {
  return Tableau(f, opts).run();
}

bool sat_tableau(const Formula& f, const TableauOptions& opts) {
  return run_tableau(f, opts).satisfiable;
}

namespace {

Formula refutation(const Formula& q, const Formula& p) {
  const Formula& body = p.op() == Op::Always ? p.lhs() : p;
  return Formula::conj(q, Formula::exists(Formula::negation(body)));
}

}  // namespace

bool entails(const Formula& q, const Formula& p, const TableauOptions& opts) {
  return !sat_tableau(refutation(q, p), opts);
}

std::optional<KripkeModel> entailment_counter_model(const Formula& q, const Formula& p,
                                                    const TableauOptions& opts) {
  return run_tableau(refutation(q, p), opts).model;
}

}  // namespace gubs::logic
