#include "cover.hpp"

#include <algorithm>

#include "gubs/bounded.hpp"

namespace gubs::synthesis::detail {

namespace {

bool single_var(const StateCollection& c) {
  if (c.states.size() != 1) return false;
  const auto& s = c.states[0];
  return s.polarity == Polarity::Positive && !s.attribute && s.agent.is_variable();
}

bool unify(const Ident& g, const Ident& l, Substitution& s, bool bind) {
  if (s.apply(g) == l) return true;
  if (!bind || s.binds(g) || !g.is_variable()) return false;
  // plain goal variables only take library constants; fresh ones take anything
  if (!l.is_constant() && !is_fresh(g)) return false;
  try {
    s.bind(g, l);
  } catch (const InvalidSubstitution&) {
    return false;
  }
  return s.apply(g) == l;
}

bool unify(const AgentState& g, const AgentState& l, Substitution& s, bool bind) {
  if (g.polarity != l.polarity || g.path.size() != l.path.size()) return false;
  if (g.attribute.has_value() != l.attribute.has_value()) return false;
  for (std::size_t i = 0; i < g.path.size(); ++i) {
    if (!unify(g.path[i], l.path[i], s, bind)) return false;
  }
  if (!unify(g.agent, l.agent, s, bind)) return false;
  return !g.attribute || unify(*g.attribute, *l.attribute, s, bind);
}

// Every element of `need` is matched by some element of `pool`.
template <typename T>
bool each_in(const std::vector<T>& need, const std::vector<T>& pool, bool need_is_goal, std::size_t i,
             const Substitution& s, bool bind, const Continue& k) {
  if (i == need.size()) {
    Substitution copy = s;
    return k(copy);
  }
  for (const auto& p : pool) {
    Substitution next = s;
    bool ok = need_is_goal ? unify(need[i], p, next, bind) : unify(p, need[i], next, bind);
    if (ok && each_in(need, pool, need_is_goal, i + 1, next, bind, k)) return true;
  }
  return false;
}

bool kind_covers(DependenceKind goal, DependenceKind lib, Role role) {
  switch (lib) {
    case DependenceKind::Persistent: return true;
    case DependenceKind::Normal:
      if (goal == DependenceKind::Persistent) return role == Role::Head;
      return true;
    case DependenceKind::Remanent: return goal == DependenceKind::Remanent;
  }
  return false;
}

bool attributes_present(const AttributeMap& goal, const AttributeMap& lib, const Substitution& s) {
  for (const auto& [key, rels] : goal) {
    semantics::AgentKey k{{}, s.apply(key.agent)};
    for (const auto& c : key.path) k.path.push_back(s.apply(c));
    auto it = lib.find(k);
    if (it == lib.end()) return false;
    for (const auto& r : rels) {
      AttrRel q = r;
      q.left = s.apply(r.left);
      if (r.right) q.right = s.apply(*r.right);
      if (!it->second.count(q)) return false;
    }
  }
  return true;
}

AgentState sub_state(const AgentState& a, const Substitution& s) {
  AgentState out = a;
  for (auto& c : out.path) c = s.apply(c);
  out.agent = s.apply(a.agent);
  if (a.attribute) out.attribute = s.apply(*a.attribute);
  return out;
}

StateCollection sub_coll(const StateCollection& c, const Substitution& s) {
  StateCollection out;
  for (const auto& a : c.states) out.states.push_back(sub_state(a, s));
  return out;
}

Behaviour wrap(const std::vector<Ident>& path, Behaviour b) {
  for (auto it = path.rbegin(); it != path.rend(); ++it) b = Behaviour{CompartmentB{*it, {std::move(b)}}};
  return b;
}

StateCollection strip(const StateCollection& c, const std::vector<Ident>& prefix) {
  StateCollection out = c;
  for (auto& s : out.states) {
    if (s.path.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), s.path.begin())) {
      s.path.erase(s.path.begin(), s.path.begin() + static_cast<long>(prefix.size()));
    }
  }
  return out;
}

}  // namespace

void Budget::spend() {
  if (++used > limit) throw logic::BudgetExceeded(used);
}

std::vector<Role> chain_roles(const std::vector<NormalizedDependence>& deps) {
  std::vector<Role> roles(deps.size(), Role::Plain);
  auto produced_elsewhere = [&](const AgentState& s, std::size_t self) {
    for (std::size_t j = 0; j < deps.size(); ++j) {
      if (j != self && single_var(deps[j].effect) && deps[j].effect.states[0] == s) return true;
    }
    return false;
  };
  auto consumed_elsewhere = [&](const AgentState& s, std::size_t self) {
    for (std::size_t j = 0; j < deps.size(); ++j) {
      if (j != self && single_var(deps[j].cause) && deps[j].cause.states[0] == s) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < deps.size(); ++i) {
    const auto& d = deps[i];
    if (single_var(d.cause) && produced_elsewhere(d.cause.states[0], i)) {
      roles[i] = Role::Inner;
    } else if (single_var(d.effect) && consumed_elsewhere(d.effect.states[0], i)) {
      roles[i] = Role::Head;
    }
  }
  return roles;
}

bool match_link(const Link& goal, const LibraryDep& lib, Substitution sigma, bool bind, const Continue& k) {
  const auto& g = goal.dep;
  const auto& l = *lib.dep;
  if (!kind_covers(g.kind, l.kind, goal.role)) return false;
  if (g.compartment.size() != l.compartment.size()) return false;
  for (std::size_t i = 0; i < g.compartment.size(); ++i) {
    if (!unify(g.compartment[i], l.compartment[i], sigma, bind)) return false;
  }
  std::vector<Ident> gctx(g.contexts.begin(), g.contexts.end());
  std::vector<Ident> lctx(l.contexts.begin(), l.contexts.end());
  const bool exact = goal.role != Role::Inner;
  if (exact && gctx.size() != lctx.size()) return false;

  auto after_effect = [&](Substitution& s) {
    return attributes_present(g.attributes, *lib.attributes, s) && k(s);
  };
  auto after_cause = [&](Substitution& s) {
    return each_in(l.effect.states, g.effect.states, false, 0, s, bind, after_effect);
  };
  auto after_contexts = [&](Substitution& s) {
    return each_in(g.cause.states, l.cause.states, true, 0, s, bind, after_cause);
  };
  auto after_lib_ctx = [&](Substitution& s) {
    if (!exact) return after_contexts(s);
    return each_in(gctx, lctx, true, 0, s, bind, after_contexts);
  };
  return each_in(lctx, gctx, false, 0, sigma, bind, after_lib_ctx);
}

Program program_of(const std::vector<NormalizedDependence>& deps, const AttributeMap& extra) {
  AttributeMap attrs = extra;
  for (const auto& d : deps) {
    for (const auto& [k, rels] : d.attributes) attrs[k].insert(rels.begin(), rels.end());
  }
  Program p;
  for (const auto& [k, rels] : attrs) {
    AttrDeclB decl{{k.agent}, std::vector<AttrRel>(rels.begin(), rels.end())};
    p.behaviours.push_back(wrap(k.path, Behaviour{std::move(decl)}));
  }
  for (const auto& d : deps) {
    Behaviour b{Dependence{d.kind, strip(d.cause, d.compartment), strip(d.effect, d.compartment)}};
    if (!d.contexts.empty()) {
      b = Behaviour{ContextB{std::vector<Ident>(d.contexts.begin(), d.contexts.end()), {std::move(b)}}};
    }
    p.behaviours.push_back(wrap(d.compartment, std::move(b)));
  }
  return p;
}

std::vector<NormalizedDependence> substituted(const std::vector<NormalizedDependence>& deps,
                                              const Substitution& s) {
  std::vector<NormalizedDependence> out;
  for (const auto& d : deps) {
    NormalizedDependence e;
    for (const auto& c : d.compartment) e.compartment.push_back(s.apply(c));
    for (const auto& c : d.contexts) e.contexts.insert(s.apply(c));
    e.kind = d.kind;
    e.cause = sub_coll(d.cause, s);
    e.effect = sub_coll(d.effect, s);
    for (const auto& [k, rels] : d.attributes) {
      semantics::AgentKey key{{}, s.apply(k.agent)};
      for (const auto& c : k.path) key.path.push_back(s.apply(c));
      for (const auto& r : rels) {
        AttrRel q = r;
        q.left = s.apply(r.left);
        if (r.right) q.right = s.apply(*r.right);
        e.attributes[key].insert(q);
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

NormalizedDependence canonical(NormalizedDependence d) {
  for (auto* c : {&d.cause, &d.effect}) {
    std::sort(c->states.begin(), c->states.end());
    c->states.erase(std::unique(c->states.begin(), c->states.end()), c->states.end());
  }
  return d;
}

}  // namespace gubs::synthesis::detail
