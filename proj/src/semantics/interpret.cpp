#include <algorithm>

#include "gubs/semantics.hpp"

namespace gubs::semantics {

using logic::ContextSet;
using logic::Prop;

namespace {

std::vector<Ident> extend(const std::vector<Ident>& prefix, const std::vector<Ident>& more) {
  std::vector<Ident> out = prefix;
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

Prop prop_of(const std::vector<Ident>& path, const Ident& agent,
             const std::optional<Ident>& attribute) {
  Prop p;
  for (const auto& c : path) p.path.push_back(c.text);
  p.agent = agent.text;
  if (attribute) p.attribute = attribute->text;
  return p;
}

Formula state_formula(const AgentState& s, const std::vector<Ident>& prefix) {
  Formula f = Formula::prop(prop_of(extend(prefix, s.path), s.agent, s.attribute));
  return s.polarity == Polarity::Negative ? Formula::negation(f) : f;
}

ContextSet keys(const std::set<Ident>& contexts) {
  ContextSet k;
  for (const auto& c : contexts) k.names.insert(c.text);
  return k;
}

Formula dependence_formula(const Dependence& d, const std::vector<Ident>& prefix,
                           const std::set<Ident>& contexts) {
  Formula s1 = interpret_collection(d.cause, prefix);
  Formula s2 = interpret_collection(d.effect, prefix);
  ContextSet k = keys(contexts);
  switch (d.kind) {
    case DependenceKind::Normal: return Formula::implies(s2, Formula::diamond_conv(k, s1));
    case DependenceKind::Persistent:
      return Formula::implies(s2, Formula::conj(s1, Formula::diamond_conv(k, s1)));
    case DependenceKind::Remanent:
      return Formula::implies(
          s2, Formula::disj(Formula::diamond_conv({}, s2), Formula::diamond_conv(k, s1)));
  }
  return Formula::top();
}

Formula attr_decl_formula(const AttrDeclB& a, const std::vector<Ident>& prefix) {
  std::vector<Formula> parts;
  for (const auto& g : a.agents) {
    for (const auto& r : a.relations) parts.push_back(interpret_relation(r, AgentKey{prefix, g}));
  }
  return Formula::conj_all(parts);
}

Formula body_formula(const std::vector<Behaviour>& body, const std::vector<Ident>& prefix,
                     const std::set<Ident>& contexts);

Formula behaviour_formula(const Behaviour& b, const std::vector<Ident>& prefix,
                          const std::set<Ident>& contexts) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Dependence>) {
          return dependence_formula(n, prefix, contexts);
        } else if constexpr (std::is_same_v<T, CompartmentB>) {
          return body_formula(n.body, extend(prefix, {n.name}), contexts);
        } else if constexpr (std::is_same_v<T, ContextB>) {
          std::set<Ident> inner = contexts;
          inner.insert(n.contexts.begin(), n.contexts.end());
          return body_formula(n.body, prefix, inner);
        } else if constexpr (std::is_same_v<T, ObservationB>) {
          return Formula::at(n.label.text, interpret_collection(n.states, prefix));
        } else {
          return attr_decl_formula(n, prefix);
        }
      },
      b.node);
}

Formula body_formula(const std::vector<Behaviour>& body, const std::vector<Ident>& prefix,
                     const std::set<Ident>& contexts) {
  std::vector<Formula> parts;
  for (const auto& b : body) parts.push_back(behaviour_formula(b, prefix, contexts));
  return Formula::conj_all(parts);
}

StateCollection qualify(const StateCollection& c, const std::vector<Ident>& prefix) {
  StateCollection out = c;
  for (auto& s : out.states) s.path = extend(prefix, s.path);
  return out;
}

void collect(const std::vector<Behaviour>& body, const std::vector<Ident>& prefix,
             const std::set<Ident>& contexts, NormalForm& nf) {
  for (const auto& b : body) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Dependence>) {
            NormalizedDependence d;
            d.compartment = prefix;
            d.contexts = contexts;
            d.kind = n.kind;
            d.cause = qualify(n.cause, prefix);
            d.effect = qualify(n.effect, prefix);
            nf.dependences.push_back(std::move(d));
          } else if constexpr (std::is_same_v<T, CompartmentB>) {
            collect(n.body, extend(prefix, {n.name}), contexts, nf);
          } else if constexpr (std::is_same_v<T, ContextB>) {
            std::set<Ident> inner = contexts;
            inner.insert(n.contexts.begin(), n.contexts.end());
            collect(n.body, prefix, inner, nf);
          } else if constexpr (std::is_same_v<T, ObservationB>) {
            nf.observations.push_back({n.label, qualify(n.states, prefix)});
          } else {
            for (const auto& g : n.agents) {
              auto& rels = nf.attributes[AgentKey{prefix, g}];
              rels.insert(n.relations.begin(), n.relations.end());
            }
          }
        },
        b.node);
  }
}

Formula attributes_formula(const AttributeMap& attrs) {
  std::vector<Formula> parts;
  for (const auto& [agent, rels] : attrs) {
    for (const auto& r : rels) parts.push_back(interpret_relation(r, agent));
  }
  return Formula::conj_all(parts);
}

}  // namespace

AgentKey agent_of(const AgentState& s) { return AgentKey{s.path, s.agent}; }

Formula interpret_collection(const StateCollection& s, const std::vector<Ident>& prefix) {
  std::vector<Formula> parts;
  for (const auto& st : s.states) parts.push_back(state_formula(st, prefix));
  return Formula::conj_all(parts);
}

Formula interpret_relation(const AttrRel& r, const AgentKey& agent) {
  auto attr = [&](const Ident& a) {
    return Formula::prop(prop_of(agent.path, agent.agent, a));
  };
  switch (r.kind) {
    case AttrRelKind::Prec: return Formula::implies(attr(*r.right), attr(r.left));
    case AttrRelKind::Napprox:
      return Formula::conj(Formula::implies(attr(r.left), Formula::negation(attr(*r.right))),
                           Formula::implies(attr(*r.right), Formula::negation(attr(r.left))));
    case AttrRelKind::Bare: return Formula::top();
  }
  return Formula::top();
}

Formula interpret(const Program& p) {
  check_unique_labels(p);
  return Formula::always(body_formula(p.behaviours, {}, {}));
}

NormalForm normal_form(const Program& p) {
  NormalForm nf;
  collect(p.behaviours, {}, {}, nf);
  for (auto& d : nf.dependences) {
    for (const auto* c : {&d.cause, &d.effect}) {
      for (const auto& s : c->states) {
        auto it = nf.attributes.find(agent_of(s));
        if (it != nf.attributes.end()) d.attributes.insert(*it);
      }
    }
  }
  return nf;
}

std::vector<NormalizedDependence> normalize(const Program& p) { return normal_form(p).dependences; }

Formula dependence_body(const NormalizedDependence& d) {
  Formula dep = dependence_formula(Dependence{d.kind, d.cause, d.effect}, {}, d.contexts);
  if (d.attributes.empty()) return dep;
  return Formula::conj(dep, attributes_formula(d.attributes));
}

std::vector<Formula> dependence_formula_set(const Program& p) {
  std::vector<Formula> out;
  for (const auto& d : normalize(p)) out.push_back(Formula::always(dependence_body(d)));
  return out;
}

Formula interpret(const NormalForm& nf) {
  std::vector<Formula> parts;
  for (const auto& d : nf.dependences) parts.push_back(dependence_body(d));
  if (!nf.attributes.empty()) parts.push_back(attributes_formula(nf.attributes));
  for (const auto& o : nf.observations) {
    parts.push_back(Formula::at(o.label.text, interpret_collection(o.states)));
  }
  return Formula::always(Formula::conj_all(parts));
}

std::vector<std::string> attribute_warnings(const Program& p) {
  std::vector<std::string> out;
  for (const auto& [agent, rels] : normal_form(p).attributes) {
    for (const auto& r : rels) {
      if (r.kind != AttrRelKind::Prec) continue;
      for (const auto& q : rels) {
        if (q.kind != AttrRelKind::Napprox) continue;
        bool same = (q.left == r.left && q.right == r.right) ||
                    (q.left == *r.right && *q.right == r.left);
        if (same) {
          out.push_back("agent " + agent.agent.text + ": " + r.left.text + " < " +
                        r.right->text + " contradicts " + q.left.text + " >< " +
                        q.right->text);
        }
      }
    }
  }
  return out;
}

}  // namespace gubs::semantics
