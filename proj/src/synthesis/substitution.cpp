#include "gubs/synthesis.hpp"

namespace gubs::synthesis {

namespace {

std::map<Ident, Ident> close(std::map<Ident, Ident> m) {
  for (auto it = m.begin(); it != m.end();) {
    if (it->first == it->second) {
      it = m.erase(it);
      continue;
    }
    if (it->first.is_constant()) {
      throw InvalidSubstitution("constant " + it->first.text + " can only map to itself, not " +
                                it->second.text);
    }
    ++it;
  }
  for (auto& [v, t] : m) {
    Ident cur = t;
    for (std::size_t steps = 0; m.count(cur); ++steps) {
      if (steps > m.size()) throw InvalidSubstitution("cyclic substitution through " + v.text);
      cur = m.at(cur);
    }
    if (cur == v) throw InvalidSubstitution("cyclic substitution through " + v.text);
    t = cur;
  }
  return m;
}

Ident sub(const Ident& x, const Substitution& s) { return s.apply(x); }

AgentState sub(const AgentState& a, const Substitution& s) {
  AgentState out = a;
  for (auto& c : out.path) c = s.apply(c);
  out.agent = s.apply(a.agent);
  if (a.attribute) out.attribute = s.apply(*a.attribute);
  return out;
}

StateCollection sub(const StateCollection& c, const Substitution& s) {
  StateCollection out;
  for (const auto& a : c.states) out.states.push_back(sub(a, s));
  return out;
}

std::vector<Behaviour> sub(const std::vector<Behaviour>& body, const Substitution& s);

Behaviour sub(const Behaviour& b, const Substitution& s) {
  return std::visit(
      [&](const auto& n) -> Behaviour {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Dependence>) {
          return Behaviour{Dependence{n.kind, sub(n.cause, s), sub(n.effect, s)}};
        } else if constexpr (std::is_same_v<T, CompartmentB>) {
          return Behaviour{CompartmentB{sub(n.name, s), sub(n.body, s)}};
        } else if constexpr (std::is_same_v<T, ContextB>) {
          ContextB c{{}, sub(n.body, s)};
          for (const auto& k : n.contexts) c.contexts.push_back(sub(k, s));
          return Behaviour{std::move(c)};
        } else if constexpr (std::is_same_v<T, ObservationB>) {
          // labels name worlds, not agents
          return Behaviour{ObservationB{n.label, sub(n.states, s)}};
        } else {
          AttrDeclB a;
          for (const auto& g : n.agents) a.agents.push_back(sub(g, s));
          for (const auto& r : n.relations) {
            AttrRel q = r;
            q.left = sub(r.left, s);
            if (r.right) q.right = sub(*r.right, s);
            a.relations.push_back(q);
          }
          return Behaviour{std::move(a)};
        }
      },
      b.node);
}

std::vector<Behaviour> sub(const std::vector<Behaviour>& body, const Substitution& s) {
  std::vector<Behaviour> out;
  for (const auto& b : body) out.push_back(sub(b, s));
  return out;
}

}  // namespace

Substitution::Substitution(const std::map<Ident, Ident>& pairs) : map_(close(pairs)) {}

Ident Substitution::apply(const Ident& x) const {
  auto it = map_.find(x);
  return it == map_.end() ? x : it->second;
}

void Substitution::bind(const Ident& v, const Ident& t) {
  if (apply(v) == t) return;
  if (binds(v)) {
    throw InvalidSubstitution(v.text + " is already bound to " + map_.at(v).text + ", not " + t.text);
  }
  auto next = map_;
  next[v] = t;
  map_ = close(std::move(next));
}

std::optional<Substitution> Substitution::merged(const Substitution& other) const {
  auto out = map_;
  for (const auto& [v, t] : other.map_) {
    auto [it, fresh] = out.emplace(v, t);
    if (!fresh && it->second != t) return std::nullopt;
  }
  try {
    return Substitution(out);
  } catch (const InvalidSubstitution&) {
    return std::nullopt;
  }
}

Substitution Substitution::restricted(const std::set<Ident>& vars) const {
  Substitution out;
  for (const auto& [v, t] : map_) {
    if (vars.count(v)) out.map_.emplace(v, t);
  }
  return out;
}

std::string Substitution::text() const {
  std::string out = "{";
  for (const auto& [v, t] : map_) {
    if (out.size() > 1) out += ", ";
    out += v.text + "/" + t.text;
  }
  return out + "}";
}

Program apply_substitution(const Program& p, const Substitution& s) {
  if (s.empty()) return p;
  return Program{sub(p.behaviours, s)};
}

bool is_fresh(const Ident& x) { return x.text.rfind("v$", 0) == 0; }

}  // namespace gubs::synthesis
