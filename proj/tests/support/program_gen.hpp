// Random GUBS programs over a small vocabulary.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "gubs/syntax.hpp"

namespace gubs::testing {

class ProgramGen {
 public:
  explicit ProgramGen(unsigned seed) : rng_(seed) {}

  Program next(int max_behaviours = 5) {
    labels_ = 0;
    Program p;
    int n = pick(max_behaviours + 1);
    for (int i = 0; i < n; ++i) p.behaviours.push_back(behaviour(2));
    return p;
  }

  // Only dependences, flat, no attributes: small enough for the tableau.
  Program flat(int max_deps = 3) {
    Program p;
    int n = 1 + pick(max_deps);
    for (int i = 0; i < n; ++i) {
      Dependence d{static_cast<DependenceKind>(pick(3)), small_collection(), small_collection()};
      Behaviour b{d};
      if (pick(4) == 0) b = Behaviour{ContextB{{Ident(pick(2) ? "K" : "k")}, {b}}};
      p.behaviours.push_back(b);
    }
    return p;
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  Ident name(const std::vector<const char*>& pool) { return Ident(pool[static_cast<std::size_t>(pick(static_cast<int>(pool.size())))]); }

  AgentState state() {
    AgentState s;
    if (pick(5) == 0) s.path.push_back(name({"C", "D", "cell"}));
    s.agent = name({"A", "B", "G", "g", "x", "Tetr"});
    if (pick(3) == 0) s.attribute = name({"Low", "High", "l", "m"});
    s.polarity = pick(3) == 0 ? Polarity::Negative : Polarity::Positive;
    return s;
  }

  StateCollection collection() {
    StateCollection c;
    int n = 1 + pick(3);
    for (int i = 0; i < n; ++i) c.states.push_back(state());
    return c;
  }

  StateCollection small_collection() {
    AgentState s;
    s.agent = name({"A", "B", "c"});
    s.polarity = pick(4) == 0 ? Polarity::Negative : Polarity::Positive;
    return StateCollection{{s}};
  }

  AttrDeclB attributes() {
    AttrDeclB d;
    d.agents.push_back(name({"G", "H", "g"}));
    if (pick(4) == 0) d.agents.push_back(Ident("Tetr"));
    int n = 1 + pick(3);
    for (int i = 0; i < n; ++i) {
      AttrRel r;
      r.kind = static_cast<AttrRelKind>(pick(3));
      r.left = name({"Low", "Mid", "High", "a"});
      if (r.kind != AttrRelKind::Bare) r.right = name({"Low", "Mid", "High", "b"});
      d.relations.push_back(r);
    }
    return d;
  }

  Behaviour behaviour(int depth) {
    switch (depth > 0 ? pick(8) : pick(5)) {
      case 0:
      case 1:
      case 2: return Behaviour{Dependence{static_cast<DependenceKind>(pick(3)), collection(), collection()}};
      case 3: return Behaviour{ObservationB{Ident("obs" + std::to_string(labels_++)), collection()}};
      case 4: return Behaviour{attributes()};
      case 5:
      case 6: {
        ContextB c;
        c.contexts.push_back(name({"Light", "k", "Dark"}));
        if (pick(3) == 0) c.contexts.push_back(Ident("Heat"));
        int n = 1 + pick(3);
        for (int i = 0; i < n; ++i) c.body.push_back(behaviour(depth - 1));
        return Behaviour{c};
      }
      default: {
        CompartmentB c;
        c.name = name({"C", "D", "cell"});
        int n = 1 + pick(3);
        for (int i = 0; i < n; ++i) c.body.push_back(behaviour(depth - 1));
        return Behaviour{c};
      }
    }
  }

  std::mt19937 rng_;
  int labels_ = 0;
};

}  // namespace gubs::testing
