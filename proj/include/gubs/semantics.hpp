// Translation of programs into hybrid-logic formulas.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gubs/logic.hpp"
#include "gubs/syntax.hpp"

namespace gubs::semantics {

using logic::Formula;

/// An agent together with the compartment path it lives in.
struct AgentKey {
  std::vector<Ident> path;
  Ident agent;

  auto operator<=>(const AgentKey&) const = default;
  bool operator==(const AgentKey&) const = default;
};

using AttributeMap = std::map<AgentKey, std::set<AttrRel>>;

/// A dependence lifted out of its compartments and contexts. States carry
/// their full compartment path.
struct NormalizedDependence {
  std::vector<Ident> compartment;
  std::set<Ident> contexts;
  DependenceKind kind = DependenceKind::Normal;
  StateCollection cause;
  StateCollection effect;
  AttributeMap attributes;  // relations of the agents it mentions

  auto operator<=>(const NormalizedDependence&) const = default;
  bool operator==(const NormalizedDependence&) const = default;
};

struct NormalizedObservation {
  Ident label;
  StateCollection states;

  auto operator<=>(const NormalizedObservation&) const = default;
  bool operator==(const NormalizedObservation&) const = default;
};

struct NormalForm {
  std::vector<NormalizedDependence> dependences;
  std::vector<NormalizedObservation> observations;
  AttributeMap attributes;  // every declaration, merged by union
};

Formula interpret(const Program& p);
Formula interpret_collection(const StateCollection& s, const std::vector<Ident>& prefix = {});
Formula interpret_relation(const AttrRel& r, const AgentKey& agent);

/// One A(...) formula per dependence occurrence, carrying the attribute
/// relations of the agents it mentions.
std::vector<Formula> dependence_formula_set(const Program& p);

NormalForm normal_form(const Program& p);
std::vector<NormalizedDependence> normalize(const Program& p);

/// Body (without A) of a normalized dependence including its attributes.
Formula dependence_body(const NormalizedDependence& d);
Formula interpret(const NormalForm& nf);

AgentKey agent_of(const AgentState& s);

/// Agents declared with both a < b and a >< b.
std::vector<std::string> attribute_warnings(const Program& p);

}  // namespace gubs::semantics
