// Matching goal dependences against library dependences.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gubs/synthesis.hpp"

namespace gubs::synthesis::detail {

using semantics::AttributeMap;
using semantics::NormalizedDependence;

enum class Role { Plain, Head, Inner };

struct Link {
  NormalizedDependence dep;
  Role role = Role::Plain;
};

/// Chain roles of the target's dependences, in normalize() order.
std::vector<Role> chain_roles(const std::vector<NormalizedDependence>& deps);

struct LibraryDep {
  int component;
  int index;
  const NormalizedDependence* dep;
  const AttributeMap* attributes;  // of the whole component
};

/// Counts match attempts and throws logic::BudgetExceeded past the limit.
struct Budget {
  std::uint64_t limit;
  std::uint64_t used = 0;
  void spend();
};

using Continue = std::function<bool(Substitution&)>;

/// Tries to cover `goal` by `lib` under sigma. When `bind` is false no new
/// bindings are made. Calls k for every way the match succeeds until k
/// returns true.
bool match_link(const Link& goal, const LibraryDep& lib, Substitution sigma, bool bind, const Continue& k);

/// Rebuilds a program from normalized dependences and attribute relations.
Program program_of(const std::vector<NormalizedDependence>& deps, const AttributeMap& extra = {});

std::vector<NormalizedDependence> substituted(const std::vector<NormalizedDependence>& deps,
                                              const Substitution& s);

/// Collections compared as sets.
NormalizedDependence canonical(NormalizedDependence d);

}  // namespace gubs::synthesis::detail
