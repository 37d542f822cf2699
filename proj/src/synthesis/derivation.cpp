#include <algorithm>
#include <array>

#include "cover.hpp"
#include "gubs/bounded.hpp"
#include "json.hpp"

namespace gubs::synthesis {

using semantics::NormalizedDependence;
using json = nlohmann::ordered_json;

namespace {

constexpr std::array<const char*, 10> kRuleNames = {"Inst",  "Com", "Cont", "Asm",   "Trans",
                                                    "N2P",   "R2N", "SCom", "SCont", "Incl"};

json node_to_json(const Derivation& d) {
  json j;
  j["rule"] = rule_name(d.rule);
  j["assembly"] = d.assembly;
  json sigma = json::object();
  for (const auto& [v, t] : d.sigma.mapping()) sigma[v.text] = t.text;
  j["sigma"] = sigma;
  j["target"] = render_program(d.target);
  json prem = json::array();
  for (const auto& p : d.premises) prem.push_back(node_to_json(p));
  j["premises"] = prem;
  return j;
}

Derivation node_from_json(const json& j, const std::string& where) {
  auto bad = [&](const std::string& msg) { return std::invalid_argument(where + ": " + msg); };
  if (!j.is_object()) throw bad("derivation node must be an object");
  Derivation d;
  if (!j.contains("rule") || !j["rule"].is_string()) throw bad("missing rule");
  d.rule = rule_from_name(j["rule"].get<std::string>());
  if (j.contains("assembly")) {
    for (const auto& a : j["assembly"]) {
      if (!a.is_string()) throw bad("assembly entries must be strings");
      d.assembly.push_back(a.get<std::string>());
    }
  }
  if (j.contains("sigma")) {
    std::map<Ident, Ident> pairs;
    for (const auto& [k, v] : j["sigma"].items()) {
      if (!v.is_string()) throw bad("sigma values must be strings");
      pairs[Ident(k)] = Ident(v.get<std::string>());
    }
    try {
      d.sigma = Substitution(pairs);
    } catch (const InvalidSubstitution& e) {
      throw bad(e.what());
    }
  }
  if (!j.contains("target") || !j["target"].is_string()) throw bad("missing target");
  try {
    d.target = parse_program(j["target"].get<std::string>());
  } catch (const SyntaxError& e) {
    throw bad(std::string("target: ") + e.what());
  }
  if (j.contains("premises")) {
    int i = 0;
    for (const auto& p : j["premises"]) d.premises.push_back(node_from_json(p, where + "." + std::to_string(i++)));
  }
  return d;
}

std::vector<NormalizedDependence> deps_of(const Program& p) {
  auto ds = semantics::normalize(p);
  for (auto& d : ds) d.attributes.clear();  // compared separately
  std::sort(ds.begin(), ds.end());
  return ds;
}

// a - b as multisets (both sorted)
std::vector<NormalizedDependence> minus(const std::vector<NormalizedDependence>& a,
                                        const std::vector<NormalizedDependence>& b) {
  std::vector<NormalizedDependence> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool attributes_within(const Program& concl, const Program& prem) {
  auto c = semantics::normal_form(concl).attributes;
  auto p = semantics::normal_form(prem).attributes;
  for (const auto& [k, rels] : c) {
    auto it = p.find(k);
    if (it == p.end()) return false;
    if (!std::includes(it->second.begin(), it->second.end(), rels.begin(), rels.end())) return false;
  }
  return true;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::set<Ident> variables(const Program& p) {
  std::set<Ident> out;
  for (const auto& v : free_variables(p)) out.insert(v);
  return out;
}

bool same_except_kind(const NormalizedDependence& a, const NormalizedDependence& b) {
  return a.compartment == b.compartment && a.contexts == b.contexts && a.cause == b.cause && a.effect == b.effect;
}

bool same_frame(const NormalizedDependence& a, const NormalizedDependence& b) {
  return a.compartment == b.compartment && a.contexts == b.contexts && a.kind == b.kind;
}

std::vector<AgentState> sorted(std::vector<AgentState> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// One collection of `from` turned into the matching collection of `to`.
template <typename Rel>
bool one_collection(const NormalizedDependence& from, const NormalizedDependence& to, Rel rel) {
  if (!same_frame(from, to)) return false;
  if (from.cause == to.cause) return rel(from.effect.states, to.effect.states);
  if (from.effect == to.effect) return rel(from.cause.states, to.cause.states);
  return false;
}

bool is_permutation(const std::vector<AgentState>& a, const std::vector<AgentState>& b) {
  return a != b && sorted(a) == sorted(b);
}

bool is_duplication(const std::vector<AgentState>& a, const std::vector<AgentState>& b) {
  if (b.size() != a.size() + 1) return false;
  for (std::size_t i = 0; i < b.size(); ++i) {
    auto without = b;
    without.erase(without.begin() + static_cast<long>(i));
    if (sorted(without) == sorted(a) && std::count(a.begin(), a.end(), b[i]) > 0) return true;
  }
  return false;
}

bool is_drop(const std::vector<AgentState>& a, const std::vector<AgentState>& b) {
  if (b.empty() || a.size() != b.size() + 1) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto without = a;
    without.erase(without.begin() + static_cast<long>(i));
    if (sorted(without) == sorted(b)) return true;
  }
  return false;
}

std::vector<Program> instantiated(const std::vector<std::string>& names, const Library& lib,
                                  const Substitution& s) {
  std::vector<Program> out;
  for (const auto& n : names) out.push_back(apply_substitution(lib.find(n)->program, s));
  return out;
}

bool observable(const Program& p, const CheckOptions& opts) {
  try {
    return check_observability(p, opts);
  } catch (const logic::BudgetExceeded&) {
    return false;  // conservative
  }
}

NodeReport fail(NodeReport r, Failure f, std::string detail) {
  r.failure = f;
  r.detail = std::move(detail);
  return r;
}

int expected_premises(Rule r) {
  switch (r) {
    case Rule::Inst: return 0;
    case Rule::Asm: return -2;  // at least two
    default: return 1;
  }
}

void walk(const Derivation& d, const Library& lib, const CheckOptions& opts, const std::string& path,
          std::vector<NodeReport>& out) {
  NodeReport r = check_node(d, lib, opts);
  r.path = path;
  out.push_back(r);
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    walk(d.premises[i], lib, opts, path + "." + std::to_string(i), out);
  }
}

}  // namespace

std::string rule_name(Rule r) { return kRuleNames[static_cast<std::size_t>(r)]; }

Rule rule_from_name(const std::string& s) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i) {
    if (s == kRuleNames[i]) return static_cast<Rule>(i);
  }
  throw std::invalid_argument("unknown rule '" + s + "'");
}

std::string failure_name(Failure f) {
  switch (f) {
    case Failure::None: return "ok";
    case Failure::SideConditionFailed: return "SideConditionFailed";
    case Failure::SubstitutionClash: return "SubstitutionClash";
    case Failure::NotInLibrary: return "NotInLibrary";
    case Failure::Malformed: return "Malformed";
  }
  return "?";
}

std::string derivation_to_json(const Derivation& d, int indent) { return node_to_json(d).dump(indent); }

Derivation derivation_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("derivation is not valid JSON: ") + e.what());
  }
  return node_from_json(j, "root");
}

bool DerivationReport::ok() const {
  return goal_matches && std::all_of(nodes.begin(), nodes.end(), [](const NodeReport& n) { return n.ok(); });
}

NodeReport check_node(const Derivation& d, const Library& lib, const CheckOptions& opts) {
  NodeReport r;
  r.rule = d.rule;
  const int want = expected_premises(d.rule);
  const int have = static_cast<int>(d.premises.size());
  if ((want >= 0 && have != want) || (want < 0 && have < -want)) {
    return fail(r, Failure::Malformed,
                rule_name(d.rule) + " takes " + (want < 0 ? "at least 2" : std::to_string(want)) +
                    " premise(s), got " + std::to_string(have));
  }

  if (d.rule == Rule::Inst) {
    for (const auto& n : d.assembly) {
      if (!lib.find(n)) return fail(r, Failure::NotInLibrary, "component " + n + " is not in the library");
    }
    auto parts = instantiated(d.assembly, lib, d.sigma);
    std::string why;
    if (!assembly_covers(parts, d.target, d.sigma, &why)) {
      return fail(r, Failure::SideConditionFailed, "assembly under " + d.sigma.text() + ": " + why);
    }
    if (!observable(assemble(parts), opts)) {
      return fail(r, Failure::SideConditionFailed, "assembly under " + d.sigma.text() + " is not observable");
    }
    return r;
  }

  if (d.rule == Rule::Asm) {
    std::set<std::string> names;
    std::optional<Substitution> sigma = Substitution{};
    std::vector<NormalizedDependence> all;
    std::vector<Program> parts;
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      const auto& p = d.premises[i];
      for (std::size_t j = i + 1; j < d.premises.size(); ++j) {
        const auto& q = d.premises[j];
        auto vi = variables(p.target), vj = variables(q.target);
        for (const auto& v : vi) {
          if (vj.count(v) && p.sigma.apply(v) != q.sigma.apply(v)) {
            return fail(r, Failure::SubstitutionClash,
                        "premises " + std::to_string(i) + " and " + std::to_string(j) + " disagree on " + v.text +
                            " (" + p.sigma.apply(v).text + " vs " + q.sigma.apply(v).text + ")");
          }
        }
      }
      sigma = sigma ? sigma->merged(p.sigma) : std::nullopt;
      names.insert(p.assembly.begin(), p.assembly.end());
      auto ds = deps_of(p.target);
      all.insert(all.end(), ds.begin(), ds.end());
      for (const auto& n : p.assembly) {
        if (!lib.find(n)) return fail(r, Failure::NotInLibrary, "component " + n + " is not in the library");
      }
      auto inst = instantiated(p.assembly, lib, p.sigma);
      parts.insert(parts.end(), inst.begin(), inst.end());
    }
    if (!sigma) return fail(r, Failure::SubstitutionClash, "premise substitutions do not combine into one");
    if (!(*sigma == d.sigma)) {
      return fail(r, Failure::SubstitutionClash,
                  "conclusion substitution " + d.sigma.text() + " is not the union " + sigma->text());
    }
    if (names != as_set(d.assembly)) {
      return fail(r, Failure::SideConditionFailed, "conclusion assembly is not the union of the premises'");
    }
    std::sort(all.begin(), all.end());
    if (all != deps_of(d.target)) {
      return fail(r, Failure::SideConditionFailed, "conclusion target is not the union of the premise targets");
    }
    if (!observable(assemble(parts), opts)) {
      return fail(r, Failure::SideConditionFailed, "joint assembly is not observable");
    }
    return r;
  }

  // single premise rules keep assembly and substitution
  const Derivation& prem = d.premises[0];
  if (as_set(prem.assembly) != as_set(d.assembly)) {
    return fail(r, Failure::SideConditionFailed, "assembly differs from the premise");
  }
  if (!(prem.sigma == d.sigma)) {
    return fail(r, Failure::SubstitutionClash, "substitution differs from the premise");
  }
  if (!attributes_within(d.target, prem.target)) {
    return fail(r, Failure::SideConditionFailed, "conclusion declares attributes the premise lacks");
  }
  const auto before = deps_of(prem.target);
  const auto after = deps_of(d.target);
  const auto gone = minus(before, after);
  const auto added = minus(after, before);

  switch (d.rule) {
    case Rule::Com:
      if (!gone.empty() || !added.empty()) return fail(r, Failure::SideConditionFailed, "not a reordering");
      return r;
    case Rule::Cont: {
      std::set<NormalizedDependence> a(before.begin(), before.end()), b(after.begin(), after.end());
      if (a != b || after.size() < before.size())
        return fail(r, Failure::SideConditionFailed, "conclusion is not a repetition of the premise");
      return r;
    }
    case Rule::Trans: {
      if (gone.size() != 2 || added.size() != 1) {
        return fail(r, Failure::SideConditionFailed, "expected two dependences merged into one");
      }
      for (int flip = 0; flip < 2; ++flip) {
        const auto& x = gone[flip];
        const auto& y = gone[1 - flip];
        const auto& z = added[0];
        bool persistent = x.kind == DependenceKind::Persistent && y.kind == DependenceKind::Persistent &&
                          z.kind == DependenceKind::Persistent;
        if (persistent && same_frame(x, y) && same_frame(x, z) && x.effect == y.cause && z.cause == x.cause &&
            z.effect == y.effect) {
          return r;
        }
      }
      return fail(r, Failure::SideConditionFailed, "no persistent pair S1 => S2, S2 => S3 yields the conclusion");
    }
    case Rule::N2P:
    case Rule::R2N: {
      const auto from = d.rule == Rule::N2P ? DependenceKind::Persistent : DependenceKind::Normal;
      const auto to = d.rule == Rule::N2P ? DependenceKind::Normal : DependenceKind::Remanent;
      if (gone.size() == 1 && added.size() == 1 && gone[0].kind == from && added[0].kind == to &&
          same_except_kind(gone[0], added[0])) {
        return r;
      }
      return fail(r, Failure::SideConditionFailed,
                  d.rule == Rule::N2P ? "no persistent dependence turned normal" : "no normal dependence turned remanent");
    }
    case Rule::SCom:
    case Rule::SCont:
    case Rule::Incl: {
      if (gone.size() == 1 && added.size() == 1) {
        bool ok = d.rule == Rule::SCom    ? one_collection(gone[0], added[0], is_permutation)
                  : d.rule == Rule::SCont ? one_collection(gone[0], added[0], is_duplication)
                                          : one_collection(gone[0], added[0], is_drop);
        if (ok) return r;
      }
      return fail(r, Failure::SideConditionFailed, "collection rewrite does not match " + rule_name(d.rule));
    }
    default: break;
  }
  return r;
}

DerivationReport check_derivation(const Derivation& d, const Library& lib, const Program& goal,
                                  const CheckOptions& opts) {
  DerivationReport rep;
  walk(d, lib, opts, "root", rep.nodes);
  rep.goal_matches = same_up_to_order(apply_substitution(d.target, d.sigma), apply_substitution(goal, d.sigma));
  rep.goal_detail = rep.goal_matches ? "root target matches the goal" : "root target differs from the goal";
  return rep;
}

}  // namespace gubs::synthesis
