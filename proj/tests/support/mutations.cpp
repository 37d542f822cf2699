#include "mutations.hpp"

namespace gubs::testing {

using namespace synthesis;

namespace {

Substitution sub(std::map<std::string, std::string> m) {
  std::map<Ident, Ident> out;
  for (auto& [k, v] : m) out.emplace(Ident(k), Ident(v));
  return Substitution(out);
}

Derivation& node_at(Derivation& d, const std::vector<int>& path) {
  Derivation* n = &d;
  for (int i : path) n = &n->premises.at(static_cast<std::size_t>(i));
  return *n;
}

std::string path_text(const std::vector<int>& path) {
  std::string s = "root";
  for (int i : path) s += "." + std::to_string(i);
  return s;
}

std::function<void(Derivation&)> set_sigma(Substitution s) {
  return [s](Derivation& n) { n.sigma = s; };
}

std::function<void(Derivation&)> set_rule(Rule r) {
  return [r](Derivation& n) { n.rule = r; };
}

std::function<void(Derivation&)> set_target(std::string t) {
  return [t](Derivation& n) { n.target = parse_program(t); };
}

void rebind(Derivation& n) {
  n.sigma = sub({{"detect", "Other"}, {"light", "Light"}, {"v3", "Tetr"}, {"v4", "Luxl"}});
  for (auto& p : n.premises) rebind(p);
}

Mutation at(std::string name, std::vector<int> path, Failure f, std::function<void(Derivation&)> apply) {
  return Mutation{std::move(name), path, path_text(path), f, std::move(apply)};
}

}  // namespace

std::vector<Mutation> sender_mutations() {
  std::vector<Mutation> ms = {
      at("v1 mapped to Luxl", {0, 0, 0, 0}, Failure::SideConditionFailed,
         set_sigma(sub({{"detect", "Detect"}, {"light", "Light"}, {"v1", "Luxl"}, {"v2", "Luxl"}}))),
      at("v3 and v4 swapped", {1, 0, 0, 0}, Failure::SideConditionFailed,
         set_sigma(sub({{"detect", "Detect"}, {"light", "Light"}, {"v3", "Luxl"}, {"v4", "Tetr"}}))),
      at("sigma changed on a Trans node", {2, 0}, Failure::SubstitutionClash,
         set_sigma(sub({{"detect", "Detect"}, {"light", "Light"}, {"v5", "Tetr"}, {"v6", "Cl"}}))),
      at("Trans relabelled N2P", {0, 0}, Failure::SideConditionFailed, set_rule(Rule::N2P)),
      at("N2P relabelled R2N", {0}, Failure::SideConditionFailed, set_rule(Rule::R2N)),
      at("Trans relabelled Com", {1, 0, 0}, Failure::SideConditionFailed, set_rule(Rule::Com)),
      at("Inst used as an inner node", {2, 0}, Failure::Malformed, set_rule(Rule::Inst)),
      at("Trans premise dropped", {0, 0, 0}, Failure::Malformed, [](Derivation& n) { n.premises.clear(); }),
      at("Asm premise dropped", {}, Failure::SubstitutionClash, [](Derivation& n) { n.premises.pop_back(); }),
      at("unknown component", {1, 0, 0, 0}, Failure::NotInLibrary,
         [](Derivation& n) { n.assembly = {"Q1", "Q9", "Q3"}; }),
      at("component missing from Inst", {2, 0, 0, 0}, Failure::SideConditionFailed,
         [](Derivation& n) { n.assembly = {"Q2", "Q3"}; }),
      at("Trans conclusion with the wrong effect", {0, 0, 0}, Failure::SideConditionFailed,
         set_target("{ AHL :: {low >< mid >< high}, [light] { detect => v1, v1 => AHL(mid) } }")),
      at("N2P conclusion made remanent", {1}, Failure::SideConditionFailed,
         set_target("{ AHL :: {low >< mid >< high}, [light] { detect ~> AHL(mid) } }")),
      at("Asm substitution with an extra binding", {}, Failure::SubstitutionClash,
         [](Derivation& n) {
           auto m = n.sigma.mapping();
           m.emplace(Ident("x"), Ident("Foo"));
           n.sigma = Substitution(m);
         }),
  };
  // a whole chain rebound consistently only clashes at the join
  ms.push_back(Mutation{"second chain disagrees on detect", {1}, "root", Failure::SubstitutionClash, rebind});
  return ms;
}

std::vector<MutationOutcome> run_mutations(const Derivation& good, const Library& lib, const Program& goal) {
  std::vector<MutationOutcome> out;
  for (const auto& m : sender_mutations()) {
    Derivation d = good;
    m.apply(node_at(d, m.at));
    auto r = check_derivation(d, lib, goal);
    MutationOutcome o;
    o.name = m.name;
    o.blame = m.blame;
    o.expected = failure_name(m.expect);
    o.rejected = !r.ok();
    o.localized = true;
    for (const auto& n : r.nodes) {
      if (n.path == m.blame) {
        o.got = failure_name(n.failure);
        o.detail = n.detail;
      }
      if (!n.ok() && n.path != m.blame && m.blame.rfind(n.path + ".", 0) != 0) o.localized = false;
    }
    out.push_back(o);
  }
  return out;
}

}  // namespace gubs::testing
