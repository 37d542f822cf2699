#include <algorithm>
#include <set>

#include "cover.hpp"
#include "gubs/bounded.hpp"
#include "gubs/tableau.hpp"
#include "json.hpp"

namespace gubs::synthesis {

using logic::Formula;

const Component* Library::find(const std::string& name) const {
  for (const auto& c : components) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Library load_library(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw LibraryError(std::string("library is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw LibraryError("library must be a JSON array");
  Library lib;
  std::set<std::string> names;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("name") || !entry.contains("source") ||
        !entry["name"].is_string() || !entry["source"].is_string()) {
      throw LibraryError("library entries need string fields \"name\" and \"source\"");
    }
    std::string name = entry["name"];
    if (!names.insert(name).second) throw LibraryError("duplicate component " + name);
    Program p;
    try {
      p = parse_program(entry["source"].get<std::string>());
    } catch (const SyntaxError& e) {
      throw LibraryError("component " + name + ": " + e.what());
    }
    if (!check_observability(p)) throw LibraryError("component " + name + " is not observable");
    lib.components.push_back({name, std::move(p)});
  }
  return lib;
}

Verdict check_inclusion(const Program& p, const Program& q, const CheckOptions& opts) {
  const Formula fq = semantics::interpret(q);
  const Formula fp = semantics::interpret(p);
  if (opts.mode == Mode::Tableau) {
    logic::TableauOptions t;
    t.budget = opts.budget;
    auto m = logic::entailment_counter_model(fq, fp, t);
    if (!m) return {VerdictKind::Included, std::nullopt};
    return {VerdictKind::NotIncluded, std::move(m)};
  }
  // a model of Q with a world where P's body fails
  Formula probe = Formula::conj(fq, Formula::exists(Formula::negation(fp.lhs())));
  logic::BoundedOptions b;
  b.jobs = opts.jobs;
  auto m = logic::sat_bounded(probe, opts.bound, b);
  if (m) return {VerdictKind::NotIncluded, std::move(m)};
  return {VerdictKind::Inconclusive, std::nullopt};
}

bool check_observability(const Program& p, const CheckOptions& opts) {
  const Formula f = semantics::interpret(p);
  if (opts.mode == Mode::Tableau) {
    logic::TableauOptions t;
    t.budget = opts.budget;
    return logic::sat_tableau(f, t);
  }
  logic::BoundedOptions b;
  b.jobs = opts.jobs;
  return logic::sat_bounded(f, opts.bound, b).has_value();
}

Program assemble(const std::vector<Program>& parts) {
  Program out;
  for (const auto& p : parts) out.behaviours.insert(out.behaviours.end(), p.behaviours.begin(), p.behaviours.end());
  return out;
}

bool same_up_to_order(const Program& a, const Program& b) {
  auto na = semantics::normal_form(a);
  auto nb = semantics::normal_form(b);
  auto deps = [](const semantics::NormalForm& nf) {
    std::set<semantics::NormalizedDependence> out;
    for (const auto& d : nf.dependences) out.insert(detail::canonical(d));
    return out;
  };
  return deps(na) == deps(nb) && na.attributes == nb.attributes;
}

bool assembly_covers(const std::vector<Program>& components, const Program& target, const Substitution& sigma,
                     std::string* why) {
  const auto raw = semantics::normalize(target);
  const auto roles = detail::chain_roles(raw);
  const auto goal = semantics::normalize(apply_substitution(target, sigma));

  std::vector<semantics::NormalForm> forms;
  for (const auto& c : components) forms.push_back(semantics::normal_form(c));
  for (std::size_t i = 0; i < goal.size(); ++i) {
    detail::Link link{goal[i], roles[i]};
    bool found = false;
    for (std::size_t c = 0; c < forms.size() && !found; ++c) {
      for (std::size_t j = 0; j < forms[c].dependences.size() && !found; ++j) {
        detail::LibraryDep lib{static_cast<int>(c), static_cast<int>(j), &forms[c].dependences[j],
                               &forms[c].attributes};
        found = detail::match_link(link, lib, Substitution{}, false, [](Substitution&) { return true; });
      }
    }
    if (!found) {
      if (why) {
        Program one = detail::program_of({goal[i]});
        *why = "no component covers " + render_program(one);
      }
      return false;
    }
  }
  return true;
}

}  // namespace gubs::synthesis
