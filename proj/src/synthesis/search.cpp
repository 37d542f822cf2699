#include <algorithm>

#include "cover.hpp"
#include "gubs/bounded.hpp"

namespace gubs::synthesis {

using semantics::NormalizedDependence;
using namespace detail;

namespace {

struct Plan {
  std::vector<Rule> moves;  // in the order they rewrite the goal: R2N, then N2P
  std::vector<NormalizedDependence> links;
  std::vector<Role> roles;
  int fresh = 0;
};

struct Option {
  Plan plan;
  std::vector<int> components;  // one per link
  Substitution sigma;
};

using Allowed = std::vector<bool>;

AttributeMap attributes_for(const AttributeMap& all, const NormalizedDependence& d) {
  AttributeMap out;
  for (const auto* c : {&d.cause, &d.effect}) {
    for (const auto& s : c->states) {
      auto it = all.find(semantics::agent_of(s));
      if (it != all.end()) out.insert(*it);
    }
  }
  return out;
}

std::vector<Plan> plans_at(const NormalizedDependence& d, int depth, int fresh_from) {
  std::vector<std::pair<std::vector<Rule>, DependenceKind>> kinds;
  kinds.push_back({{}, d.kind});
  if (d.kind == DependenceKind::Remanent) {
    kinds.push_back({{Rule::R2N}, DependenceKind::Normal});
    kinds.push_back({{Rule::R2N, Rule::N2P}, DependenceKind::Persistent});
  } else if (d.kind == DependenceKind::Normal) {
    kinds.push_back({{Rule::N2P}, DependenceKind::Persistent});
  }
  std::vector<Plan> out;
  for (const auto& [moves, kind] : kinds) {
    const int length = depth - static_cast<int>(moves.size()) + 1;
    if (length < 1) continue;
    if (length > 1 && kind != DependenceKind::Persistent) continue;
    Plan p;
    p.moves = moves;
    p.fresh = length - 1;
    StateCollection from = d.cause;
    for (int i = 0; i < length; ++i) {
      NormalizedDependence link;
      link.compartment = d.compartment;
      link.contexts = d.contexts;
      link.kind = kind;
      link.cause = from;
      if (i + 1 == length) {
        link.effect = d.effect;
      } else {
        AgentState v;
        v.path = d.compartment;
        v.agent = Ident("v$" + std::to_string(fresh_from + i));
        link.effect = StateCollection{{v}};
      }
      link.attributes = attributes_for(d.attributes, link);
      from = link.effect;
      p.links.push_back(std::move(link));
      p.roles.push_back(length == 1 ? Role::Plain : i == 0 ? Role::Head : Role::Inner);
    }
    out.push_back(std::move(p));
  }
  return out;
}

class Searcher {
 public:
  Searcher(const Library& lib, const SearchOptions& opts) : lib_(lib), opts_(opts), budget_{opts.budget} {
    for (const auto& c : lib.components) forms_.push_back(semantics::normal_form(c.program));
  }

  // Options at the smallest rewrite depth that has any (or at every depth).
  std::vector<Option> options(const NormalizedDependence& d, const Allowed& allowed, const Substitution& sigma,
                              int fresh_from, bool every_depth, std::size_t limit) {
    std::vector<Option> out;
    for (int depth = 0; depth <= opts_.rewrite_depth; ++depth) {
      for (auto& plan : plans_at(d, depth, fresh_from)) {
        std::vector<int> used;
        extend(plan, 0, sigma, allowed, used, out, limit);
        if (out.size() >= limit) return out;
      }
      if (!out.empty() && !every_depth) break;
    }
    return out;
  }

  bool observable(const Allowed& chosen, const Substitution& sigma) {
    try {
      return check_observability(assembly(chosen, sigma), opts_.check);
    } catch (const logic::BudgetExceeded&) {
      return false;
    }
  }

  Program assembly(const Allowed& chosen, const Substitution& sigma) const {
    std::vector<Program> parts;
    for (std::size_t c = 0; c < chosen.size(); ++c) {
      if (chosen[c]) parts.push_back(apply_substitution(lib_.components[c].program, sigma));
    }
    return assemble(parts);
  }

  const Library& lib() const { return lib_; }

 private:
  void extend(const Plan& plan, std::size_t i, const Substitution& sigma, const Allowed& allowed,
              std::vector<int>& used, std::vector<Option>& out, std::size_t limit) {
    if (i == plan.links.size()) {
      out.push_back({plan, used, sigma});
      return;
    }
    const Link link{plan.links[i], plan.roles[i]};
    for (std::size_t c = 0; c < forms_.size(); ++c) {
      if (!allowed[c]) continue;
      for (std::size_t j = 0; j < forms_[c].dependences.size(); ++j) {
        budget_.spend();
        LibraryDep dep{static_cast<int>(c), static_cast<int>(j), &forms_[c].dependences[j], &forms_[c].attributes};
        match_link(link, dep, sigma, true, [&](Substitution& s) {
          used.push_back(static_cast<int>(c));
          extend(plan, i + 1, s, allowed, used, out, limit);
          used.pop_back();
          return out.size() >= limit;
        });
        if (out.size() >= limit) return;
      }
    }
  }

  const Library& lib_;
  SearchOptions opts_;
  Budget budget_;
  std::vector<semantics::NormalForm> forms_;
};

struct Pass {
  Substitution sigma;
  int fresh = 1;
  std::vector<std::optional<Option>> chosen;  // per goal dependence
  int covered = 0;
};

Pass cover_pass(Searcher& s, const std::vector<NormalizedDependence>& deps, const Allowed& allowed, Pass start) {
  for (std::size_t i = 0; i < deps.size(); ++i) {
    if (start.chosen[i]) continue;
    auto opts = s.options(deps[i], allowed, start.sigma, start.fresh, false, 1);
    if (opts.empty()) continue;
    start.sigma = opts[0].sigma;
    start.fresh += opts[0].plan.fresh;
    start.chosen[i] = std::move(opts[0]);
    ++start.covered;
  }
  return start;
}

std::vector<std::string> names_of(const Library& lib, const Allowed& chosen) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < chosen.size(); ++c) {
    if (chosen[c]) out.push_back(lib.components[c].name);
  }
  return out;
}

std::set<Ident> variables(const Program& p) { return free_variables(p); }

Derivation chain_derivation(const Library& lib, const NormalizedDependence& goal, const Option& o,
                            const Substitution& sigma) {
  Allowed used(lib.components.size(), false);
  for (int c : o.components) used[static_cast<std::size_t>(c)] = true;
  auto links = o.plan.links;
  Derivation node;
  node.rule = Rule::Inst;
  node.assembly = names_of(lib, used);
  node.target = program_of(links);
  node.sigma = sigma.restricted(variables(node.target));

  auto step = [&](Rule r, Program target) {
    Derivation up;
    up.rule = r;
    up.assembly = node.assembly;
    up.sigma = node.sigma;
    up.target = std::move(target);
    up.premises.push_back(std::move(node));
    node = std::move(up);
  };
  while (links.size() > 1) {
    auto last = links.back();
    links.pop_back();
    links.back().effect = last.effect;
    links.back().attributes = attributes_for(goal.attributes, links.back());
    step(Rule::Trans, program_of(links));
  }
  for (auto it = o.plan.moves.rbegin(); it != o.plan.moves.rend(); ++it) {
    links.back().kind = *it == Rule::N2P ? DependenceKind::Normal : DependenceKind::Remanent;
    step(*it, program_of(links));
  }
  return node;
}

Derivation assemble_derivation(const Library& lib, std::vector<Derivation> parts) {
  if (parts.size() == 1) return std::move(parts[0]);
  Derivation root;
  root.rule = Rule::Asm;
  Allowed used(lib.components.size(), false);
  std::vector<Program> targets;
  std::optional<Substitution> sigma = Substitution{};
  for (const auto& p : parts) {
    for (const auto& n : p.assembly) {
      for (std::size_t c = 0; c < lib.components.size(); ++c) {
        if (lib.components[c].name == n) used[c] = true;
      }
    }
    targets.push_back(p.target);
    sigma = sigma->merged(p.sigma);
  }
  root.assembly = names_of(lib, used);
  root.sigma = *sigma;  // all restricted from one substitution
  root.target = assemble(targets);
  root.premises = std::move(parts);
  return root;
}

}  // namespace

SynthesisResult synthesize(const Program& goal, const Library& lib, const SearchOptions& opts) {
  const auto nf = semantics::normal_form(goal);
  const auto& deps = nf.dependences;
  SynthesisResult result;
  if (deps.empty()) {
    result.derivation.rule = Rule::Inst;
    result.derivation.target = program_of({}, nf.attributes);
    return result;
  }

  Searcher s(lib, opts);
  const std::size_t n = lib.components.size();
  Allowed selected(n, false);
  Pass state;
  state.chosen.resize(deps.size());
  const Allowed everything(n, true);

  try {
    while (std::any_of(state.chosen.begin(), state.chosen.end(), [](const auto& o) { return !o; })) {
      std::set<Allowed> blocks;
      for (std::size_t i = 0; i < deps.size(); ++i) {
        if (state.chosen[i]) continue;
        for (const auto& o : s.options(deps[i], everything, state.sigma, state.fresh, false, 32)) {
          Allowed b = selected;
          for (int c : o.components) b[static_cast<std::size_t>(c)] = true;
          blocks.insert(b);
        }
      }
      if (blocks.empty()) {
        std::size_t i = 0;
        while (state.chosen[i]) ++i;
        throw NoCover("no library assembly covers " + render_program(program_of({deps[i]})));
      }
      struct Candidate {
        Allowed block;
        Pass pass;
        int added;
        std::vector<std::string> names;
      };
      std::vector<Candidate> cands;
      for (const auto& b : blocks) {
        Pass p = cover_pass(s, deps, b, state);
        if (p.covered == state.covered) continue;
        Allowed fresh_only(n, false);
        for (std::size_t c = 0; c < n; ++c) fresh_only[c] = b[c] && !selected[c];
        auto names = names_of(lib, fresh_only);
        cands.push_back({b, std::move(p), static_cast<int>(names.size()), names});
      }
      std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.pass.covered != b.pass.covered) return a.pass.covered > b.pass.covered;
        if (a.added != b.added) return a.added < b.added;
        return a.names < b.names;
      });
      bool committed = false;
      for (auto& c : cands) {
        if (!s.observable(c.block, c.pass.sigma)) continue;
        selected = c.block;
        state = std::move(c.pass);
        committed = true;
        break;
      }
      if (!committed) {
        if (cands.empty()) throw NoCover("no assembly makes progress on the goal");
        throw ObservabilityFailed("every covering assembly is unobservable");
      }
    }
  } catch (const logic::BudgetExceeded& e) {
    throw SearchExhausted(std::string("search budget exhausted: ") + e.what());
  }

  result.assembly = names_of(lib, selected);
  result.sigma = state.sigma;
  result.design = s.assembly(selected, state.sigma);
  std::vector<Derivation> parts;
  for (std::size_t i = 0; i < deps.size(); ++i) {
    parts.push_back(chain_derivation(lib, deps[i], *state.chosen[i], state.sigma));
  }
  result.derivation = assemble_derivation(lib, std::move(parts));
  return result;
}

std::optional<int> minimality_oracle(const Program& goal, const Library& lib, int max_subset,
                                     const SearchOptions& opts) {
  const auto deps = semantics::normalize(goal);
  if (deps.empty()) return 0;
  Searcher s(lib, opts);
  const int n = static_cast<int>(lib.components.size());
  const int top = std::min(max_subset, n);

  // every goal dependence covered inside `allowed`, one global substitution
  std::function<bool(std::size_t, const Substitution&, int, const Allowed&)> cover =
      [&](std::size_t i, const Substitution& sigma, int fresh, const Allowed& allowed) {
        if (i == deps.size()) return s.observable(allowed, sigma);
        for (const auto& o : s.options(deps[i], allowed, sigma, fresh, true, 256)) {
          if (cover(i + 1, o.sigma, fresh + o.plan.fresh, allowed)) return true;
        }
        return false;
      };

  for (int size = 1; size <= top; ++size) {
    std::vector<int> pick(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
      Allowed allowed(static_cast<std::size_t>(n), false);
      for (int c : pick) allowed[static_cast<std::size_t>(c)] = true;
      if (cover(0, Substitution{}, 1, allowed)) return size;
      int k = size - 1;
      while (k >= 0 && pick[static_cast<std::size_t>(k)] == n - size + k) --k;
      if (k < 0) break;
      ++pick[static_cast<std::size_t>(k)];
      for (int j = k + 1; j < size; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return std::nullopt;
}

}  // namespace gubs::synthesis
