#include "suites.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "formula_gen.hpp"
#include "gubs/bounded.hpp"
#include "gubs/semantics.hpp"
#include "gubs/tableau.hpp"
#include "program_gen.hpp"

namespace gubs::testing {

using logic::Formula;
using synthesis::Substitution;
using synthesis::VerdictKind;

namespace {

constexpr std::size_t kMaxNotes = 5;

Formula p(const char* name) { return Formula::prop(logic::Prop{{}, name, std::nullopt}); }
Formula nom(const char* name) { return Formula::nom(name); }
Formula no(Formula f) { return Formula::negation(std::move(f)); }
Formula both(Formula a, Formula b) { return Formula::conj(std::move(a), std::move(b)); }
Formula imp(Formula a, Formula b) { return Formula::implies(std::move(a), std::move(b)); }

const logic::ContextSet kBase{};
const logic::ContextSet kK{"K"};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool included(const Program& a, const Program& b) {
  return synthesis::check_inclusion(a, b).kind == VerdictKind::Included;
}

bool observable(const Program& a) { return synthesis::check_observability(a); }

// Uniform random substitution over the free variables of both programs.
Substitution random_sigma(std::mt19937& rng, const Program& a, const Program& b) {
  static const char* targets[] = {"A", "B", "Tetr", "Low", "Light", "w"};
  std::set<Ident> vars = free_variables(a);
  auto more = free_variables(b);
  vars.insert(more.begin(), more.end());
  std::map<Ident, Ident> m;
  for (const auto& v : vars) {
    if (v.text == "w" || std::uniform_int_distribution<int>(0, 1)(rng) == 0) continue;
    m.emplace(v, Ident(targets[std::uniform_int_distribution<int>(0, 5)(rng)]));
  }
  return Substitution(m);
}

std::string text_of(const Program& prog) { return render_program(prog); }

logic::KripkeModel random_model(std::mt19937& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const int n = 1 + pick(3);
  logic::KripkeModel m(n);
  for (const char* a : {"a", "b", "c"}) {
    for (int w = 0; w < n; ++w) {
      if (pick(2)) m.set_prop(logic::Prop{{}, a, std::nullopt}, w);
    }
  }
  for (const auto& k : {kBase, kK}) {
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (pick(3) == 0) m.add_edge(k, u, v);
      }
    }
  }
  if (pick(3)) m.set_nominal("n", pick(n));
  if (pick(3)) m.set_nominal("m", pick(n));
  return m;
}

}  // namespace

void SuiteResult::fail(std::string what) {
  ++failures;
  if (notes.size() < kMaxNotes) notes.push_back(std::move(what));
}

std::string SuiteResult::summary() const {
  std::ostringstream os;
  os << cases << " cases, " << failures << " failures";
  if (unsat) os << ", " << unsat << " unsat";
  if (skipped) os << ", " << skipped << " without an oracle model";
  return os.str();
}

SuiteResult differential(int count, unsigned seed) {
  FormulaGen gen(seed);
  gen.set_stop(2);
  std::vector<Formula> fs;
  for (int i = 0; i < count; ++i) fs.push_back(gen.hard(3, 4));

  SuiteResult r;
  for (const auto& f : fs) {
    ++r.cases;
    const auto v = logic::vocabulary(f);
    if (v.props.size() > 3 || v.nominals.size() > 2 || v.keys.size() > 2 || v.modal_depth > 3) {
      r.fail("outside the generated fragment: " + f.canonical());
      continue;
    }
    const auto oracle = logic::sat_bounded(f, 3);
    if (oracle && !logic::validates(*oracle, f)) {
      r.fail("oracle model does not validate " + f.canonical());
      continue;
    }
    logic::TableauResult t;
    try {
      t = logic::run_tableau(f);
    } catch (const logic::BudgetExceeded&) {
      r.fail("tableau budget on " + f.canonical());
      continue;
    }
    if (t.satisfiable && (!t.model || !logic::validates(*t.model, f))) {
      r.fail("tableau model does not validate " + f.canonical());
    } else if (oracle && !t.satisfiable) {
      r.fail("oracle model but tableau unsat: " + f.canonical());
    } else if (!oracle && t.satisfiable) {
      ++r.skipped;  // needs more than 3 worlds
    } else if (!oracle) {
      ++r.unsat;
    }
  }
  return r;
}

std::vector<std::pair<std::string, Formula>> curated_unsat() {
  const Formula a = p("a"), b = p("b"), c = p("c"), n = nom("n"), m = nom("m");
  auto dia = [](const logic::ContextSet& k, Formula f) { return Formula::diamond(k, std::move(f)); };
  auto box = [](const logic::ContextSet& k, Formula f) { return Formula::box(k, std::move(f)); };
  auto dia_c = [](const logic::ContextSet& k, Formula f) { return Formula::diamond_conv(k, std::move(f)); };
  auto box_c = [](const logic::ContextSet& k, Formula f) { return Formula::box_conv(k, std::move(f)); };
  auto interp = [](const char* src) { return semantics::interpret(parse_program(src)); };
  return {
      {"bottom", Formula::bottom()},
      {"a and not a", both(a, no(a))},
      {"nominal carries a and not a", both(Formula::at("n", a), Formula::at("n", no(a)))},
      {"diamond against box", both(dia(kBase, a), box(kBase, no(a)))},
      {"converse diamond against converse box", both(dia_c(kK, a), box_c(kK, no(a)))},
      {"somewhere against everywhere", both(Formula::exists(a), Formula::always(no(a)))},
      {"only named world is a successor", both(n, both(box(kBase, no(n)), dia(kBase, n)))},
      {"successor must be a and not a", both(dia(kBase, a), both(box(kBase, b), box(kBase, imp(b, no(a)))))},
      {"successor sees its K parent", both(a, dia(kK, box_c(kK, no(a))))},
      {"every world needs a predecessor without a", both(a, imp(a, dia_c(kBase, no(a))))},
      {"two names for one world", both(Formula::at("n", a), both(Formula::at("m", no(a)), Formula::at("n", m)))},
      {"named edge seen backwards", both(Formula::at("n", dia(kK, m)), Formula::at("m", box_c(kK, no(n))))},
      {"no successor yet one", both(box(kBase, Formula::bottom()), dia(kBase, Formula::top()))},
      {"somewhere excluded middle fails", Formula::exists(no(Formula::disj(a, no(a))))},
      {"K successor must be b and not b", both(dia(kK, a), both(box(kK, imp(a, b)), box(kK, no(b))))},
      {"all predecessors lack c", both(c, both(dia_c(kK, Formula::top()), box_c(kK, no(c))))},
      {"three steps to a nowhere", both(Formula::at("n", dia(kBase, dia(kBase, dia(kBase, a)))), Formula::always(no(a)))},
      {"implication chain", both(a, both(imp(a, b), both(imp(b, c), no(c))))},
      {"persistent antilogy", interp("{ Obs :: g, ~g => g }")},
      {"persistent negative circuit", interp("{ g1 +> g2, g2 -| g1 }")},
  };
}

SuiteResult curated_unsat_suite() {
  SuiteResult r;
  for (const auto& [name, f] : curated_unsat()) {
    ++r.cases;
    bool tab = true;
    try {
      tab = logic::sat_tableau(f);
    } catch (const logic::BudgetExceeded&) {
      r.fail(name + ": tableau budget");
      continue;
    }
    if (tab) r.fail(name + ": tableau says sat");
    if (logic::sat_bounded(f, 3)) r.fail(name + ": oracle found a model");
  }
  return r;
}

SuiteResult parser_round_trip(int count, unsigned seed) {
  ProgramGen gen(seed);
  SuiteResult r;
  for (int i = 0; i < count; ++i) {
    ++r.cases;
    const Program prog = gen.next();
    const std::string text = render_program(prog);
    try {
      Program back = parse_program(text);
      if (!(back == prog)) r.fail("changed on the way back: " + text);
      else if (render_program(back) != text) r.fail("render not stable: " + text);
    } catch (const std::exception& e) {
      r.fail(std::string(e.what()) + " on " + text);
    }
  }
  return r;
}

std::vector<std::pair<std::string, Program>> corpus_programs(const std::string& corpus_dir) {
  std::vector<std::pair<std::string, Program>> out;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir)) {
    if (e.path().extension() == ".gubs") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) out.emplace_back(f.stem().string(), parse_program(slurp(f)));
  auto lib = synthesis::load_library(slurp(std::filesystem::path(corpus_dir) / "band_lib.json"));
  for (const auto& c : lib.components) out.emplace_back(c.name, c.program);
  return out;
}

CorpusFacts corpus_facts(std::vector<std::pair<std::string, Program>> programs) {
  CorpusFacts f;
  f.programs = std::move(programs);
  const int n = static_cast<int>(f.programs.size());
  for (const auto& [name, prog] : f.programs) f.observable.push_back(observable(prog));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (included(f.programs[static_cast<std::size_t>(i)].second, f.programs[static_cast<std::size_t>(j)].second)) {
        f.included.emplace_back(i, j);
      }
    }
  }
  return f;
}

SuiteResult included_in_observable(const CorpusFacts& facts, int generated, unsigned seed) {
  SuiteResult r;
  for (const auto& [i, j] : facts.included) {
    if (!facts.observable[static_cast<std::size_t>(j)]) continue;
    ++r.cases;
    if (!facts.observable[static_cast<std::size_t>(i)]) {
      r.fail(facts.programs[static_cast<std::size_t>(i)].first + " in " + facts.programs[static_cast<std::size_t>(j)].first +
             " but unobservable");
    }
  }
  // sub-programs of random flat programs
  ProgramGen gen(seed);
  for (int k = 0; k < generated; ++k) {
    Program q = gen.flat(3);
    Program sub;
    for (const auto& b : q.behaviours) {
      if (gen.pick(2)) sub.behaviours.push_back(b);
    }
    if (!included(sub, q)) {
      ++r.cases;
      r.fail("sub-program not included: " + text_of(sub) + " in " + text_of(q));
      continue;
    }
    if (!observable(q)) continue;
    ++r.cases;
    if (!observable(sub)) r.fail("unobservable sub-program " + text_of(sub) + " of " + text_of(q));
  }
  return r;
}

SuiteResult inclusion_under_substitution(const CorpusFacts& facts, int generated, unsigned seed) {
  std::mt19937 rng(seed);
  SuiteResult r;
  std::vector<Substitution> band;
  band.push_back(Substitution({{Ident("detect"), Ident("Detect")},
                               {Ident("light"), Ident("Light")},
                               {Ident("v1"), Ident("Tetr")},
                               {Ident("v2"), Ident("Luxl")}}));
  band.push_back(Substitution(std::map<Ident, Ident>{{Ident("detect"), Ident("Tetr")}}));

  auto check = [&](const Program& a, const Program& b, const Substitution& s, const std::string& what) {
    ++r.cases;
    if (!included(synthesis::apply_substitution(a, s), synthesis::apply_substitution(b, s))) {
      r.fail(what + " under " + s.text());
    }
  };
  for (const auto& [i, j] : facts.included) {
    const auto& [pn, pp] = facts.programs[static_cast<std::size_t>(i)];
    const auto& [qn, qp] = facts.programs[static_cast<std::size_t>(j)];
    if (free_variables(pp).empty() && free_variables(qp).empty()) continue;
    for (const auto& s : band) check(pp, qp, s, pn + " in " + qn);
    for (int k = 0; k < 3; ++k) check(pp, qp, random_sigma(rng, pp, qp), pn + " in " + qn);
  }
  ProgramGen gen(seed + 1);
  for (int k = 0; k < generated; ++k) {
    Program q = gen.flat(3);
    Program sub;
    for (const auto& b : q.behaviours) {
      if (gen.pick(2)) sub.behaviours.push_back(b);
    }
    check(sub, q, random_sigma(rng, sub, q), text_of(sub) + " in " + text_of(q));
  }
  return r;
}

SuiteResult global_modality_independence(int count, unsigned seed) {
  std::mt19937 rng(seed);
  FormulaGen gen(seed);
  SuiteResult r;
  for (int i = 0; i < count; ++i) {
    ++r.cases;
    const auto m = random_model(rng);
    const auto f = gen.next(3);
    const Formula all = Formula::always(f), some = Formula::exists(f);
    bool every = true, any = false;
    for (int w = 0; w < m.world_count(); ++w) {
      bool v = logic::evaluate(m, w, f);
      every = every && v;
      any = any || v;
    }
    for (int w = 0; w < m.world_count(); ++w) {
      if (logic::evaluate(m, w, all) != every || logic::evaluate(m, w, some) != any) {
        r.fail("world " + std::to_string(w) + " disagrees on " + f.canonical());
        break;
      }
    }
  }
  return r;
}

SuiteResult parallel_matches_serial(int count, unsigned seed) {
  FormulaGen gen(seed);
  SuiteResult r;
  for (int i = 0; i < count; ++i) {
    ++r.cases;
    const auto f = gen.next(3);
    auto a = logic::sat_bounded_serial(f, 2);
    auto b = logic::sat_bounded(f, 2);
    if (a.has_value() != b.has_value() || (a && !(*a == *b))) r.fail("serial and parallel differ on " + f.canonical());
  }
  return r;
}

SuiteResult bounded_monotonicity(int count, unsigned seed) {
  FormulaGen gen(seed);
  SuiteResult r;
  for (int i = 0; i < count; ++i) {
    const auto f = gen.next(3);
    bool found = false;
    for (int k = 1; k <= 3; ++k) {
      bool now = logic::sat_bounded(f, k).has_value();
      if (k > 1) ++r.cases;
      if (found && !now) {
        r.fail("model lost going to " + std::to_string(k) + " worlds: " + f.canonical());
        break;
      }
      found = now;
    }
  }
  return r;
}

}  // namespace gubs::testing
