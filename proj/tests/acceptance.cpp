// Acceptance report: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include "gubs/bounded.hpp"
#include "gubs/semantics.hpp"
#include "gubs/synthesis.hpp"
#include "gubs/tableau.hpp"
#include "gubs/traces.hpp"
#include "json.hpp"
#include "support/mutations.hpp"
#include "support/suites.hpp"

using namespace gubs;
using namespace gubs::synthesis;
using logic::Formula;

namespace {

const std::string kCorpus = GUBS_CORPUS_DIR;

std::string slurp(const std::string& name) {
  std::ifstream in(kCorpus + "/" + name);
  if (!in) throw std::runtime_error("missing corpus file " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program prog(const std::string& name) { return parse_program(slurp(name)); }

const Library& band() {
  static const Library lib = load_library(slurp("band_lib.json"));
  return lib;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Shell {
  int code = -1;
  std::string out;
};

Shell run(const std::string& cmd) {
  Shell s;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen((cmd + " 2>/dev/null").c_str(), "r"), pclose);
  if (!pipe) return s;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe.get())) > 0) s.out.append(buf, n);
  int status = pclose(pipe.release());
  s.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return s;
}

std::string gubsc(const std::string& args) {
  return std::string("GUBSC_NO_COLOR=1 '") + GUBSC_PATH + "' " + args;
}

std::string quoted(const std::string& name) { return "'" + kCorpus + "/" + name + "'"; }

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : ",") + x;
  return s;
}

// -- 1 -----------------------------------------------------------------------

Outcome semantics_golden() {
  const std::string frozen =
      "A(&(->(g1, &(<>-(~(g2)), ~(g2))), ->(g2, &(<>-(g1), g1)), ->(~(g1), <>-(g2)), ->(~(g2), <>-(~(g1))), "
      "@obs1(&(g1, ~(g2))), @obs2(&(g2, ~(g1)))))";
  // the displayed translation, term by term
  auto g = [](const char* n) { return Formula::prop(logic::Prop{{}, n, std::nullopt}); };
  auto prev = [](Formula f) { return Formula::diamond_conv(logic::ContextSet{}, std::move(f)); };
  const Formula g1 = g("g1"), g2 = g("g2"), n1 = Formula::negation(g1), n2 = Formula::negation(g2);
  const Formula displayed = Formula::always(Formula::conj_all({
      Formula::implies(g2, Formula::conj(prev(g1), g1)),
      Formula::implies(n2, prev(n1)),
      Formula::implies(g1, Formula::conj(prev(n2), n2)),
      Formula::implies(n1, prev(g2)),
      Formula::at("obs1", Formula::conj(g1, n2)),
      Formula::at("obs2", Formula::conj(n1, g2)),
  }));
  const std::string got = semantics::interpret(prog("negative_circuit.gubs")).canonical();
  const bool a = got == frozen, b = got == displayed.canonical();
  return {a && b, std::string("frozen string ") + (a ? "equal" : "differs") + ", displayed formula " +
                      (b ? "equal" : "differs")};
}

// -- 2 -----------------------------------------------------------------------

Outcome observability() {
  CheckOptions oracle;
  oracle.mode = Mode::Oracle;
  std::vector<std::string> wrong;
  const Program antilogy = prog("unobservable.gubs");
  if (check_observability(antilogy)) wrong.push_back("antilogy observable (tableau)");
  for (int k = 1; k <= 4; ++k) {
    oracle.bound = k;
    if (check_observability(antilogy, oracle)) wrong.push_back("antilogy observable (oracle k=" + std::to_string(k) + ")");
  }
  oracle.bound = 3;
  const Program circuit = prog("negative_circuit.gubs");
  if (!check_observability(circuit)) wrong.push_back("negative circuit UNOBSERVABLE (tableau)");
  if (!check_observability(circuit, oracle)) wrong.push_back("negative circuit UNOBSERVABLE (oracle k=3)");
  int lib_ok = 0;
  for (const auto& c : band().components) {
    bool t = check_observability(c.program), o = check_observability(c.program, oracle);
    if (t && o) ++lib_ok;
    else wrong.push_back(c.name + " unobservable");
  }
  std::string d = "antilogy UNOBSERVABLE by tableau and oracle k<=4; " + std::to_string(lib_ok) + "/8 library parts observable";
  if (!wrong.empty()) d += "; wrong: " + join(wrong);
  return {wrong.empty(), d};
}

// -- 3 -----------------------------------------------------------------------

Outcome trace_consistency() {
  auto t = traces::parse_trace(slurp("level_trace.txt"));
  auto r = traces::check_consistency(t, prog("level_chain.gubs"), "obs");
  using D = traces::ChronologicalDivision;
  bool a = r.is_consistent(D{{1, 3, 6, 7}}), b = r.is_consistent(D{{1, 2, 4, 7}}), c = r.is_consistent(D{{1, 3, 7}});
  std::ostringstream os;
  os << "(1,3,6,7) " << (a ? "consistent" : "inconsistent") << ", (1,2,4,7) " << (b ? "consistent" : "inconsistent")
     << ", (1,3,7) " << (c ? "consistent" : "inconsistent") << "; " << r.consistent.size() << " of "
     << r.candidates.size() << " candidates consistent";
  return {a && b && !c, os.str()};
}

// -- 4 -----------------------------------------------------------------------

Outcome dependence_kinds() {
  struct Row {
    const char* name;
    const char* trace;
    std::vector<int> dates;
    std::set<char> expected;  // DERIVED by hand from the closed valuation
  };
  const std::vector<Row> rows = {
      {"normal", "fig1_normal.txt", {1, 3, 7, 9, 12}, {'N', 'R'}},
      {"persistent", "fig1_persistent.txt", {1, 3, 4, 8, 12}, {'N', 'P', 'R'}},
      {"remanent", "fig1_remanent.txt", {1, 3, 8, 10, 12}, {'R'}},
  };
  const std::vector<std::pair<char, Formula>> deps = {
      {'N', semantics::interpret(parse_program("{ C -> E }"))},
      {'P', semantics::interpret(parse_program("{ C => E }"))},
      {'R', semantics::interpret(parse_program("{ C ~> E }"))},
  };
  bool ok = true;
  std::string d;
  for (const auto& row : rows) {
    auto t = traces::parse_trace(slurp(row.trace));
    auto h = traces::extract_history(t, traces::ChronologicalDivision{row.dates});
    auto m = traces::history_to_model(h);
    std::set<char> got;
    for (const auto& [k, f] : deps) {
      if (logic::validates(m, f)) got.insert(k);
    }
    const char own = static_cast<char>(std::toupper(row.name[0]));
    ok = ok && got == row.expected && got.count(own);
    d += std::string(d.empty() ? "" : ", ") + row.name + " row {" ;
    for (char k : got) d += k;
    d += "}";
  }
  return {ok, d + " (expected {NR}, {NPR}, {R})"};
}

// -- 5 -----------------------------------------------------------------------

Outcome band_detector() {
  std::vector<std::string> wrong;
  std::string d;
  struct Goal {
    const char* name;
    const char* file;
    const char* design;
    std::vector<std::string> assembly;
    int size;
  };
  const std::vector<Goal> goals = {
      {"sender", "sender.gubs", "sender_design.gubs", {"Q1", "Q2", "Q3"}, 3},
      {"receiver", "receiver.gubs", "receiver_design.gubs", {"Q4", "Q5", "Q6", "Q7", "Q8"}, 5},
  };
  for (const auto& g : goals) {
    const std::string dfile = std::string("/tmp/gubs_acceptance_") + g.name + ".json";
    Shell s = run(gubsc("--format json synth " + quoted(g.file) + " " + quoted("band_lib.json") + " --derivation '" +
                        dfile + "'"));
    std::vector<std::string> assembly;
    bool design_ok = false;
    bool verified = false;
    std::string verdict = "exit " + std::to_string(s.code);
    try {
      auto j = nlohmann::json::parse(s.out);
      verdict = j.value("verdict", verdict);
      if (s.code == 0) {
        assembly = j["assembly"].get<std::vector<std::string>>();
        design_ok = same_up_to_order(parse_program(j["design"].get<std::string>()), prog(g.design));
        verified = run(gubsc("verify '" + dfile + "' " + quoted("band_lib.json") + " " + quoted(g.file))).code == 0;
      }
    } catch (const std::exception&) {
      verdict = "unreadable output";
    }
    std::optional<int> best;
    try {
      best = minimality_oracle(prog(g.file), band());
    } catch (const std::exception&) {
    }
    const bool ok = assembly == g.assembly && design_ok && verified && best && *best == g.size &&
                    static_cast<int>(assembly.size()) == *best;
    if (!ok) wrong.push_back(g.name);
    d += std::string(d.empty() ? "" : "; ") + g.name + ": " + verdict +
         (assembly.empty() ? "" : " {" + join(assembly) + "}") + (design_ok ? ", design equal" : "") +
         (verified ? ", derivation verifies" : "") + ", oracle " + (best ? std::to_string(*best) : "none");
  }
  return {wrong.empty(), d};
}

// -- 6 -----------------------------------------------------------------------

Outcome derivations() {
  std::string d;
  bool ok = true;
  for (const char* name : {"sender", "receiver"}) {
    auto der = derivation_from_json(slurp(std::string(name) + "_derivation.json"));
    auto r = check_derivation(der, band(), prog(std::string(name) + ".gubs"));
    int good = 0;
    std::vector<std::string> bad;
    for (const auto& n : r.nodes) {
      if (n.ok()) ++good;
      else bad.push_back(n.path);
    }
    ok = ok && r.ok();
    d += std::string(d.empty() ? "" : "; ") + name + " " + std::to_string(good) + "/" + std::to_string(r.nodes.size()) +
         " nodes ok" + (r.goal_matches ? "" : ", goal differs") + (bad.empty() ? "" : " (failing " + join(bad) + ")");
  }
  auto outcomes = testing::run_mutations(derivation_from_json(slurp("sender_derivation.json")), band(), prog("sender.gubs"));
  int caught = 0;
  for (const auto& o : outcomes) caught += o.ok();
  ok = ok && outcomes.size() >= 10 && caught == static_cast<int>(outcomes.size());
  d += "; mutations rejected at the blamed node " + std::to_string(caught) + "/" + std::to_string(outcomes.size());
  return {ok, d};
}

// -- 7 -----------------------------------------------------------------------

Outcome rule_soundness() {
  CheckOptions oracle;
  oracle.mode = Mode::Oracle;
  oracle.bound = 3;
  std::string d;
  bool ok = true;
  for (const char* name : {"sender", "receiver"}) {
    auto der = derivation_from_json(slurp(std::string(name) + "_derivation.json"));
    int total = 0, tab = 0, orc = 0, obs = 0;
    std::function<void(const Derivation&)> visit = [&](const Derivation& n) {
      ++total;
      std::vector<Program> parts;
      for (const auto& c : n.assembly) parts.push_back(apply_substitution(band().find(c)->program, n.sigma));
      const Program q = assemble(parts), p = apply_substitution(n.target, n.sigma);
      if (check_inclusion(p, q).kind == VerdictKind::Included) ++tab;
      if (check_inclusion(p, q, oracle).kind != VerdictKind::NotIncluded) ++orc;
      if (check_observability(q)) ++obs;
      for (const auto& s : n.premises) visit(s);
    };
    visit(der);
    ok = ok && tab == total && orc == total && obs == total;
    d += std::string(d.empty() ? "" : "; ") + name + ": included " + std::to_string(tab) + "/" + std::to_string(total) +
         " (tableau), no counter model " + std::to_string(orc) + "/" + std::to_string(total) + " (oracle k=3), observable " +
         std::to_string(obs) + "/" + std::to_string(total);
  }
  return {ok, d};
}

// -- 8 -----------------------------------------------------------------------

Outcome differential() {
  auto gen = testing::differential(600, 11);
  auto cur = testing::curated_unsat_suite();
  std::string d = "generated: " + gen.summary() + "; curated unsat: " + cur.summary();
  for (const auto& n : gen.notes) d += "; " + n;
  for (const auto& n : cur.notes) d += "; " + n;
  return {gen.ok() && cur.ok() && gen.cases >= 500 && cur.cases == 20, d};
}

// -- 9 -----------------------------------------------------------------------

Outcome properties() {
  const auto facts = testing::corpus_facts(testing::corpus_programs(kCorpus));
  const std::vector<std::pair<std::string, testing::SuiteResult>> suites = {
      {"round trip", testing::parser_round_trip(1000, 7)},
      {"included in observable", testing::included_in_observable(facts, 200, 3)},
      {"substitution", testing::inclusion_under_substitution(facts, 200, 5)},
      {"A world independence", testing::global_modality_independence(1000, 13)},
      {"monotonicity", testing::bounded_monotonicity(300, 19)},
  };
  bool ok = true;
  std::string d;
  for (const auto& [name, r] : suites) {
    ok = ok && r.ok();
    d += std::string(d.empty() ? "" : "; ") + name + " " + std::to_string(r.cases - r.failures) + "/" +
         std::to_string(r.cases);
    for (const auto& n : r.notes) d += " [" + n + "]";
  }
  return {ok, d};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "semantics golden", 1, semantics_golden},
      {2, "observability", 10, observability},
      {3, "trace consistency", 5, trace_consistency},
      {4, "dependence kinds on traces", 5, dependence_kinds},
      {5, "band detector synthesis", 60, band_detector},
      {6, "derivation checking", 30, derivations},
      {7, "rule soundness", 120, rule_soundness},
      {8, "logic differential", 600, differential},
      {9, "property suites", 600, properties},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
    failed += !o.pass;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.title << " (" << timing
              << "): " << o.detail << std::endl;
  }
  std::cout << (all.size() - static_cast<std::size_t>(failed)) << "/" << all.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
