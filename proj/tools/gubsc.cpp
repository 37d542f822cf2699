// gubsc: command-line driver for parsing, interpreting, checking and
// synthesizing GUBS programs.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gubs/bounded.hpp"
#include "gubs/semantics.hpp"
#include "gubs/synthesis.hpp"
#include "gubs/tableau.hpp"
#include "gubs/traces.hpp"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace gubs;

enum Exit { kOk = 0, kUsage = 1, kNegative = 2, kBudget = 3 };

struct Options {
  std::string mode = "tableau";
  int bound = 3;
  std::uint64_t budget = 5'000'000;
  int jobs = 0;
  std::string format = "text";
  std::string out;
};

// Thrown for anything that should end with exit 1 and a message.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Report {
  int code = kOk;
  std::string text;
  json doc = json::object();
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << data;
}

bool use_color(const Options& o) {
  return o.out.empty() && o.format == "text" && std::getenv("GUBSC_NO_COLOR") == nullptr && isatty(STDOUT_FILENO);
}

std::string paint(const std::string& word, bool good, bool color) {
  if (!color) return word;
  return std::string(good ? "\x1b[32m" : "\x1b[31m") + word + "\x1b[0m";
}

// file:line:col plus the offending line and a caret under the column
std::string syntax_diagnostic(const std::string& path, const std::string& src, const SyntaxError& e) {
  std::ostringstream os;
  os << path << ":" << e.what() << "\n";
  std::istringstream lines(src);
  std::string line;
  for (int i = 1; std::getline(lines, line); ++i) {
    if (i == e.position().line) {
      os << "  " << line << "\n  " << std::string(static_cast<std::size_t>(std::max(0, e.position().column - 1)), ' ')
         << "^\n";
      break;
    }
  }
  return os.str();
}

Program load_program(const std::string& path) {
  const std::string src = read_file(path);
  try {
    return parse_program(src);
  } catch (const SyntaxError& e) {
    throw UsageError(syntax_diagnostic(path, src, e));
  } catch (const DuplicateLabelError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

synthesis::Library load_lib(const std::string& path) {
  try {
    return synthesis::load_library(read_file(path));
  } catch (const synthesis::LibraryError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

synthesis::CheckOptions check_options(const Options& o) {
  synthesis::CheckOptions c;
  c.mode = o.mode == "oracle" ? synthesis::Mode::Oracle : synthesis::Mode::Tableau;
  c.bound = o.bound;
  c.budget = o.budget;
  c.jobs = o.jobs;
  return c;
}

json model_json(const logic::KripkeModel& m) {
  json j;
  j["worlds"] = m.world_count();
  json rel = json::object();
  for (const auto& [k, pairs] : m.relations()) {
    json ps = json::array();
    for (const auto& [a, b] : pairs) ps.push_back({a, b});
    rel[k.empty() ? "" : k.text()] = ps;
  }
  j["relations"] = rel;
  json val = json::object();
  for (const auto& [p, ws] : m.valuation()) val[p.name()] = ws;
  j["valuation"] = val;
  json noms = json::object();
  for (const auto& [n, w] : m.nominals()) noms[n] = w;
  j["nominals"] = noms;
  return j;
}

// -- commands ----------------------------------------------------------------

Report cmd_parse(const std::string& file) {
  Program p = load_program(file);
  Report r;
  r.text = dump_ast(p);
  r.doc["file"] = file;
  r.doc["program"] = render_program(p);
  r.doc["ast"] = r.text;
  auto warnings = semantics::attribute_warnings(p);
  r.doc["warnings"] = warnings;
  for (const auto& w : warnings) std::cerr << file << ": warning: " << w << "\n";
  return r;
}

Report cmd_interpret(const std::string& file) {
  Program p = load_program(file);
  Report r;
  std::string f = semantics::interpret(p).canonical();
  r.text = f + "\n";
  r.doc["file"] = file;
  r.doc["formula"] = f;
  json deps = json::array();
  for (const auto& d : semantics::dependence_formula_set(p)) deps.push_back(d.canonical());
  r.doc["dependences"] = deps;
  return r;
}

Report cmd_check(const std::string& file, const Options& o, bool color) {
  Program p = load_program(file);
  const auto f = semantics::interpret(p);
  std::optional<logic::KripkeModel> model;
  if (o.mode == "oracle") {
    logic::BoundedOptions b;
    b.jobs = o.jobs;
    model = logic::sat_bounded(f, o.bound, b);
  } else {
    logic::TableauOptions t;
    t.budget = o.budget;
    auto res = logic::run_tableau(f, t);
    if (res.satisfiable) model = res.model;
  }
  Report r;
  const bool ok = model.has_value();
  const std::string verdict = ok ? "OBSERVABLE" : "UNOBSERVABLE";
  r.code = ok ? kOk : kNegative;
  r.text = paint(verdict, ok, color) + "\n";
  if (!ok && o.mode == "oracle") r.text += "no model with at most " + std::to_string(o.bound) + " worlds\n";
  if (ok) r.text += model->dump();
  r.doc["file"] = file;
  r.doc["verdict"] = verdict;
  r.doc["mode"] = o.mode;
  if (o.mode == "oracle") r.doc["bound"] = o.bound;
  r.doc["model"] = ok ? model_json(*model) : json(nullptr);
  return r;
}

Report cmd_include(const std::string& pf, const std::string& qf, const Options& o, bool color) {
  Program p = load_program(pf);
  Program q = load_program(qf);
  auto v = synthesis::check_inclusion(p, q, check_options(o));
  Report r;
  std::string verdict;
  switch (v.kind) {
    case synthesis::VerdictKind::Included: verdict = "INCLUDED"; break;
    case synthesis::VerdictKind::NotIncluded: verdict = "NOT INCLUDED"; break;
    case synthesis::VerdictKind::Inconclusive: verdict = "INCONCLUSIVE"; break;
  }
  const bool ok = v.kind == synthesis::VerdictKind::Included;
  r.code = ok ? kOk : kNegative;
  r.text = paint(verdict, ok, color) + "\n";
  if (v.kind == synthesis::VerdictKind::Inconclusive) {
    r.text += "no counter model with at most " + std::to_string(o.bound) + " worlds\n";
  }
  if (v.counter_model) r.text += "counter model:\n" + v.counter_model->dump();
  r.doc["included"] = pf;
  r.doc["in"] = qf;
  r.doc["verdict"] = verdict;
  r.doc["mode"] = o.mode;
  if (o.mode == "oracle") r.doc["bound"] = o.bound;
  r.doc["counter_model"] = v.counter_model ? model_json(*v.counter_model) : json(nullptr);
  return r;
}

Report cmd_synth(const std::string& goal_file, const std::string& lib_file, const std::string& derivation_out,
                 int depth, const Options& o, bool color) {
  Program goal = load_program(goal_file);
  auto lib = load_lib(lib_file);
  synthesis::SearchOptions s;
  s.rewrite_depth = depth;
  s.budget = o.budget;
  s.check = check_options(o);
  s.check.mode = synthesis::Mode::Tableau;  // observability inside search stays decisive

  Report r;
  r.doc["goal"] = goal_file;
  r.doc["library"] = lib_file;
  synthesis::SynthesisResult res;
  try {
    res = synthesis::synthesize(goal, lib, s);
  } catch (const synthesis::SearchExhausted& e) {
    r.code = kBudget;
    r.text = paint("BUDGET EXCEEDED", false, color) + "\n" + e.what() + "\n";
    r.doc["verdict"] = "BUDGET EXCEEDED";
    r.doc["detail"] = e.what();
    return r;
  } catch (const std::runtime_error& e) {
    // NoCover and ObservabilityFailed
    const bool unobs = dynamic_cast<const synthesis::ObservabilityFailed*>(&e) != nullptr;
    r.code = kNegative;
    r.text = paint(unobs ? "UNOBSERVABLE" : "NO COVER", false, color) + "\n" + e.what() + "\n";
    r.doc["verdict"] = unobs ? "UNOBSERVABLE" : "NO COVER";
    r.doc["detail"] = e.what();
    return r;
  }
  const std::string djson = synthesis::derivation_to_json(res.derivation);
  if (!derivation_out.empty()) write_file(derivation_out, djson + "\n");

  std::ostringstream os;
  os << paint("SYNTHESIZED", true, color) << "\n";
  os << "assembly: ";
  for (std::size_t i = 0; i < res.assembly.size(); ++i) os << (i ? ", " : "") << res.assembly[i];
  os << "\nsigma: " << res.sigma.text() << "\n";
  os << "design: " << render_program(res.design) << "\n";
  r.text = os.str();
  r.doc["verdict"] = "SYNTHESIZED";
  r.doc["assembly"] = res.assembly;
  json sig = json::object();
  for (const auto& [k, v] : res.sigma.mapping()) sig[k.text] = v.text;
  r.doc["sigma"] = sig;
  r.doc["design"] = render_program(res.design);
  r.doc["derivation"] = json::parse(djson);
  return r;
}

Report cmd_verify(const std::string& dfile, const std::string& lib_file, const std::string& goal_file,
                  const Options& o, bool color) {
  synthesis::Derivation d;
  try {
    d = synthesis::derivation_from_json(read_file(dfile));
  } catch (const std::invalid_argument& e) {
    throw UsageError(dfile + ": " + e.what());
  } catch (const SyntaxError& e) {
    throw UsageError(dfile + ": " + e.what());
  }
  auto lib = load_lib(lib_file);
  Program goal = load_program(goal_file);
  auto rep = synthesis::check_derivation(d, lib, goal, check_options(o));

  Report r;
  std::ostringstream os;
  json nodes = json::array();
  for (const auto& n : rep.nodes) {
    os << (n.ok() ? paint("ok  ", true, color) : paint("FAIL", false, color)) << " " << n.path << " "
       << synthesis::rule_name(n.rule);
    if (!n.ok()) os << ": " << synthesis::failure_name(n.failure) << ": " << n.detail;
    os << "\n";
    nodes.push_back({{"path", n.path},
                     {"rule", synthesis::rule_name(n.rule)},
                     {"status", synthesis::failure_name(n.failure)},
                     {"detail", n.detail}});
  }
  os << (rep.goal_matches ? "goal: " : "goal mismatch: ") << rep.goal_detail << "\n";
  const std::string verdict = rep.ok() ? "VERIFIED" : "REJECTED";
  os << paint(verdict, rep.ok(), color) << "\n";
  r.code = rep.ok() ? kOk : kNegative;
  r.text = os.str();
  r.doc["derivation"] = dfile;
  r.doc["verdict"] = verdict;
  r.doc["nodes"] = nodes;
  r.doc["goal_matches"] = rep.goal_matches;
  r.doc["goal_detail"] = rep.goal_detail;
  return r;
}

Report cmd_trace(const std::string& tfile, const std::string& pfile, const std::string& label,
                 const std::string& svg, int max_steps, bool color) {
  traces::Trace t;
  try {
    t = traces::parse_trace(read_file(tfile));
  } catch (const traces::TraceError& e) {
    throw UsageError(tfile + ": " + e.what());
  } catch (const SyntaxError& e) {
    throw UsageError(tfile + ": " + e.what());
  }
  Program p = load_program(pfile);
  traces::ConsistencyReport rep;
  try {
    rep = traces::check_consistency(t, p, label, max_steps);
  } catch (const traces::TraceError& e) {
    throw UsageError(e.what());
  }

  auto dates = [](const traces::ChronologicalDivision& d) {
    std::string s = "(";
    for (std::size_t i = 0; i < d.dates.size(); ++i) s += (i ? "," : "") + std::to_string(d.dates[i]);
    return s + ")";
  };

  Report r;
  std::ostringstream os;
  const bool any = !rep.consistent.empty();
  os << paint(any ? "CONSISTENT" : "INCONSISTENT", any, color) << "\n";
  os << rep.candidates.size() << " candidate division(s), " << rep.consistent.size() << " consistent\n";
  json cons = json::array();
  for (const auto& c : rep.consistent) {
    os << "division " << dates(c.division) << " satisfies " << c.theory.size() << "/" << rep.formulas.size()
       << " dependences\n";
    os << traces::render_history(c.history) << "\n";
    cons.push_back({{"dates", c.division.dates},
                    {"theory", c.theory},
                    {"history", traces::render_history(c.history)}});
  }
  if (!svg.empty() && any) write_file(svg, traces::timeline_svg(t, rep.consistent.front().division));
  r.code = any ? kOk : kNegative;
  r.text = os.str();
  r.doc["trace"] = tfile;
  r.doc["program"] = pfile;
  r.doc["label"] = label;
  r.doc["verdict"] = any ? "CONSISTENT" : "INCONSISTENT";
  json forms = json::array();
  for (const auto& f : rep.formulas) forms.push_back(f.canonical());
  r.doc["dependences"] = forms;
  r.doc["candidates"] = rep.candidates.size();
  r.doc["consistent"] = cons;
  return r;
}

void emit(const Report& r, const Options& o) {
  std::string data = o.format == "json" ? r.doc.dump(2) + "\n" : r.text;
  if (o.out.empty()) {
    std::cout << data;
  } else {
    write_file(o.out, data);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GUBS compiler: parse, interpret, check and synthesize GUBS programs"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--mode", o.mode, "tableau (decisive) or oracle (bounded model search)")
      ->check(CLI::IsMember({"tableau", "oracle"}));
  app.add_option("--bound", o.bound, "world bound for the oracle")->check(CLI::PositiveNumber);
  app.add_option("--budget", o.budget, "step budget for tableau and search")->check(CLI::PositiveNumber);
  app.add_option("--jobs", o.jobs, "worker threads, 0 for the OpenMP default")->check(CLI::NonNegativeNumber);
  app.add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", o.out, "write the report to this file");

  std::string a, b, c, label, svg, deriv_out;
  int depth = 3;
  int max_steps = traces::kDefaultMaxSteps;

  auto* parse = app.add_subcommand("parse", "dump the syntax tree");
  parse->add_option("file", a)->required();
  auto* interp = app.add_subcommand("interpret", "print the formula of a program");
  interp->add_option("file", a)->required();
  auto* check = app.add_subcommand("check", "observability of a program");
  check->add_option("file", a)->required();
  auto* include = app.add_subcommand("include", "is P behaviourally included in Q");
  include->add_option("p", a)->required();
  include->add_option("q", b)->required();
  auto* synth = app.add_subcommand("synth", "select library components for a goal");
  synth->add_option("goal", a)->required();
  synth->add_option("library", b)->required();
  synth->add_option("--derivation", deriv_out, "write the derivation JSON here");
  synth->add_option("--depth", depth, "rewrite depth per goal dependence")->check(CLI::NonNegativeNumber);
  auto* verify = app.add_subcommand("verify", "check a derivation node by node");
  verify->add_option("derivation", a)->required();
  verify->add_option("library", b)->required();
  verify->add_option("goal", c)->required();
  auto* trace = app.add_subcommand("trace", "consistent histories of a trace");
  trace->add_option("trace", a)->required();
  trace->add_option("program", b)->required();
  trace->add_option("label", label)->required();
  trace->add_option("--svg", svg, "write a timeline of the first consistent history");
  trace->add_option("--max-steps", max_steps, "refuse longer traces")->check(CLI::PositiveNumber);

  for (auto* sub : {parse, interp, check, include, synth, verify, trace}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const bool color = use_color(o);
  try {
    Report r;
    if (*parse) r = cmd_parse(a);
    else if (*interp) r = cmd_interpret(a);
    else if (*check) r = cmd_check(a, o, color);
    else if (*include) r = cmd_include(a, b, o, color);
    else if (*synth) r = cmd_synth(a, b, deriv_out, depth, o, color);
    else if (*verify) r = cmd_verify(a, b, c, o, color);
    else r = cmd_trace(a, b, label, svg, max_steps, color);
    emit(r, o);
    return r.code;
  } catch (const UsageError& e) {
    std::cerr << "gubsc: " << e.what();
    if (std::string(e.what()).back() != '\n') std::cerr << "\n";
    return kUsage;
  } catch (const logic::BudgetExceeded& e) {
    std::cerr << "gubsc: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "gubsc: " << e.what() << "\n";
    return kUsage;
  }
}
