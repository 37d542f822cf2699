#include <algorithm>
#include <optional>

#include "gubs/semantics.hpp"
#include "gubs/traces.hpp"

namespace gubs::traces {

namespace {

logic::Prop prop_of(const AgentState& s) {
  logic::Prop p;
  for (const auto& c : s.path) p.path.push_back(c.text);
  p.agent = s.agent.text;
  if (s.attribute) p.attribute = s.attribute->text;
  return p;
}

bool ground(const AgentState& s) {
  if (!s.agent.is_constant()) return false;
  if (s.attribute && !s.attribute->is_constant()) return false;
  return std::all_of(s.path.begin(), s.path.end(), [](const Ident& c) { return c.is_constant(); });
}

}  // namespace

void validate(const Trace& t) {
  if (t.steps.empty()) throw TraceError("trace has no steps");
  if (t.contexts.size() != t.steps.size()) throw TraceError("contexts do not line up with steps");
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    for (const auto& s : t.steps[i]) {
      if (s.polarity == Polarity::Negative)
        throw TraceError("step " + std::to_string(t.first + i) + ": negated state " + render_state(s));
      if (!ground(s))
        throw TraceError("step " + std::to_string(t.first + i) + ": state " + render_state(s) +
                         " is not ground");
    }
  }
}

History extract_history(const Trace& t, const ChronologicalDivision& d) {
  const auto& ds = d.dates;
  if (ds.size() < 2) throw InvalidDivision("a division needs at least two dates");
  if (ds.front() != t.first) throw InvalidDivision("division must start at step " + std::to_string(t.first));
  if (ds.back() != t.last() + 1)
    throw InvalidDivision("division must close at step " + std::to_string(t.last() + 1));
  for (std::size_t i = 1; i < ds.size(); ++i) {
    if (ds[i] <= ds[i - 1]) throw InvalidDivision("dates must be strictly increasing");
  }
  History h;
  for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
    StateSet events;
    std::set<Ident> ctx;
    for (int s = ds[i]; s < ds[i + 1]; ++s) {
      const auto k = static_cast<std::size_t>(s - t.first);
      events.insert(t.steps[k].begin(), t.steps[k].end());
      ctx.insert(t.contexts[k].begin(), t.contexts[k].end());
    }
    h.periods.push_back(std::move(events));
    h.contexts.push_back(std::move(ctx));
  }
  return h;
}

logic::KripkeModel history_to_model(const History& h, const std::map<std::string, int>& labels) {
  const int n = static_cast<int>(h.periods.size());
  logic::KripkeModel m(n);
  for (int i = 0; i < n; ++i) {
    for (const auto& s : h.periods[i]) m.set_prop(prop_of(s), i);
    if (i + 1 < n) {
      m.add_edge({}, i, i + 1);
      const auto& next = h.contexts[i + 1];
      if (!next.empty()) {
        logic::ContextSet k;
        for (const auto& c : next) k.names.insert(c.text);
        m.add_edge(k, i, i + 1);
      }
    }
  }
  for (const auto& [label, period] : labels) m.set_nominal(label, period);
  return m;
}

std::vector<ChronologicalDivision> all_divisions(const Trace& t) {
  const int inner = static_cast<int>(t.steps.size()) - 1;  // candidate cut points
  std::vector<ChronologicalDivision> out;
  for (unsigned long mask = 0; mask < (1UL << inner); ++mask) {
    ChronologicalDivision d;
    d.dates.push_back(t.first);
    for (int i = 0; i < inner; ++i) {
      if (mask >> i & 1UL) d.dates.push_back(t.first + 1 + i);
    }
    d.dates.push_back(t.last() + 1);
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool ConsistencyReport::is_consistent(const ChronologicalDivision& d) const {
  return std::any_of(consistent.begin(), consistent.end(),
                     [&](const Candidate& c) { return c.division == d; });
}

ConsistencyReport check_consistency(const Trace& t, const Program& p, const std::string& end_label,
                                    int max_steps) {
  validate(t);
  if (static_cast<int>(t.steps.size()) > max_steps) {
    throw TraceError("trace has " + std::to_string(t.steps.size()) + " steps; limit is " +
                     std::to_string(max_steps));
  }
  auto nf = semantics::normal_form(p);
  auto obs = std::find_if(nf.observations.begin(), nf.observations.end(),
                          [&](const auto& o) { return o.label.text == end_label; });
  if (obs == nf.observations.end()) throw TraceError("no observation labelled " + end_label);
  const logic::Formula end_formula = semantics::interpret_collection(obs->states);

  ConsistencyReport report;
  report.formulas = semantics::dependence_formula_set(p);
  const auto divisions = all_divisions(t);
  std::vector<std::optional<Candidate>> slots(divisions.size());

#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(divisions.size()); ++i) {
    History h = extract_history(t, divisions[i]);
    const int last = static_cast<int>(h.periods.size()) - 1;
    auto m = history_to_model(h, {{end_label, last}});
    if (!logic::evaluate(m, last, end_formula)) continue;
    Candidate c{divisions[i], std::move(h), {}};
    for (std::size_t f = 0; f < report.formulas.size(); ++f) {
      if (logic::validates(m, report.formulas[f])) c.theory.insert(static_cast<int>(f));
    }
    slots[i] = std::move(c);
  }

  for (auto& s : slots) {
    if (s) report.candidates.push_back(std::move(*s));
  }
  for (const auto& c : report.candidates) {
    bool dominated = std::any_of(report.candidates.begin(), report.candidates.end(), [&](const Candidate& o) {
      return o.theory.size() > c.theory.size() &&
             std::includes(o.theory.begin(), o.theory.end(), c.theory.begin(), c.theory.end());
    });
    if (!dominated) report.consistent.push_back(c);
  }
  return report;
}

std::vector<History> consistent_histories(const Trace& t, const Program& p, const std::string& end_label,
                                          int max_steps) {
  std::vector<History> out;
  for (auto& c : check_consistency(t, p, end_label, max_steps).consistent) out.push_back(std::move(c.history));
  return out;
}

}  // namespace gubs::traces
