// Symbolic traces, chronological divisions and histories.
#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gubs/logic.hpp"
#include "gubs/syntax.hpp"

namespace gubs::traces {

inline constexpr int kDefaultMaxSteps = 16;

using StateSet = std::set<AgentState>;

struct Trace {
  int first = 1;  // index of steps[0]
  std::vector<StateSet> steps;
  std::vector<std::set<Ident>> contexts;  // same length as steps

  int last() const { return first + static_cast<int>(steps.size()) - 1; }
};

/// Period start dates, closed by last()+1.
struct ChronologicalDivision {
  std::vector<int> dates;
  auto operator<=>(const ChronologicalDivision&) const = default;
};

struct History {
  std::vector<StateSet> periods;
  std::vector<std::set<Ident>> contexts;
  bool operator==(const History&) const = default;
};

class InvalidDivision : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws TraceError on non-ground or negated states, or mismatched sizes.
void validate(const Trace& t);

History extract_history(const Trace& t, const ChronologicalDivision& d);

/// One world per period, chained by R_∅ and by the key of the next period's
/// contexts. Absent states are false. `labels` maps nominal -> period.
logic::KripkeModel history_to_model(const History& h, const std::map<std::string, int>& labels = {});

/// Every division of the trace, in lexicographic order of dates.
std::vector<ChronologicalDivision> all_divisions(const Trace& t);

struct Candidate {
  ChronologicalDivision division;
  History history;
  std::set<int> theory;  // indices into dependence_formula_set(program)
};

struct ConsistencyReport {
  std::vector<logic::Formula> formulas;
  std::vector<Candidate> candidates;  // divisions whose last period matches the label
  std::vector<Candidate> consistent;  // maximal theories, ties kept
  bool is_consistent(const ChronologicalDivision& d) const;
};

ConsistencyReport check_consistency(const Trace& t, const Program& p, const std::string& end_label,
                                    int max_steps = kDefaultMaxSteps);

std::vector<History> consistent_histories(const Trace& t, const Program& p,
                                          const std::string& end_label,
                                          int max_steps = kDefaultMaxSteps);

// `@t: a, G(Mid) | contexts: Light` per line, `#` comments.
Trace parse_trace(std::string_view text);
std::string render_trace(const Trace& t);
std::string render_history(const History& h);

/// Two-row timeline: trace on top, history below.
std::string timeline_svg(const Trace& t, const ChronologicalDivision& d);

}  // namespace gubs::traces
