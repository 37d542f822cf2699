// Substitutions, behavioural inclusion, derivations and component selection.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gubs/logic.hpp"
#include "gubs/semantics.hpp"
#include "gubs/syntax.hpp"

namespace gubs::synthesis {

class InvalidSubstitution : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LibraryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoCover : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NoCover because the match budget ran out rather than the library.
class SearchExhausted : public NoCover {
 public:
  using NoCover::NoCover;
};

class ObservabilityFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite map from variables to identifiers, kept closed so applying it
/// twice is the same as applying it once.
class Substitution {
 public:
  Substitution() = default;
  explicit Substitution(const std::map<Ident, Ident>& pairs);

  Ident apply(const Ident& x) const;
  bool binds(const Ident& x) const { return map_.count(x) > 0; }
  const std::map<Ident, Ident>& mapping() const { return map_; }
  bool empty() const { return map_.empty(); }

  /// Adds v/t; throws InvalidSubstitution if v is a constant or already
  /// bound elsewhere.
  void bind(const Ident& v, const Ident& t);

  /// Union when the two agree on shared variables.
  std::optional<Substitution> merged(const Substitution& other) const;
  Substitution restricted(const std::set<Ident>& vars) const;

  std::string text() const;  // {v1/Tetr, v2/Luxl}
  bool operator==(const Substitution&) const = default;

 private:
  std::map<Ident, Ident> map_;
};

Program apply_substitution(const Program& p, const Substitution& s);

/// Reserved names for intermediates introduced by Trans.
bool is_fresh(const Ident& x);

struct Component {
  std::string name;
  Program program;
};

struct Library {
  std::vector<Component> components;
  const Component* find(const std::string& name) const;
};

/// JSON array of {"name", "source"}. Every component must parse, have a
/// unique name and be observable.
Library load_library(const std::string& json_text);

enum class Mode { Tableau, Oracle };

struct CheckOptions {
  Mode mode = Mode::Tableau;
  int bound = 3;  // oracle world bound
  std::uint64_t budget = 5'000'000;
  int jobs = 0;
};

enum class VerdictKind { Included, NotIncluded, Inconclusive };

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::optional<logic::KripkeModel> counter_model;
};

/// P ⊑ Q: every model validating Q validates P.
Verdict check_inclusion(const Program& p, const Program& q, const CheckOptions& opts = {});

/// Some model validates the program. The oracle only searches up to
/// opts.bound worlds.
bool check_observability(const Program& p, const CheckOptions& opts = {});

Program assemble(const std::vector<Program>& parts);

// -- derivations -------------------------------------------------------------

enum class Rule { Inst, Com, Cont, Asm, Trans, N2P, R2N, SCom, SCont, Incl };

std::string rule_name(Rule r);
Rule rule_from_name(const std::string& s);  // throws std::invalid_argument

struct Derivation {
  Rule rule = Rule::Inst;
  std::vector<std::string> assembly;
  Substitution sigma;
  Program target;
  std::vector<Derivation> premises;
};

std::string derivation_to_json(const Derivation& d, int indent = 2);
Derivation derivation_from_json(const std::string& text);

enum class Failure { None, SideConditionFailed, SubstitutionClash, NotInLibrary, Malformed };

std::string failure_name(Failure f);

struct NodeReport {
  std::string path;  // "root", "root.0.1", ...
  Rule rule = Rule::Inst;
  Failure failure = Failure::None;
  std::string detail;
  bool ok() const { return failure == Failure::None; }
};

struct DerivationReport {
  std::vector<NodeReport> nodes;  // pre-order
  bool goal_matches = false;
  std::string goal_detail;
  bool ok() const;
};

/// One node in isolation: its side conditions against its premises.
NodeReport check_node(const Derivation& d, const Library& lib, const CheckOptions& opts = {});

DerivationReport check_derivation(const Derivation& d, const Library& lib, const Program& goal,
                                  const CheckOptions& opts = {});

/// Normalized dependences (as a set) and merged attributes agree.
bool same_up_to_order(const Program& a, const Program& b);

/// Every dependence of target[sigma] is covered by some dependence of the
/// components (already instantiated). Chain roles are read off the
/// uninstantiated target: a link whose cause is an intermediate variable
/// produced by another link may drop contexts but must be matched by a
/// persistent dependence; a chain head may be matched by a normal one.
bool assembly_covers(const std::vector<Program>& components, const Program& target,
                     const Substitution& sigma, std::string* why = nullptr);

// -- search ------------------------------------------------------------------

struct SearchOptions {
  int rewrite_depth = 3;
  std::uint64_t budget = 2'000'000;  // match attempts
  CheckOptions check;
};

struct SynthesisResult {
  std::vector<std::string> assembly;  // library order
  Substitution sigma;
  Derivation derivation;
  Program design;  // the selected components under sigma
};

SynthesisResult synthesize(const Program& goal, const Library& lib, const SearchOptions& opts = {});

/// Exact smallest covering subset (up to max_subset components) by
/// exhaustive enumeration; nullopt when none exists.
std::optional<int> minimality_oracle(const Program& goal, const Library& lib, int max_subset = 10,
                                     const SearchOptions& opts = {});

}  // namespace gubs::synthesis
