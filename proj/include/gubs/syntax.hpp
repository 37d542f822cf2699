// GUBS abstract syntax, parser and pretty-printer.
#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gubs {

enum class IdentKind { Constant, Variable };

/// A name in a program. Constants start with an uppercase letter,
/// variables with anything else.
struct Ident {
  std::string text;

  Ident() = default;
  explicit Ident(std::string t) : text(std::move(t)) {}

  IdentKind kind() const;
  bool is_constant() const { return kind() == IdentKind::Constant; }
  bool is_variable() const { return kind() == IdentKind::Variable; }

  auto operator<=>(const Ident&) const = default;
  bool operator==(const Ident&) const = default;
};

enum class Polarity { Positive, Negative };

/// `C.D.g`, `g(a)`, `~g`, `g(~a)`.
struct AgentState {
  std::vector<Ident> path;
  Ident agent;
  std::optional<Ident> attribute;
  Polarity polarity = Polarity::Positive;

  auto operator<=>(const AgentState&) const = default;
  bool operator==(const AgentState&) const = default;
};

/// s1 + ... + sn, never empty.
struct StateCollection {
  std::vector<AgentState> states;

  auto operator<=>(const StateCollection&) const = default;
  bool operator==(const StateCollection&) const = default;
};

enum class DependenceKind { Normal, Persistent, Remanent };

struct Dependence {
  DependenceKind kind = DependenceKind::Normal;
  StateCollection cause;
  StateCollection effect;

  auto operator<=>(const Dependence&) const = default;
  bool operator==(const Dependence&) const = default;
};

enum class AttrRelKind { Prec, Napprox, Bare };

struct AttrRel {
  AttrRelKind kind = AttrRelKind::Bare;
  Ident left;
  std::optional<Ident> right;

  auto operator<=>(const AttrRel&) const = default;
  bool operator==(const AttrRel&) const = default;
};

struct Behaviour;

struct CompartmentB {
  Ident name;
  std::vector<Behaviour> body;
  bool operator==(const CompartmentB&) const;
};

struct ContextB {
  std::vector<Ident> contexts;
  std::vector<Behaviour> body;
  bool operator==(const ContextB&) const;
};

struct ObservationB {
  Ident label;
  StateCollection states;
  bool operator==(const ObservationB&) const = default;
};

/// `g1, g2 :: {a < b, c >< d}`. Exclusion/inclusion sets and relation
/// chains are desugared into binary relations by the parser.
struct AttrDeclB {
  std::vector<Ident> agents;
  std::vector<AttrRel> relations;
  bool operator==(const AttrDeclB&) const = default;
};

struct Behaviour {
  std::variant<Dependence, CompartmentB, ContextB, ObservationB, AttrDeclB> node;
  bool operator==(const Behaviour&) const = default;
};

struct Program {
  std::vector<Behaviour> behaviours;
  bool operator==(const Program&) const = default;
};

struct SourcePos {
  int line = 1;
  int column = 1;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(SourcePos pos, std::string found, std::set<std::string> expected);

  SourcePos position() const { return pos_; }
  const std::string& found() const { return found_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  SourcePos pos_;
  std::string found_;
  std::set<std::string> expected_;
};

class DuplicateLabelError : public std::runtime_error {
 public:
  explicit DuplicateLabelError(const std::string& label);
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

Program parse_program(std::string_view text);
std::string render_program(const Program& p);
std::string render_state(const AgentState& s);
std::string render_collection(const StateCollection& c);

/// Indented tree dump used by `gubsc parse`.
std::string dump_ast(const Program& p);

std::set<Ident> free_variables(const Program& p);

/// Throws DuplicateLabelError when an observation label occurs twice.
void check_unique_labels(const Program& p);

/// ~s for every state of the collection.
StateCollection negate_each(const StateCollection& c);

// Convenience constructors for building programs in code.
Behaviour make_dependence(DependenceKind k, StateCollection cause, StateCollection effect);
AgentState make_state(std::string agent, std::optional<std::string> attribute = std::nullopt,
                      Polarity pol = Polarity::Positive);

}  // namespace gubs
