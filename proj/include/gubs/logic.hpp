// Hybrid logic with satisfaction operators, the global modality and
// context-indexed forward/converse modalities.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gubs::logic {

/// Proposition `C1.C2.g` or `C1.C2.g_a`.
struct Prop {
  std::vector<std::string> path;
  std::string agent;
  std::optional<std::string> attribute;

  std::string name() const;
  auto operator<=>(const Prop&) const = default;
  bool operator==(const Prop&) const = default;
};

/// Index of a modality. The empty set is the base relation.
struct ContextSet {
  std::set<std::string> names;

  ContextSet() = default;
  ContextSet(std::initializer_list<std::string> xs) : names(xs) {}
  explicit ContextSet(std::set<std::string> xs) : names(std::move(xs)) {}

  bool empty() const { return names.empty(); }
  std::string text() const;  // "k1,k2" or ""
  auto operator<=>(const ContextSet&) const = default;
  bool operator==(const ContextSet&) const = default;
};

enum class Op {
  Top,
  Prop,
  Nom,
  Not,
  And,
  Or,
  Implies,
  At,
  Diamond,
  DiamondConv,
  Box,
  BoxConv,
  Always,
  Exists,
};

/// Immutable formula tree with shared subterms.
class Formula {
 public:
  Formula();  // Top

  static Formula top();
  static Formula bottom();  // Not(Top)
  static Formula prop(Prop p);
  static Formula nom(std::string label);
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula at(std::string label, Formula f);
  static Formula diamond(ContextSet k, Formula f);
  static Formula diamond_conv(ContextSet k, Formula f);
  static Formula box(ContextSet k, Formula f);
  static Formula box_conv(ContextSet k, Formula f);
  static Formula always(Formula f);
  static Formula exists(Formula f);

  /// Right-nested conjunction; Top when empty.
  static Formula conj_all(const std::vector<Formula>& fs);

  Op op() const;
  const Prop& prop() const;
  const std::string& nominal() const;
  const ContextSet& contexts() const;
  const Formula& lhs() const;  // unary operand or left operand
  const Formula& rhs() const;

  /// Prefix notation with flattened, sorted conjunctions and disjunctions.
  std::string canonical() const;

  bool operator==(const Formula& o) const;
  bool operator<(const Formula& o) const { return canonical() < o.canonical(); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Vocabulary {
  std::set<Prop> props;
  std::set<std::string> nominals;
  std::set<ContextSet> keys;
  int modal_depth = 0;
};

Vocabulary vocabulary(const Formula& f);

using World = int;

class UnknownWorld : public std::out_of_range {
 public:
  explicit UnknownWorld(World w) : std::out_of_range("unknown world " + std::to_string(w)) {}
};

class InvalidModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite Kripke model over worlds 0..n-1.
class KripkeModel {
 public:
  explicit KripkeModel(int worlds);

  int world_count() const { return worlds_; }
  bool has_world(World w) const { return w >= 0 && w < worlds_; }

  void add_edge(const ContextSet& k, World from, World to);
  void set_prop(const Prop& p, World w, bool value = true);
  /// A nominal names at most one world; placing it elsewhere throws InvalidModel.
  void set_nominal(const std::string& label, World w);

  bool holds(const Prop& p, World w) const;
  std::optional<World> nominal(const std::string& label) const;
  bool related(const ContextSet& k, World from, World to) const;

  const std::map<ContextSet, std::set<std::pair<World, World>>>& relations() const {
    return relations_;
  }
  const std::map<Prop, std::set<World>>& valuation() const { return valuation_; }
  const std::map<std::string, World>& nominals() const { return nominals_; }

  /// Stable text listing: worlds, relation keys, pairs, valuation.
  std::string dump() const;

  bool operator==(const KripkeModel&) const = default;

 private:
  int worlds_;
  std::map<ContextSet, std::set<std::pair<World, World>>> relations_;
  std::map<Prop, std::set<World>> valuation_;
  std::map<std::string, World> nominals_;
};

bool evaluate(const KripkeModel& m, World w, const Formula& f);
bool validates(const KripkeModel& m, const Formula& f);
std::vector<Formula> modal_theory(const KripkeModel& m, const std::vector<Formula>& fs);

/// Negation normal form using the derived-connective definitions; the result
/// contains Not only directly above Prop, Nom or Top.
Formula nnf(const Formula& f);

}  // namespace gubs::logic
