// Tableau decision procedure for the hybrid logic.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "gubs/bounded.hpp"
#include "gubs/logic.hpp"

namespace gubs::logic {

class FragmentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TableauOptions {
  std::uint64_t budget = 5'000'000;  // rule applications
  int max_nodes = 20'000;
};

struct TableauResult {
  bool satisfiable = false;
  std::optional<KripkeModel> model;  // validates the input when satisfiable
  std::uint64_t steps = 0;
  int branches = 0;
};

/// Decides whether some model validates `f` (every world satisfies it).
TableauResult run_tableau(const Formula& f, const TableauOptions& opts = {});

bool sat_tableau(const Formula& f, const TableauOptions& opts = {});

/// Every model validating `q` validates `p`. When `p` is A(body), the
/// check refutes q & E(~body); otherwise q & E(~p).
bool entails(const Formula& q, const Formula& p, const TableauOptions& opts = {});

/// A model validating `q` but not `p`, if one exists.
std::optional<KripkeModel> entailment_counter_model(const Formula& q, const Formula& p,
                                                    const TableauOptions& opts = {});

}  // namespace gubs::logic
