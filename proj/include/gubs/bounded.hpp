// Exhaustive small-model search used as a reference decision procedure.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "gubs/logic.hpp"

namespace gubs::logic {

inline constexpr int kMaxWorldsCap = 6;

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::uint64_t explored)
      : std::runtime_error("search budget exceeded after " + std::to_string(explored) + " steps"),
        explored_(explored) {}
  std::uint64_t explored() const { return explored_; }

 private:
  std::uint64_t explored_;
};

struct BoundedOptions {
  std::uint64_t budget = 200'000'000;
  int jobs = 0;  // 0: OpenMP default
};

/// First model (in canonical order) with at most `max_worlds` worlds that
/// validates `f`. Worlds count up from 1; within a size, nominal placements
/// come first, then world-major prop/edge bits with false tried before true.
std::optional<KripkeModel> sat_bounded(const Formula& f, int max_worlds,
                                       const BoundedOptions& opts = {});

/// Same search on one thread. Returns the same model as sat_bounded.
std::optional<KripkeModel> sat_bounded_serial(const Formula& f, int max_worlds,
                                              const BoundedOptions& opts = {});

/// Plain enumeration with evaluate(); only usable for tiny vocabularies.
std::optional<KripkeModel> sat_brute_force(const Formula& f, int max_worlds,
                                           std::uint64_t budget = 50'000'000);

}  // namespace gubs::logic
