#include "doctest.h"
#include "support/suites.hpp"

using namespace gubs::testing;

namespace {

void expect(const SuiteResult& r) {
  INFO(r.summary());
  for (const auto& n : r.notes) INFO(n);
  std::string notes;
  for (const auto& n : r.notes) notes += "\n  " + n;
  CAPTURE(notes);
  CHECK(r.ok());
}

const CorpusFacts& facts() {
  static const CorpusFacts f = corpus_facts(corpus_programs(GUBS_CORPUS_DIR));
  return f;
}

}  // namespace

TEST_CASE("parser round trip on generated programs") { expect(parser_round_trip(1000, 7)); }

TEST_CASE("tableau agrees with the bounded oracle") { expect(differential(600, 11)); }

TEST_CASE("known unsatisfiable formulas") {
  CHECK(curated_unsat().size() == 20);
  expect(curated_unsat_suite());
}

TEST_CASE("included in observable means observable") { expect(included_in_observable(facts(), 200, 3)); }

TEST_CASE("inclusion survives substitution") { expect(inclusion_under_substitution(facts(), 200, 5)); }

TEST_CASE("global modality ignores the evaluation world") { expect(global_modality_independence(1000, 13)); }

TEST_CASE("parallel search returns the serial model") { expect(parallel_matches_serial(300, 17)); }

TEST_CASE("bounded search is monotone in the world bound") { expect(bounded_monotonicity(300, 19)); }
