// Serial vs OpenMP bounded model search on a few unsatisfiable and hard
// satisfiable formulas. Usage: bench_bounded [worlds] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "gubs/bounded.hpp"
#include "gubs/semantics.hpp"

using namespace gubs;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int worlds = argc > 1 ? std::atoi(argv[1]) : 3;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

  // unsatisfiable ones force the full search space
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"antilogy", "{ Obs :: g, ~g => g }"},
      {"negative circuit", "{ g1 +> g2, g2 -| g1, obs1 :: g1 + ~g2, obs2 :: ~g1 + g2 }"},
      {"contexted chain", "{ [K] { A -> B }, B => C, C ~> A, o :: C + ~A }"},
      {"level chain", "{ G(Low) -> G(Mid), G(Mid) -> G(High), obs :: G(High) }"},
  };

  std::printf("%-18s %6s %12s %12s %8s  %s\n", "case", "worlds", "serial ms", "omp ms", "speedup", "agree");
  for (const auto& [name, src] : cases) {
    const auto f = semantics::interpret(parse_program(src));
    double serial = 1e300, parallel = 1e300;
    bool agree = true;
    for (int r = 0; r < repeats; ++r) {
      auto t0 = Clock::now();
      auto a = logic::sat_bounded_serial(f, worlds);
      serial = std::min(serial, ms_since(t0));
      t0 = Clock::now();
      auto b = logic::sat_bounded(f, worlds);
      parallel = std::min(parallel, ms_since(t0));
      agree = agree && a.has_value() == b.has_value() && (!a || *a == *b);
    }
    std::printf("%-18s %6d %12.2f %12.2f %8.2f  %s\n", name.c_str(), worlds, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0, agree ? "yes" : "NO");
  }
  std::printf("threads: %d\n", omp_get_max_threads());
  return 0;
}
