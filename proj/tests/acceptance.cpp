// Runs the fourteen acceptance suites and prints one line per criterion.
// Optional arguments select criteria by number.

#include "verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <set>

using namespace ghlab::verify;

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const Budget budget = Budget::from_env();
  int failed = 0;
  for (const Suite& s : suites()) {
    if (s.criterion == 0 || (!only.empty() && !only.count(s.criterion))) continue;
    const Report r = run(s, budget);
    int ok = 0;
    for (const Check& c : r.checks) ok += c.pass;
    std::printf("criterion %2d %s  %-32s %8.2f s (limit %g s)  %d/%zu checks\n", s.criterion,
                r.pass() ? "PASS" : "FAIL", s.title.c_str(), r.wall_seconds, s.time_limit, ok, r.checks.size());
    for (const Check& c : r.checks)
      if (!c.pass || std::getenv("GHLAB_VERBOSE"))
        std::printf("    %s %s: value %.10g target %.10g tol %.3g err %.3g %s\n", c.pass ? "ok  " : "FAIL",
                    c.name.c_str(), c.value, c.target, c.tolerance, c.certified_error, c.note.c_str());
    if (!r.in_time()) std::printf("    FAIL time limit exceeded\n");
    std::fflush(stdout);
    failed += !r.pass();
  }
  return failed == 0 ? 0 : 1;
}
