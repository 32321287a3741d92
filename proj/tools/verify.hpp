#pragma once
// Named verification suites. One suite per acceptance criterion plus a few
// narrower ones; each returns a report of checks against fixed targets.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ghlab::verify {

struct Check {
  std::string name;
  double value = 0.0;
  double certified_error = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct Budget {
  double scale = 1.0;
  /// Scaled truncation or quadrature size, never below 1.
  int n(int base) const;
  /// GHLAB_BUDGET, or 1 when unset.
  static Budget from_env();
};

struct Report {
  std::string suite;
  std::string title;
  int criterion = 0;
  double time_limit = 0.0;  // seconds, 0 for none
  double wall_seconds = 0.0;
  std::vector<Check> checks;

  /// pass ⇔ |value − target| ≤ tolerance + certified_error
  Check& expect(std::string name, double value, double target, double tolerance, double certified_error = 0.0);
  /// value ≤ limit for a nonnegative residual
  Check& at_most(std::string name, double value, double limit);
  Check& holds(std::string name, bool ok, std::string note = {});

  bool checks_pass() const;
  bool in_time() const { return time_limit <= 0.0 || wall_seconds < time_limit; }
  bool pass() const { return checks_pass() && in_time(); }
};

struct Suite {
  std::string name;
  int criterion = 0;  // 0 for suites outside the acceptance list
  std::string title;
  double time_limit = 0.0;
  std::function<void(Report&, const Budget&)> body;
};

const std::vector<Suite>& suites();
const Suite* find_suite(std::string_view name);
/// Runs the body, timing it; an exception becomes a failed check.
Report run(const Suite& s, const Budget& b);

}  // namespace ghlab::verify
