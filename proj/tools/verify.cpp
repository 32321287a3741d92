#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>

namespace ghlab::verify {

int Budget::n(int base) const { return std::max(1, static_cast<int>(std::lround(base * scale))); }

Budget Budget::from_env() {
  Budget b;
  if (const char* s = std::getenv("GHLAB_BUDGET")) {
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end != s && std::isfinite(v) && v > 0.0) b.scale = v;
  }
  return b;
}

Check& Report::expect(std::string name, double value, double target, double tolerance, double certified_error) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.target = target;
  c.tolerance = tolerance;
  c.certified_error = certified_error;
  c.pass = std::abs(value - target) <= tolerance + certified_error;
  checks.push_back(std::move(c));
  return checks.back();
}

Check& Report::at_most(std::string name, double value, double limit) {
  return expect(std::move(name), value, 0.0, limit);
}

Check& Report::holds(std::string name, bool ok, std::string note) {
  Check& c = expect(std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0);
  c.note = std::move(note);
  return c;
}

bool Report::checks_pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Suite* find_suite(std::string_view name) {
  for (const Suite& s : suites())
    if (s.name == name) return &s;
  return nullptr;
}

Report run(const Suite& s, const Budget& b) {
  Report r;
  r.suite = s.name;
  r.title = s.title;
  r.criterion = s.criterion;
  r.time_limit = s.time_limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    s.body(r, b);
  } catch (const std::exception& e) {
    r.holds("completed without exception", false, e.what());
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace ghlab::verify
