// ghlab command line: field evaluation on grids, verification suites, the
// flow integrator and amoeba rasters.

#include "verify.hpp"

#include "ghlab/ghlab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>
#include <variant>

using namespace ghlab;
using json = nlohmann::ordered_json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PointFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON with every float at 17 significant digits.
void dump17(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::number_float:
      out += num(j.get<double>());
      break;
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const json& e : j) {
        if (!first) out += ',';
        first = false;
        dump17(out, e);
      }
      out += ']';
      break;
    }
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump17(out, it.value());
      }
      out += '}';
      break;
    }
    default:
      out += j.dump();
  }
}

std::string dump17(const json& j) {
  std::string s;
  dump17(s, j);
  return s;
}

using Cell = std::variant<double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_csv(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? num(*d) : "nan";
  if (const bool* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (const bool* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

// Header echoes the resolved config; footer carries run summaries.
void write_table(std::ostream& os, const std::string& format, const json& header, const Table& t,
                 const json& footer = json()) {
  if (format == "csv") {
    os << "# config: " << dump17(header) << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_csv(r[i]);
      os << '\n';
    }
    if (!footer.is_null()) os << "# summary: " << dump17(footer) << '\n';
  } else {
    os << dump17(json{{"config", header}}) << '\n';
    for (const auto& r : t.rows) {
      json o = json::object();
      for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = cell_json(r[i]);
      os << dump17(o) << '\n';
    }
    if (!footer.is_null()) os << dump17(json{{"summary", footer}}) << '\n';
  }
}

json read_config(const std::string& path) {
  if (path.empty()) throw ConfigError("--config is required");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

struct Output {
  std::string path;
  std::string format = "jsonl";
  std::ofstream file;
  std::ostream& stream() {
    if (path.empty()) return std::cout;
    if (!file.is_open()) {
      file.open(path);
      if (!file) throw ConfigError("cannot open output " + path);
    }
    return file;
  }
};

// ---------------------------------------------------------------------------
// grids

std::vector<std::string> coordinates(const std::string& geometry) {
  if (geometry == "c3" || geometry == "pos_vertex") return {"mu1", "mu2", "x", "y"};
  if (geometry == "neg_vertex") return {"x1", "y1", "x2", "y2", "mu"};
  if (geometry == "classic2d") return {"mu", "x", "y"};
  throw ConfigError("unknown geometry '" + geometry + "' (c3, pos_vertex, neg_vertex, classic2d)");
}

std::vector<double> axis(const json& v, const std::string& name) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array() || v.size() != 3 || !v[2].is_number_integer() || v[2].get<int>() < 1)
    throw ConfigError("grid entry '" + name + "' must be a number or [lo, hi, n] with n >= 1");
  const double lo = v[0].get<double>(), hi = v[1].get<double>();
  const int n = v[2].get<int>();
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

std::vector<std::vector<double>> grid_points(const json& cfg, const std::vector<std::string>& coords) {
  std::vector<std::vector<double>> pts;
  if (cfg.contains("ray")) {
    const json& r = cfg["ray"];
    const std::vector<double> ts = axis(r.value("t", json::array({0.0, 1.0, 11})), "t");
    for (double t : ts) {
      std::vector<double> p;
      for (const auto& c : coords) {
        const double o = r.contains("origin") ? r["origin"].value(c, 0.0) : 0.0;
        const double d = r.contains("direction") ? r["direction"].value(c, 0.0) : 0.0;
        p.push_back(o + t * d);
      }
      pts.push_back(p);
    }
    return pts;
  }
  const json g = cfg.value("grid", json::object());
  for (auto it = g.begin(); it != g.end(); ++it)
    if (std::find(coords.begin(), coords.end(), it.key()) == coords.end())
      throw ConfigError("grid coordinate '" + it.key() + "' does not belong to this geometry");
  std::vector<std::vector<double>> axes;
  for (const auto& c : coords) axes.push_back(g.contains(c) ? axis(g[c], c) : std::vector<double>{0.0});
  pts.push_back({});
  for (const auto& ax : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& p : pts)
      for (double v : ax) {
        auto q = p;
        q.push_back(v);
        next.push_back(q);
      }
    pts = std::move(next);
  }
  return pts;
}

SymCoupling sym_coupling(const json& c) {
  return SymCoupling::make(c.value("a11", 1.0), c.value("a12", 0.0), c.value("a22", 1.0));
}

HermCoupling herm_coupling(const json& c) {
  cplx a12 = 0.0;
  if (c.contains("a12")) {
    const json& v = c["a12"];
    if (v.is_number()) a12 = v.get<double>();
    else if (v.is_array() && v.size() == 2) a12 = cplx(v[0].get<double>(), v[1].get<double>());
    else throw ConfigError("a12 must be a number or [re, im]");
  }
  return HermCoupling::make(c.value("a11", 1.0), a12, c.value("a22", 1.0));
}

json defaults(const std::string& geometry) {
  json d = {{"geometry", geometry},
            {"coupling", {{"a11", 1.0}, {"a12", 0.0}, {"a22", 1.0}}},
            {"margin", 0.05},
            {"trunc", {{"N", 48}, {"tail_tolerance", 1e-8}}}};
  if (geometry == "c3") d["fields"] = {"alpha", "E1"};
  if (geometry == "pos_vertex") d["fields"] = {"alpha", "E1"};
  if (geometry == "neg_vertex") {
    d["fields"] = {"gamma_i", "v", "E1"};
    d["quad"] = {{"order", 6}, {"refine", 0.5}};
  }
  if (geometry == "classic2d") {
    d.erase("coupling");
    d["fields"] = {"V_ov"};
    d["A"] = 0.0;
  }
  return d;
}

// One evaluator per geometry: column names and a row function.
struct Evaluator {
  std::vector<std::string> columns;
  std::function<std::vector<Cell>(const std::vector<double>&)> row;
  std::function<double(const std::vector<double>&)> distance;
};

bool wants(const json& fields, const char* f) {
  for (const auto& v : fields)
    if (v == f) return true;
  return false;
}

void check_fields(const json& fields, std::initializer_list<const char*> known) {
  for (const auto& v : fields) {
    bool ok = false;
    for (const char* k : known) ok = ok || v == k;
    if (!ok) throw ConfigError("unknown field " + v.dump() + " for this geometry");
  }
}

Evaluator make_evaluator(const json& cfg, const verify::Budget& budget) {
  const std::string geo = cfg["geometry"];
  const json fields = cfg["fields"];
  const TruncSpec trunc{budget.n(cfg["trunc"].value("N", 48)), cfg["trunc"].value("tail_tolerance", 1e-8),
                        TailModel::inverse_square};
  Evaluator ev;
  if (geo == "c3") {
    check_fields(fields, {"alpha", "E1", "w", "det_v", "integrability"});
    const SymCoupling a = sym_coupling(cfg["coupling"]);
    ev.columns = {"mu1", "mu2", "x", "y", "norm_a", "dist"};
    if (wants(fields, "alpha")) ev.columns.insert(ev.columns.end(), {"alpha1", "alpha2", "alpha3"});
    for (const char* f : {"E1", "w", "det_v", "integrability"})
      if (wants(fields, f)) ev.columns.push_back(f);
    ev.distance = [a](const std::vector<double>& x) {
      return trivalent_graph_distance(C3Point{x[0], x[1], cplx(x[2], x[3])}, a);
    };
    ev.row = [a, fields](const std::vector<double>& x) {
      const C3Point p{x[0], x[1], cplx(x[2], x[3])};
      std::vector<Cell> r{x[0], x[1], x[2], x[3], norm_a(p, a), trivalent_graph_distance(p, a)};
      if (wants(fields, "alpha")) {
        const c3::AlphaTriple t = c3::alpha(p, a);
        r.insert(r.end(), {t[0], t[1], t[2]});
      }
      const bool need = wants(fields, "E1") || wants(fields, "w") || wants(fields, "det_v");
      const c3::C3Fields f = need ? c3::c3_fields(p, a) : c3::C3Fields{};
      if (wants(fields, "E1")) r.push_back(f.E1);
      if (wants(fields, "w")) r.push_back(f.w);
      if (wants(fields, "det_v")) r.push_back(f.det_v);
      if (wants(fields, "integrability")) r.push_back(c3::integrability_residual(p, a));
      return r;
    };
  } else if (geo == "pos_vertex") {
    check_fields(fields, {"alpha", "bar_alpha", "E1", "positive"});
    const SymCoupling a = sym_coupling(cfg["coupling"]);
    ev.columns = {"mu1", "mu2", "x", "y", "norm_a", "dist"};
    if (wants(fields, "alpha")) ev.columns.insert(ev.columns.end(), {"alpha1", "alpha2", "alpha3", "alpha_error"});
    if (wants(fields, "bar_alpha")) ev.columns.insert(ev.columns.end(), {"bar_alpha1", "bar_alpha2", "bar_alpha3"});
    if (wants(fields, "E1")) ev.columns.push_back("E1");
    if (wants(fields, "positive")) ev.columns.push_back("positive");
    ev.distance = [a](const std::vector<double>& x) {
      return trivalent_graph_distance(PosVertexPoint{x[0], x[1], cplx(x[2], x[3])}, a);
    };
    ev.row = [a, fields, trunc](const std::vector<double>& x) {
      const PosVertexPoint p{x[0], x[1], cplx(x[2], x[3])};
      std::vector<Cell> r{x[0], x[1], x[2], x[3], norm_a(C3Point{p.mu1, p.mu2, p.eta}, a),
                          trivalent_graph_distance(p, a)};
      if (wants(fields, "alpha")) {
        const pos::TildeAlphaTriple t = pos::tilde_alpha(p, a, trunc);
        r.insert(r.end(), {t[0], t[1], t[2], std::max({t.error[0], t.error[1], t.error[2]})});
      }
      if (wants(fields, "bar_alpha")) {
        const auto b = pos::bar_alpha(p.mu1, p.mu2, p.eta.imag(), a);
        r.insert(r.end(), {b[0], b[1], b[2]});
      }
      if (wants(fields, "E1") || wants(fields, "positive")) {
        const pos::PosFields f = pos::pos_fields(p, a, trunc);
        if (wants(fields, "E1")) r.push_back(f.E1);
        if (wants(fields, "positive")) r.push_back(f.positive);
      }
      return r;
    };
  } else if (geo == "neg_vertex") {
    check_fields(fields, {"gamma", "gamma_i", "gammabarbar", "v", "E1", "positive"});
    const HermCoupling a = herm_coupling(cfg["coupling"]);
    neg::SQuadOptions opt;
    opt.order = budget.n(cfg["quad"].value("order", 6));
    opt.refine = cfg["quad"].value("refine", 0.5);
    ev.columns = {"x1", "y1", "x2", "y2", "mu", "norm_a", "dist"};
    if (wants(fields, "gamma")) ev.columns.push_back("gamma");
    if (wants(fields, "gamma_i")) ev.columns.insert(ev.columns.end(), {"gamma1", "gamma2", "gamma3", "gamma4"});
    if (wants(fields, "gammabarbar")) ev.columns.insert(ev.columns.end(), {"gbb1", "gbb2", "gbb3"});
    for (const char* f : {"v", "E1", "positive"})
      if (wants(fields, f)) ev.columns.push_back(f);
    auto point = [](const std::vector<double>& x) { return NegVertexPoint{cplx(x[0], x[1]), cplx(x[2], x[3]), x[4]}; };
    ev.distance = [a, point](const std::vector<double>& x) { return distance_to_S(point(x), a); };
    ev.row = [a, fields, opt, point](const std::vector<double>& x) {
      const NegVertexPoint p = point(x);
      std::vector<Cell> r{x[0], x[1], x[2], x[3], x[4], norm_a(p, a), distance_to_S(p, a)};
      if (wants(fields, "gamma")) r.push_back(neg::gamma(p, a));
      const bool need = wants(fields, "gamma_i") || wants(fields, "v") || wants(fields, "E1") || wants(fields, "positive");
      const neg::GammaFields f = need ? neg::neg_fields(p, a, opt) : neg::GammaFields{};
      if (wants(fields, "gamma_i")) r.insert(r.end(), {f.g[0], f.g[1], f.g[2], f.g[3]});
      if (wants(fields, "gammabarbar")) {
        const auto g = neg::gammabarbar(x[1], x[3], x[4], a);
        r.insert(r.end(), {g[0], g[1], g[2]});
      }
      if (wants(fields, "v")) r.push_back(f.v);
      if (wants(fields, "E1")) r.push_back(f.E1);
      if (wants(fields, "positive")) r.push_back(f.positive);
      return r;
    };
  } else if (geo == "classic2d") {
    check_fields(fields, {"V_taubnut", "V_ov", "semiflat"});
    const double A = cfg.value("A", 0.0);
    const classic2d::OVParams ov{A, trunc};
    ev.columns = {"mu", "x", "y", "dist"};
    for (const char* f : {"V_taubnut", "V_ov", "semiflat"})
      if (wants(fields, f)) ev.columns.push_back(f);
    // distance to the nearest point (0, n) of the periodic source
    ev.distance = [](const std::vector<double>& x) {
      const double dx = x[1] - std::round(x[1]);
      return std::sqrt(x[0] * x[0] + dx * dx + x[2] * x[2]);
    };
    ev.row = [A, ov, fields, d = ev.distance](const std::vector<double>& x) {
      const cplx eta(x[1], x[2]);
      std::vector<Cell> r{x[0], x[1], x[2], d(x)};
      if (wants(fields, "V_taubnut")) r.push_back(classic2d::taubnut_potential(x[0], eta, A));
      if (wants(fields, "V_ov")) r.push_back(classic2d::ov_potential(x[0], eta, ov).value);
      if (wants(fields, "semiflat"))
        r.push_back(x[0] * x[0] + x[2] * x[2] >= 1.0 ? classic2d::ov_semiflat_deviation(x[0], eta, ov).value
                                                      : std::numeric_limits<double>::quiet_NaN());
      return r;
    };
  } else {
    coordinates(geo);
  }
  return ev;
}

std::string point_text(const std::vector<std::string>& coords, const std::vector<double>& x) {
  std::string s = "{";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + coords[i] + " = " + num(x[i]);
  return s + "}";
}

// Rows in grid order whatever the completion order of the workers.
Table evaluate(const Evaluator& ev, const std::vector<std::vector<double>>& pts, const std::vector<std::string>& coords,
               int threads) {
  Table t;
  t.columns = ev.columns;
  t.rows.resize(pts.size());
  std::vector<std::string> errors(pts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      try {
        t.rows[i] = ev.row(pts[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!errors[i].empty()) throw PointFailure("numerical failure at " + point_text(coords, pts[i]) + ": " + errors[i]);
  return t;
}

// ---------------------------------------------------------------------------
// subcommands

struct Common {
  std::string config, out, format = "jsonl", suite;
  int threads = 1;
};

int cmd_eval(const Common& o) {
  const json user = read_config(o.config);
  if (!user.contains("geometry") || !user["geometry"].is_string()) throw ConfigError("config needs a geometry");
  const std::string geo = user["geometry"];
  if (geo == "flow") throw ConfigError("geometry 'flow' is driven by the flow subcommand");
  const std::vector<std::string> coords = coordinates(geo);
  json cfg = defaults(geo);
  cfg.merge_patch(user);
  const verify::Budget budget = verify::Budget::from_env();
  cfg["budget"] = budget.scale;
  Evaluator ev;
  std::vector<std::vector<double>> pts;
  try {
    ev = make_evaluator(cfg, budget);
    pts = grid_points(cfg, coords);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const double margin = cfg.value("margin", 0.05);
  for (const auto& p : pts)
    if (ev.distance(p) < margin)
      throw ConfigError("grid point " + point_text(coords, p) + " lies within margin " + num(margin) +
                        " of the singular set");
  Output out{o.out, o.format};
  const Table t = evaluate(ev, pts, coords, std::max(1, o.threads));
  write_table(out.stream(), o.format, cfg, t);
  return 0;
}

int cmd_flow(const Common& o) {
  json cfg = {{"p1", 1.0}, {"p2", 1.0}, {"p3", 1.0}, {"im_a21", 0.0}, {"lambda_end", 1.0}, {"step", 1e-3}};
  cfg.merge_patch(read_config(o.config));
  flow::FlowState s0;
  double lambda_end = 0.0, step = 0.0;
  try {
    s0 = {cfg["p1"].get<double>(), cfg["p2"].get<double>(), cfg["p3"].get<double>(), cfg["im_a21"].get<double>(), 0.0};
    lambda_end = cfg["lambda_end"].get<double>();
    step = cfg["step"].get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(s0.p1 > 0 && s0.p2 > 0 && s0.p3 > 0)) throw ConfigError("p1, p2, p3 must be positive");
  if (!(step > 0)) throw ConfigError("step must be positive");
  const flow::Trajectory tr = flow::integrate(s0, lambda_end, step);
  Table t;
  t.columns = {"lambda", "p1", "p2", "p3", "im_a21", "C1", "C2"};
  for (const auto& s : tr.states) {
    const auto c = flow::conserved(s);
    t.rows.push_back({s.lambda, s.p1, s.p2, s.p3, s.im_a21, c[0], c[1]});
  }
  json summary = {{"breakdown_lambda", tr.breakdown_lambda ? json(*tr.breakdown_lambda) : json(nullptr)},
                  {"max_drift_rate", tr.max_drift_rate},
                  {"states", tr.states.size()}};
  Output out{o.out, o.format};
  write_table(out.stream(), o.format, cfg, t, summary);
  return 0;
}

int cmd_amoeba(const Common& o) {
  json cfg = {{"y1", {-0.5, 0.5, 101}}, {"y2", {-0.5, 0.5, 101}}};
  if (!o.config.empty()) cfg.merge_patch(read_config(o.config));
  const std::vector<double> y1 = axis(cfg["y1"], "y1"), y2 = axis(cfg["y2"], "y2");
  Table t;
  t.columns = {"y1", "y2", "inside", "slack"};
  for (double a : y1)
    for (double b : y2) {
      const AmoebaTest m = amoeba_contains(a, b);
      t.rows.push_back({a, b, m.inside, m.slack});
    }
  Output out{o.out, o.format};
  write_table(out.stream(), o.format, cfg, t);
  return 0;
}

json report_json(const verify::Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"certified_error", c.certified_error},
                      {"target", c.target},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass},
                      {"note", c.note}});
  return {{"suite", r.suite},       {"title", r.title},           {"criterion", r.criterion},
          {"pass", r.pass()},       {"wall_seconds", r.wall_seconds}, {"time_limit", r.time_limit},
          {"checks", checks}};
}

void summarize(std::ostream& os, const verify::Report& r) {
  int ok = 0;
  for (const auto& c : r.checks) ok += c.pass;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %s  %d/%zu checks  %.2f s", r.suite.c_str(), r.pass() ? "PASS" : "FAIL", ok,
                r.checks.size(), r.wall_seconds);
  os << line << '\n';
  for (const auto& c : r.checks)
    if (!c.pass) os << "  failed: " << c.name << "  value " << num(c.value) << "  target " << num(c.target) << '\n';
}

int cmd_verify(const Common& o) {
  std::vector<const verify::Suite*> chosen;
  if (o.suite == "all" || o.suite.empty()) {
    for (const auto& s : verify::suites())
      if (s.criterion > 0) chosen.push_back(&s);
  } else if (const verify::Suite* s = verify::find_suite(o.suite)) {
    chosen.push_back(s);
  } else {
    std::string names;
    for (const auto& s : verify::suites()) names += " " + s.name;
    throw ConfigError("unknown suite '" + o.suite + "'; available: all" + names);
  }
  const verify::Budget budget = verify::Budget::from_env();
  json reports = json::array();
  bool pass = true;
  std::ostream& human = o.out.empty() ? std::cerr : std::cout;
  for (const verify::Suite* s : chosen) {
    const verify::Report r = verify::run(*s, budget);
    summarize(human, r);
    reports.push_back(report_json(r));
    pass = pass && r.pass();
  }
  const json doc = {{"suite", o.suite.empty() ? "all" : o.suite}, {"budget", budget.scale}, {"pass", pass},
                    {"reports", reports}};
  Output out{o.out, o.format};
  out.stream() << dump17(doc) << '\n';
  return pass ? 0 : 1;
}

// A saved verify report as a flat table of checks.
int cmd_report(const Common& o) {
  const json doc = read_config(o.config);
  if (!doc.contains("reports")) throw ConfigError("not a verify report: missing 'reports'");
  Table t;
  t.columns = {"suite", "check", "value", "certified_error", "target", "tolerance", "pass"};
  for (const auto& r : doc["reports"])
    for (const auto& c : r["checks"]) {
      auto d = [&](const char* k) { return c[k].is_null() ? std::numeric_limits<double>::quiet_NaN() : c[k].get<double>(); };
      t.rows.push_back({r["suite"].get<std::string>(), c["name"].get<std::string>(), d("value"),
                        d("certified_error"), d("target"), d("tolerance"), c["pass"].get<bool>()});
    }
  Output out{o.out, o.format};
  write_table(out.stream(), o.format, json{{"source", o.config}}, t, json{{"pass", doc.value("pass", false)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ghlab: generalized Gibbons-Hawking ansatz numerics and verification"};
  app.require_subcommand(1);
  Common o;
  std::string positional_suite;
  auto add_common = [&](CLI::App* c, bool needs_config) {
    auto* cfg = c->add_option("--config", o.config, "JSON config");
    if (needs_config) cfg->required();
    c->add_option("--out", o.out, "output path (stdout when omitted)");
    c->add_option("--format", o.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    c->add_option("--threads", o.threads, "worker threads for grid evaluation")->check(CLI::PositiveNumber);
  };
  CLI::App* eval = app.add_subcommand("eval", "evaluate fields on a grid or ray");
  CLI::App* verify = app.add_subcommand("verify", "run a named verification suite");
  CLI::App* flow = app.add_subcommand("flow", "integrate the renormalization flow");
  CLI::App* amoeba = app.add_subcommand("amoeba", "amoeba membership raster");
  CLI::App* report = app.add_subcommand("report", "tabulate a saved verify report");
  add_common(eval, true);
  add_common(verify, false);
  add_common(flow, true);
  add_common(amoeba, false);
  add_common(report, true);
  verify->add_option("--suite", o.suite, "suite name, or all");
  verify->add_option("name", positional_suite, "suite name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (o.suite.empty()) o.suite = positional_suite;

  try {
    if (*eval) return cmd_eval(o);
    if (*verify) return cmd_verify(o);
    if (*flow) return cmd_flow(o);
    if (*report) return cmd_report(o);
    if (*amoeba) return cmd_amoeba(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const PointFailure& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
