#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "widom/diagnostics.hpp"
#include "widom/equilibrium.hpp"
#include "widom/errors.hpp"
#include "widom/harness.hpp"
#include "widom/levin_strip.hpp"
#include "widom/minimax.hpp"
#include "widom/suites.hpp"
#include "widom/version.hpp"

namespace widom::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxPowerCoefficientDegree = 40;

json point(Complex z) { return json::array({z.real(), z.imag()}); }

json intervals_json(const RealIntervalUnion& k) {
  json out = json::array();
  for (const auto& iv : k.intervals()) out.push_back(json::array({iv.lo, iv.hi}));
  return out;
}

/// Components for the boundary-integral pipeline: interval unions become segments.
std::vector<Shape> planar_components(const SetSpec& set) {
  std::vector<Shape> out;
  for (const auto& s : set.shapes) {
    if (const auto* k = std::get_if<RealIntervalUnion>(&s)) {
      for (const auto& iv : k->intervals()) out.push_back(Segment{iv.lo, iv.hi});
    } else {
      out.push_back(s);
    }
  }
  return out;
}

const SetSpec& require_set(const ExperimentConfig& cfg) {
  if (!cfg.set) throw ValidationError("task '" + to_string(cfg.task) + "' needs a set");
  return *cfg.set;
}

const RealIntervalUnion& require_real(const ExperimentConfig& cfg) {
  const auto& set = require_set(cfg);
  if (!set.real) throw ValidationError("task '" + to_string(cfg.task) + "' needs a set on the real line");
  return *set.real;
}

json capacity_task(const ExperimentConfig& cfg) {
  const auto& set = require_set(cfg);
  json r;
  if (set.real) {
    const auto eq = solve_real_equilibrium(*set.real);
    r["method"] = "real-equilibrium";
    r["capacity"] = eq.capacity();
    r["log_capacity"] = eq.log_capacity();
    r["robin"] = eq.robin();
    r["mass"] = eq.mass();
    r["frostman_deviation"] = eq.frostman_deviation();
    r["intervals"] = intervals_json(*set.real);
    r["gap_critical_points"] = eq.q_roots();
  } else {
    const auto eq = solve_symm(planar_components(set));
    r["method"] = "boundary-integral";
    r["capacity"] = eq.capacity();
    r["log_capacity"] = eq.log_capacity();
    r["robin"] = eq.robin();
    r["mass"] = eq.mass();
    r["frostman_deviation"] = eq.frostman_deviation();
    r["nodes"] = eq.nodes().size();
  }
  return r;
}

json green_task(const ExperimentConfig& cfg) {
  const auto& set = require_set(cfg);
  json probes = json::array();
  if (set.real) {
    const auto eq = solve_real_equilibrium(*set.real);
    for (Complex z : cfg.probes) probes.push_back({{"z", point(z)}, {"g", green_eval(eq, z)}});
  } else {
    const auto eq = solve_symm(planar_components(set));
    for (Complex z : cfg.probes) probes.push_back({{"z", point(z)}, {"g", green_eval(eq, z)}});
  }
  return {{"probes", probes}};
}

json levin_task(const ExperimentConfig& cfg) {
  const auto& k = require_real(cfg);
  const auto eq = solve_real_equilibrium(k);
  const auto strip = build_levin(eq);
  json slits = json::array();
  for (const auto& s : strip.slits) {
    slits.push_back({{"gap", s.gap}, {"u", s.u}, {"v", s.v}, {"peak", s.peak}});
  }
  json r{{"capacity", strip.capacity}, {"V", strip.V}, {"max_height", strip.max_height()}, {"slits", slits}};
  if (!cfg.truncation_levels.empty()) {
    json trunc = json::array();
    for (double s : cfg.truncation_levels) {
      const auto ks = sublevel_truncate(eq, strip, s);
      const auto eqs = solve_real_equilibrium(ks);
      trunc.push_back({{"level", s},
                       {"intervals", intervals_json(ks)},
                       {"capacity", eqs.capacity()},
                       {"capacity_ratio", eqs.capacity() / eq.capacity()},
                       {"V", build_levin(eqs).V}});
    }
    r["truncations"] = trunc;
  }
  if (!cfg.heights.empty()) {
    json cc = json::array();
    for (const auto& c : crosscut_ratios(strip, cfg.heights)) {
      cc.push_back({{"height", c.height}, {"max_ratio", c.max_ratio}, {"min_width", c.min_width}});
    }
    r["crosscuts"] = cc;
  }
  return r;
}

json cheb_task(const ExperimentConfig& cfg) {
  const auto& set = require_set(cfg);
  const std::size_t n = cfg.degree;
  double log_cap = 0.0;
  std::optional<MonicChebyshev> t;
  if (set.real) {
    log_cap = solve_real_equilibrium(*set.real).log_capacity();
    t = solve_real_monic(*set.real, n, cfg.solver);
  } else {
    log_cap = solve_symm(set.shapes).log_capacity();
    t = solve_complex_monic(set.shapes, n, cfg.solver, log_cap);
  }
  json r{{"n", n},
         {"log_capacity", log_cap},
         {"norm_lo", t->norm_lo()},
         {"norm_hi", t->norm_hi()},
         {"log_norm_lo", t->log_norm_lo()},
         {"log_norm_hi", t->log_norm_hi()},
         {"bracket", t->bracket()},
         {"t_lo", std::exp(t->log_norm_lo() - double(n) * log_cap)},
         {"t_hi", std::exp(t->log_norm_hi() - double(n) * log_cap)},
         {"iterations", t->iterations()},
         {"center", point(t->center())},
         {"scale", t->scale()}};
  json ext = json::array();
  for (Complex z : t->extremes()) ext.push_back(set.real ? json(z.real()) : point(z));
  r["extremes"] = ext;
  if (set.real) r["chebyshev_coefficients"] = t->chebyshev_coefficients();
  if (n <= kMaxPowerCoefficientDegree) {
    json pc = json::array();
    for (Complex c : t->power_coefficients()) pc.push_back(set.real ? json(c.real()) : point(c));
    r["power_coefficients"] = pc;
  }
  return r;
}

json fit_json(const GrowthFit& f) {
  return {{"model", to_string(f.model)},
          {"constant", {{"a", f.constant_a}, {"residual", f.residual_constant}}},
          {"logarithmic", {{"a", f.log_a}, {"b", f.log_b}, {"residual", f.residual_logarithmic}}},
          {"power", {{"c", f.power_c}, {"d", f.power_d}, {"residual", f.residual_power}}},
          {"mean_t", f.mean_t},
          {"n_min", f.n_min},
          {"rows_used", f.rows_used}};
}

TaskOutput series_task(const ExperimentConfig& cfg) {
  const auto& set = require_set(cfg);
  const SeriesResult s = set.real ? run_series(*set.real, cfg.degrees, cfg.solver, cfg.set_id)
                                  : run_series(set.shapes, cfg.degrees, cfg.solver, cfg.set_id);
  TaskOutput out;
  std::ostringstream csv;
  write_series_csv(csv, s);
  out.csv = csv.str();

  json rows = json::array();
  for (const auto& row : s.rows) {
    rows.push_back({{"n", row.n},
                    {"log_norm_lo", row.log_norm_lo},
                    {"log_norm_hi", row.log_norm_hi},
                    {"t_lo", row.t_lo},
                    {"t_hi", row.t_hi},
                    {"status", row.status}});
  }
  json& r = out.result;
  r["log_capacity"] = s.log_capacity;
  r["log_capacity_uncertainty"] = s.log_capacity_uncertainty;
  r["failures"] = s.failures();
  r["rows"] = rows;
  try {
    r["fit"] = fit_json(fit_growth(s, cfg.fit_window));
  } catch (const ValidationError& e) {
    r["fit"] = {{"skipped", e.what()}};
  }
  if (set.real && set.real->size() > 1 && s.failures() < s.rows.size()) {
    const auto rep = verify_log_bound(s, build_levin(solve_real_equilibrium(*set.real)));
    r["log_bound"] = {{"V", rep.V}, {"C", rep.C}, {"stable", rep.stable}, {"degrees", rep.degrees},
                      {"ratios", rep.ratios}};
  }
  return out;
}

TaskOutput verify_task(const ExperimentConfig& cfg, std::ostream& log, bool quiet) {
  TaskOutput out;
  json checks = json::array();
  bool all = true;
  std::vector<std::string> names;
  for (const auto& n : cfg.suites) {
    if (n == "all") {
      names.insert(names.end(), suite_names().begin(), suite_names().end());
    } else {
      names.push_back(n);
    }
  }
  for (const auto& n : names) {
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end()) {
      throw ValidationError("unknown verification suite '" + n + "'");
    }
  }
  for (const auto& name : names) {
    const CheckResult c = run_suite(name);
    if (!quiet) log << format_check(c) << std::endl;
    all = all && c.pass;
    checks.push_back({{"id", c.id}, {"suite", c.suite}, {"title", c.title}, {"pass", c.pass}, {"detail", c.detail}});
  }
  out.result = {{"checks", checks}, {"all_pass", all}};
  out.verdict_failed = !all;
  return out;
}

json holder_json(const HolderFit& f) {
  return {{"alpha", f.alpha},         {"c1", f.c1},       {"fit_residual", f.fit_residual},
          {"samples", f.samples},     {"d_min", f.d_min}, {"d_max", f.d_max},
          {"holdout_violation", f.holdout_violation}};
}

json diagnostics_task(const ExperimentConfig& cfg) {
  const auto& set = require_set(cfg);
  json r;
  if (set.real) {
    const auto eq = solve_real_equilibrium(*set.real);
    r["holder"] = holder_json(holder_fit(eq, cfg.holder_levels));
    const auto p = perfectness_check(*set.real, cfg.perfectness_levels);
    r["perfectness"] = {{"worst_ratio", p.worst_ratio},
                        {"worst_center", p.worst_center},
                        {"worst_radius", p.worst_radius},
                        {"samples", p.samples}};
  } else if (set.shapes.size() == 1 && std::holds_alternative<Disk>(set.shapes[0])) {
    const auto& disk = std::get<Disk>(set.shapes[0]);
    r["holder"] = holder_json(holder_fit(solve_symm(set.shapes), disk, cfg.holder_levels));
  }
  std::optional<std::variant<Segment, Disk>> simple;
  if (set.shapes.size() == 1) {
    if (const auto* d = std::get_if<Disk>(&set.shapes[0])) simple = *d;
    if (const auto* s = std::get_if<Segment>(&set.shapes[0])) simple = *s;
    if (const auto* k = std::get_if<RealIntervalUnion>(&set.shapes[0]); k && k->size() == 1) {
      simple = Segment{(*k)[0].lo, (*k)[0].hi};
    }
  }
  if (simple) {
    json lc = json::array();
    for (std::size_t n : cfg.level_curve_degrees) {
      const double j = level_curve_integral(*simple, n, cfg.level_curve_k);
      lc.push_back({{"n", n}, {"k", cfg.level_curve_k}, {"J", j}, {"J_over_log_n", j / std::log(double(n))}});
    }
    r["level_curve"] = lc;
  }
  if (r.is_null()) throw ValidationError("no diagnostics apply to this set (need a real set, a disk or a segment)");
  return r;
}

}  // namespace

TaskOutput run_task(const ExperimentConfig& cfg, std::ostream& log, bool quiet) {
  switch (cfg.task) {
    case Task::capacity: return {capacity_task(cfg), "", false};
    case Task::green: return {green_task(cfg), "", false};
    case Task::levin: return {levin_task(cfg), "", false};
    case Task::cheb: return {cheb_task(cfg), "", false};
    case Task::series: return series_task(cfg);
    case Task::verify_theorems: return verify_task(cfg, log, quiet);
    case Task::diagnostics: return {diagnostics_task(cfg), "", false};
  }
  throw ValidationError("unknown task");
}

RunResult run(const ExperimentConfig& cfg, std::ostream& log, bool quiet) {
  RunResult out;
  json task{{"task", to_string(cfg.task)}};
  TaskOutput t;
  try {
    t = run_task(cfg, log, quiet);
    task["status"] = t.verdict_failed ? "fail" : "ok";
    task["result"] = t.result;
    out.exit_code = t.verdict_failed ? kExitVerdict : kExitOk;
  } catch (const ValidationError& e) {
    task["status"] = "invalid";
    task["error"] = e.what();
    out.exit_code = kExitInvalid;
  } catch (const SolverError& e) {
    task["status"] = "solver-error";
    task["error"] = e.what();
    if (e.index()) task["index"] = *e.index();
    out.exit_code = kExitSolver;
  }
  if (out.exit_code == kExitInvalid || out.exit_code == kExitSolver) {
    log << "error: " << task["error"].get<std::string>() << std::endl;
  }

  out.envelope = {{"toolkit", kToolkitName},
                  {"version", kVersion},
                  {"config_hash", config_hash(cfg.effective)},
                  {"set_id", cfg.set_id},
                  {"config", cfg.effective},
                  {"tasks", json::array({task})}};

  std::filesystem::create_directories(cfg.out_dir);
  const auto json_path = cfg.out_dir / (cfg.prefix + ".json");
  {
    std::ofstream f(json_path, std::ios::binary);
    f << out.envelope.dump(2) << '\n';
    if (!f) throw std::runtime_error("cannot write " + json_path.string());
  }
  out.files.push_back(json_path);
  if (!t.csv.empty()) {
    const auto csv_path = cfg.out_dir / (cfg.prefix + ".csv");
    std::ofstream f(csv_path, std::ios::binary);
    f << t.csv;
    if (!f) throw std::runtime_error("cannot write " + csv_path.string());
    out.files.push_back(csv_path);
  }
  if (!quiet) {
    for (const auto& p : out.files) log << "wrote " << p.string() << std::endl;
  }
  return out;
}

}  // namespace widom::cli
