#include "config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace widom::cli {

using nlohmann::json;

namespace {

std::string child(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string child(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where.empty() ? "/" : where, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ConfigError(child(where, k), "unknown field");
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(child(where, key), "missing required field");
  return j.at(key);
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where, "expected a finite number");
  return v;
}

double as_positive(const json& j, const std::string& where) {
  const double v = as_number(j, where);
  if (!(v > 0.0)) throw ConfigError(where, "expected a positive number");
  return v;
}

std::size_t as_count(const json& j, const std::string& where, std::size_t min = 1) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(where, "expected a non-negative integer");
  const auto v = j.get<std::size_t>();
  if (v < min) throw ConfigError(where, "expected an integer >= " + std::to_string(min));
  return v;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where, "expected a string");
  return j.get<std::string>();
}

Complex as_point(const json& j, const std::string& where) {
  if (j.is_number()) return {as_number(j, where), 0.0};
  if (!j.is_array() || j.size() != 2) throw ConfigError(where, "expected a number or an [x, y] pair");
  return {as_number(j[0], child(where, 0)), as_number(j[1], child(where, 1))};
}

std::vector<Complex> as_points(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where, "expected a non-empty array of points");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_point(j[i], child(where, i)));
  return out;
}

std::vector<double> as_numbers(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], child(where, i)));
  return out;
}

std::vector<std::size_t> as_counts(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where, "expected a non-empty array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_count(j[i], child(where, i)));
  return out;
}

// Runs a constructor that validates its input and re-labels failures with the field path.
template <class F>
auto at_field(const std::string& where, F&& make) {
  try {
    return make();
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(where, e.what());
  }
}

void parse_components(const json& j, const std::string& where, const std::filesystem::path& base,
                      std::vector<Shape>& out) {
  const std::string type = as_string(require(j, "type", where), child(where, "type"));
  if (type == "interval-union") {
    allow_keys(j, where, {"type", "intervals"});
    const json& iv = require(j, "intervals", where);
    const std::string w = child(where, "intervals");
    if (!iv.is_array() || iv.empty()) throw ConfigError(w, "expected a non-empty array of [a, b] pairs");
    std::vector<Interval> list;
    for (std::size_t i = 0; i < iv.size(); ++i) {
      const std::string wi = child(w, i);
      if (!iv[i].is_array() || iv[i].size() != 2) throw ConfigError(wi, "expected an [a, b] pair");
      list.push_back({as_number(iv[i][0], child(wi, 0)), as_number(iv[i][1], child(wi, 1))});
    }
    out.push_back(at_field(w, [&] { return RealIntervalUnion(std::move(list)); }));
  } else if (type == "cantor") {
    allow_keys(j, where, {"type", "depth", "ratio", "base"});
    CantorSpec spec;
    spec.depth = int(as_count(require(j, "depth", where), child(where, "depth"), 0));
    if (j.contains("ratio")) spec.ratio = as_number(j["ratio"], child(where, "ratio"));
    if (j.contains("base")) {
      const std::string w = child(where, "base");
      if (!j["base"].is_array() || j["base"].size() != 2) throw ConfigError(w, "expected an [a, b] pair");
      spec.base = {as_number(j["base"][0], child(w, 0)), as_number(j["base"][1], child(w, 1))};
    }
    out.push_back(at_field(where, [&] { return build_cantor(spec); }));
  } else if (type == "disk") {
    allow_keys(j, where, {"type", "center", "radius"});
    Disk d{0.0, as_positive(require(j, "radius", where), child(where, "radius"))};
    if (j.contains("center")) d.center = as_point(j["center"], child(where, "center"));
    out.push_back(d);
  } else if (type == "polygon") {
    allow_keys(j, where, {"type", "vertices"});
    auto v = as_points(require(j, "vertices", where), child(where, "vertices"));
    if (v.size() < 3) throw ConfigError(child(where, "vertices"), "a polygon needs at least 3 vertices");
    out.push_back(Polygon{std::move(v)});
  } else if (type == "segment") {
    allow_keys(j, where, {"type", "a", "b"});
    const Complex a = as_point(require(j, "a", where), child(where, "a"));
    const Complex b = as_point(require(j, "b", where), child(where, "b"));
    if (a == b) throw ConfigError(where, "segment endpoints coincide");
    out.push_back(Segment{a, b});
  } else if (type == "curve-file") {
    allow_keys(j, where, {"type", "path", "closed", "grading"});
    std::filesystem::path p = as_string(require(j, "path", where), child(where, "path"));
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::exists(p)) throw ConfigError(child(where, "path"), "file not found: " + p.string());
    bool closed = true;
    if (j.contains("closed")) {
      if (!j["closed"].is_boolean()) throw ConfigError(child(where, "closed"), "expected true or false");
      closed = j["closed"].get<bool>();
    }
    const double grading = j.contains("grading") ? as_number(j["grading"], child(where, "grading")) : 1.0;
    auto pts = at_field(child(where, "path"), [&] { return read_curve_file(p); });
    out.push_back(at_field(where, [&] { return DiscretizedCurve(std::move(pts), closed, grading); }));
  } else if (type == "mixed") {
    allow_keys(j, where, {"type", "components"});
    const json& comps = require(j, "components", where);
    const std::string w = child(where, "components");
    if (!comps.is_array() || comps.empty()) throw ConfigError(w, "expected a non-empty array of set descriptors");
    for (std::size_t i = 0; i < comps.size(); ++i) parse_components(comps[i], child(w, i), base, out);
  } else {
    throw ConfigError(child(where, "type"), "unknown set type '" + type +
                                                "' (expected interval-union, cantor, disk, polygon, segment, "
                                                "curve-file or mixed)");
  }
}

void parse_solver(const json& j, const std::string& where, SolverOptions& o) {
  allow_keys(j, where,
             {"grid_per_interval", "refinement_rounds", "max_exchange_iterations", "real_bracket_tol",
              "complex_bracket_tol", "irls_exponents", "irls_exponent_cap", "max_irls_iterations", "boundary_samples",
              "max_degree"});
  if (j.contains("grid_per_interval")) o.grid_per_interval = as_count(j["grid_per_interval"], child(where, "grid_per_interval"), 8);
  if (j.contains("refinement_rounds")) o.refinement_rounds = int(as_count(j["refinement_rounds"], child(where, "refinement_rounds"), 0));
  if (j.contains("max_exchange_iterations")) o.max_exchange_iterations = int(as_count(j["max_exchange_iterations"], child(where, "max_exchange_iterations")));
  if (j.contains("real_bracket_tol")) o.real_bracket_tol = as_positive(j["real_bracket_tol"], child(where, "real_bracket_tol"));
  if (j.contains("complex_bracket_tol")) o.complex_bracket_tol = as_positive(j["complex_bracket_tol"], child(where, "complex_bracket_tol"));
  if (j.contains("irls_exponents")) {
    o.irls_exponents = as_numbers(j["irls_exponents"], child(where, "irls_exponents"));
    for (std::size_t i = 0; i < o.irls_exponents.size(); ++i) {
      if (!(o.irls_exponents[i] > 0.0)) throw ConfigError(child(child(where, "irls_exponents"), i), "expected a positive number");
    }
  }
  if (j.contains("irls_exponent_cap")) o.irls_exponent_cap = as_positive(j["irls_exponent_cap"], child(where, "irls_exponent_cap"));
  if (j.contains("max_irls_iterations")) o.max_irls_iterations = int(as_count(j["max_irls_iterations"], child(where, "max_irls_iterations")));
  if (j.contains("boundary_samples")) o.boundary_samples = as_count(j["boundary_samples"], child(where, "boundary_samples"), 16);
  if (j.contains("max_degree")) o.max_degree = std::min<std::size_t>(as_count(j["max_degree"], child(where, "max_degree")), 200);
}

}  // namespace

std::string to_string(Task t) {
  switch (t) {
    case Task::capacity: return "capacity";
    case Task::green: return "green";
    case Task::levin: return "levin";
    case Task::cheb: return "cheb";
    case Task::series: return "series";
    case Task::verify_theorems: return "verify-theorems";
    case Task::diagnostics: return "diagnostics";
  }
  return "unknown";
}

Task parse_task(const std::string& s, const std::string& where) {
  for (Task t : {Task::capacity, Task::green, Task::levin, Task::cheb, Task::series, Task::verify_theorems,
                 Task::diagnostics}) {
    if (to_string(t) == s) return t;
  }
  throw ConfigError(where, "unknown task '" + s +
                               "' (expected capacity, green, levin, cheb, series, verify-theorems or diagnostics)");
}

SetSpec parse_set(const json& j, const std::string& where, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError(where, "expected a set descriptor object");
  SetSpec spec;
  spec.kind = as_string(require(j, "type", where), child(where, "type"));
  parse_components(j, where, base_dir, spec.shapes);
  const ShapeSet shapes = at_field(where, [&] { return ShapeSet(spec.shapes); });
  if (shapes.is_real()) spec.real = at_field(where, [&] { return shapes.to_real(); });
  return spec;
}

std::vector<Complex> read_curve_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::vector<Complex> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, y;
    if (!(ls >> x)) continue;
    std::string rest;
    if (!(ls >> y) || (ls >> rest)) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    pts.push_back({x, y});
  }
  return pts;
}

std::string config_hash(const json& effective) {
  const std::string text = effective.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir,
                              const std::optional<std::string>& task_override) {
  allow_keys(doc, "", {"set_id", "set", "task", "params", "output"});
  ExperimentConfig cfg;
  cfg.effective = doc;
  cfg.effective.erase("output");
  if (task_override) cfg.effective["task"] = *task_override;

  if (!cfg.effective.contains("task")) throw ConfigError("/task", "missing required field");
  cfg.task = parse_task(as_string(cfg.effective["task"], "/task"), "/task");
  if (doc.contains("set_id")) cfg.set_id = as_string(doc["set_id"], "/set_id");
  if (doc.contains("set")) cfg.set = parse_set(doc["set"], "/set", base_dir);
  if (!cfg.set && cfg.task != Task::verify_theorems) throw ConfigError("/set", "missing required field");
  if (cfg.set_id.empty()) cfg.set_id = cfg.set ? cfg.set->kind : "suites";

  const json params = doc.contains("params") ? doc["params"] : json::object();
  allow_keys(params, "/params",
             {"degrees", "n_min", "n_max", "n", "probes", "suites", "truncation_levels", "heights", "fit_window",
              "holder_levels", "perfectness_levels", "level_curve", "solver"});
  if (params.contains("degrees")) {
    cfg.degrees = as_counts(params["degrees"], "/params/degrees");
    for (std::size_t i = 1; i < cfg.degrees.size(); ++i) {
      if (cfg.degrees[i] <= cfg.degrees[i - 1]) throw ConfigError("/params/degrees", "degrees must be strictly increasing");
    }
  } else if (params.contains("n_min") || params.contains("n_max")) {
    const std::size_t lo = as_count(require(params, "n_min", "/params"), "/params/n_min");
    const std::size_t hi = as_count(require(params, "n_max", "/params"), "/params/n_max");
    if (hi < lo) throw ConfigError("/params/n_max", "n_max must be >= n_min");
    for (std::size_t n = lo; n <= hi; ++n) cfg.degrees.push_back(n);
  }
  if (params.contains("n")) cfg.degree = as_count(params["n"], "/params/n");
  if (params.contains("probes")) cfg.probes = as_points(params["probes"], "/params/probes");
  if (params.contains("suites")) {
    const json& s = params["suites"];
    cfg.suites.clear();
    if (s.is_string()) {
      cfg.suites.push_back(s.get<std::string>());
    } else if (s.is_array() && !s.empty()) {
      for (std::size_t i = 0; i < s.size(); ++i) cfg.suites.push_back(as_string(s[i], child("/params/suites", i)));
    } else {
      throw ConfigError("/params/suites", "expected a suite name or a non-empty array of names");
    }
  }
  if (params.contains("truncation_levels")) {
    cfg.truncation_levels = as_numbers(params["truncation_levels"], "/params/truncation_levels");
    for (std::size_t i = 0; i < cfg.truncation_levels.size(); ++i) {
      if (!(cfg.truncation_levels[i] > 0.0)) throw ConfigError(child("/params/truncation_levels", i), "expected a positive number");
    }
  }
  if (params.contains("heights")) cfg.heights = as_numbers(params["heights"], "/params/heights");
  if (params.contains("fit_window")) cfg.fit_window = as_count(params["fit_window"], "/params/fit_window");
  if (params.contains("holder_levels")) cfg.holder_levels = as_count(params["holder_levels"], "/params/holder_levels", 2);
  if (params.contains("perfectness_levels")) cfg.perfectness_levels = as_count(params["perfectness_levels"], "/params/perfectness_levels");
  if (params.contains("level_curve")) {
    const json& lc = params["level_curve"];
    allow_keys(lc, "/params/level_curve", {"degrees", "k"});
    if (lc.contains("degrees")) cfg.level_curve_degrees = as_counts(lc["degrees"], "/params/level_curve/degrees");
    if (lc.contains("k")) cfg.level_curve_k = int(as_count(lc["k"], "/params/level_curve/k"));
  }
  if (params.contains("solver")) parse_solver(params["solver"], "/params/solver", cfg.solver);

  switch (cfg.task) {
    case Task::series:
      if (cfg.degrees.empty()) throw ConfigError("/params/degrees", "series needs degrees (or n_min and n_max)");
      break;
    case Task::cheb:
      if (cfg.degree == 0) throw ConfigError("/params/n", "cheb needs a degree n >= 1");
      break;
    case Task::green:
      if (cfg.probes.empty()) throw ConfigError("/params/probes", "green needs probe points");
      break;
    default:
      break;
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    allow_keys(o, "/output", {"dir", "prefix"});
    if (o.contains("dir")) cfg.out_dir = as_string(o["dir"], "/output/dir");
    if (o.contains("prefix")) cfg.prefix = as_string(o["prefix"], "/output/prefix");
  }
  if (cfg.prefix.empty()) cfg.prefix = cfg.set_id + "_" + to_string(cfg.task);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::optional<std::string>& task_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col), "JSON syntax error");
  }
  return parse_config(doc, path.parent_path(), task_override);
}

}  // namespace widom::cli
