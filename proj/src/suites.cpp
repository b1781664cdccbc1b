#include "widom/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "widom/diagnostics.hpp"
#include "widom/equilibrium.hpp"
#include "widom/errors.hpp"
#include "widom/harness.hpp"
#include "widom/levin_strip.hpp"
#include "widom/minimax.hpp"

namespace widom {

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::vector<std::size_t> degree_range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> d;
  for (std::size_t n = lo; n <= hi; ++n) d.push_back(n);
  return d;
}

std::ostringstream stream() {
  std::ostringstream os;
  os << std::setprecision(10);
  return os;
}

const RealIntervalUnion& unit_interval() {
  static const RealIntervalUnion k({{-1.0, 1.0}});
  return k;
}

RealIntervalUnion two_interval(double a) { return RealIntervalUnion({{-1.0, -a}, {a, 1.0}}); }

RealIntervalUnion cantor(int depth) { return build_cantor({1.0 / 3.0, depth, {0.0, 1.0}}); }

Shape square() { return Polygon{{{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}}; }

Outcome interval_baseline() {
  const auto s = run_series(unit_interval(), degree_range(1, 30), {}, "interval");
  double worst = 0.0;
  for (const auto& r : s.rows) {
    worst = std::max({worst, std::abs(r.t_hi - 2.0), std::abs(r.t_lo - 2.0)});
    if (!r.ok()) worst = INFINITY;
  }
  auto os = stream();
  os << "max |t_n - 2| over n=1..30 = " << worst;
  return {worst <= 1e-6, os.str()};
}

Outcome circle_baseline() {
  const auto s = run_series(std::vector<Shape>{Disk{0.0, 1.0}}, degree_range(1, 20), {}, "circle");
  double worst = 0.0;
  for (const auto& r : s.rows) {
    worst = std::max({worst, std::abs(r.t_hi - 1.0), std::abs(r.t_lo - 1.0)});
    if (!r.ok()) worst = INFINITY;
  }
  auto os = stream();
  os << "max |t_n - 1| over n=1..20 = " << worst;
  return {worst <= 1e-6, os.str()};
}

Outcome capacity_exactness() {
  auto os = stream();
  bool pass = true;
  for (double a : {0.2, 0.5, 0.8}) {
    const double err = std::abs(solve_real_equilibrium(two_interval(a)).capacity() - std::sqrt(1.0 - a * a) / 2.0);
    pass = pass && err <= 1e-8;
    os << "two-interval a=" << a << " err " << err << "; ";
  }
  const double sq = solve_symm(std::vector<Shape>{square()}).capacity();
  pass = pass && std::abs(sq - 1.1803406) <= 1e-5;
  os << "square " << sq << "; ";
  const double c2 = solve_symm(std::vector<Shape>{Disk{0.0, 2.0}}).capacity();
  pass = pass && std::abs(c2 - 2.0) <= 1e-9;
  os << "circle r=2 err " << std::abs(c2 - 2.0);
  return {pass, os.str()};
}

Outcome two_interval_growth() {
  const auto s = run_series(two_interval(0.5), degree_range(1, 60), {}, "two-interval");
  double even_err = 0.0, sup = 0.0;
  for (const auto& r : s.rows) {
    if (!r.ok()) return {false, "row n=" + std::to_string(r.n) + " " + r.status};
    if (r.n % 2 == 0 && r.n <= 24) even_err = std::max(even_err, std::abs(r.t_hi - 2.0));
    sup = std::max(sup, r.t_hi);
  }
  const auto fit = fit_growth(s);
  auto os = stream();
  os << "max |t_2m - 2| (m<=12) " << even_err << "; log slope b " << fit.log_b << "; model " << to_string(fit.model)
     << "; sup t " << sup;
  return {even_err <= 1e-5 && std::abs(fit.log_b) <= 0.05 && fit.model == GrowthModel::constant && sup <= 10.0,
          os.str()};
}

Outcome cantor_power() {
  const auto s = run_series(cantor(4), degree_range(8, 96), {}, "cantor-4");
  if (s.failures() > 0) return {false, std::to_string(s.failures()) + " failed rows"};
  const auto fit = fit_growth(s);
  auto os = stream();
  os << "model " << to_string(fit.model) << "; power c " << fit.power_c << "; residuals const/log/power "
     << fit.residual_constant << "/" << fit.residual_logarithmic << "/" << fit.residual_power << "; mean t "
     << fit.mean_t << "; power residual / mean " << fit.residual_power / fit.mean_t;
  const bool pass = fit.model == GrowthModel::power && fit.power_c > 0.0 && fit.power_c < 2.0 &&
                    fit.residual_power < 0.05 * fit.mean_t;
  return {pass, os.str()};
}

Outcome truncation_pipeline() {
  const auto K = cantor(3);
  const auto eq = solve_real_equilibrium(K);
  const auto strip = build_levin(eq);
  auto os = stream();
  bool pass = true;
  for (int n : {5, 10, 20}) {
    const double cap = solve_real_equilibrium(sublevel_truncate(eq, strip, 1.0 / n)).capacity();
    const bool ok = cap >= eq.capacity() - 1e-7 && cap <= std::exp(1.0 / n) * eq.capacity() + 1e-7;
    pass = pass && ok;
    os << "n=" << n << " cap(K*)/cap(K) " << cap / eq.capacity() << (ok ? "" : " VIOLATED") << "; ";
  }
  std::vector<double> x, y;
  for (int n : {4, 8, 16, 32, 64}) {
    const auto trunc = sublevel_truncate(eq, strip, 1.0 / n);
    x.push_back(std::log(double(n)));
    y.push_back(build_levin(solve_real_equilibrium(trunc)).V);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / double(y.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double b = sxy / sxx, a = my - b * mx;
  double res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) res += std::pow(y[i] - a - b * x[i], 2);
  res = std::sqrt(res / double(x.size()));
  os << "V(K*_1/n) for n=4..64:";
  for (double v : y) os << ' ' << v;
  os << "; fit a " << a << " b " << b << "; relative residual " << res / my;
  return {pass && res / my < 0.10, os.str()};
}

Outcome log_bound() {
  const auto K = two_interval(0.5);
  const auto s = run_series(K, degree_range(4, 60), {}, "two-interval");
  const auto rep = verify_log_bound(s, build_levin(solve_real_equilibrium(K)));
  auto os = stream();
  os << "V " << rep.V << "; C " << rep.C << " (attained at n=" << rep.degrees[std::size_t(
                                                                      std::max_element(rep.ratios.begin(), rep.ratios.end()) - rep.ratios.begin())]
     << "); ratio at n=60 " << rep.ratios.back() << "; tail stable " << (rep.stable ? "yes" : "no");
  return {rep.stable && s.failures() == 0, os.str()};
}

Outcome crosscut() {
  auto os = stream();
  std::vector<double> constants;
  for (int depth = 2; depth <= 4; ++depth) {
    const auto strip = build_levin(solve_real_equilibrium(cantor(depth)));
    const double top = strip.max_height();
    std::vector<double> heights;
    for (int i = 0; i < 32; ++i) heights.push_back(top * std::pow(1e-4, double(31 - i) / 31.0));
    double worst = 0.0;
    for (const auto& r : crosscut_ratios(strip, heights)) worst = std::max(worst, r.max_ratio);
    constants.push_back(worst);
    os << "depth " << depth << " max ratio " << worst << "; ";
  }
  const double spread = *std::max_element(constants.begin(), constants.end()) /
                        *std::min_element(constants.begin(), constants.end());
  os << "spread " << spread;
  return {std::isfinite(spread) && spread < 2.0, os.str()};
}

Outcome holder() {
  const double a_seg = holder_fit(solve_real_equilibrium(unit_interval())).alpha;
  const double a_disk = holder_fit(solve_symm(std::vector<Shape>{Disk{0.0, 1.0}}), Disk{0.0, 1.0}).alpha;
  const double a_cantor = holder_fit(solve_real_equilibrium(cantor(4))).alpha;
  auto os = stream();
  os << "alpha interval " << a_seg << "; disk " << a_disk << "; cantor-4 " << a_cantor;
  return {std::abs(a_seg - 0.5) <= 0.05 && std::abs(a_disk - 1.0) <= 0.05 && a_cantor > 0.05, os.str()};
}

Outcome frostman() {
  std::vector<RealIntervalUnion> real_sets{unit_interval(), two_interval(0.2), two_interval(0.5), two_interval(0.8),
                                           transform(cantor(2), {3.0, -2.0})};
  for (int depth = 2; depth <= 4; ++depth) real_sets.push_back(cantor(depth));
  {
    const auto eq = solve_real_equilibrium(cantor(3));
    const auto strip = build_levin(eq);
    for (int n : {4, 5, 8, 10, 16, 20, 32, 64}) real_sets.push_back(sublevel_truncate(eq, strip, 1.0 / n));
  }
  double mass = 0.0, potential = 0.0;
  for (const auto& k : real_sets) {
    const auto eq = solve_real_equilibrium(k);
    mass = std::max(mass, std::abs(eq.mass() - 1.0));
    potential = std::max(potential, eq.frostman_deviation());
  }
  double curve_mass = 0.0, curve_potential = 0.0;
  for (const Shape& s : {Shape{Disk{0.0, 1.0}}, Shape{Disk{0.0, 2.0}}, square()}) {
    const auto eq = solve_symm(std::vector<Shape>{s});
    curve_mass = std::max(curve_mass, std::abs(eq.mass() - 1.0));
    curve_potential = std::max(curve_potential, eq.frostman_deviation());
  }
  auto os = stream();
  os << real_sets.size() << " real solves: mass err " << mass << ", potential defect " << potential
     << "; 3 curve solves: mass err " << curve_mass << ", potential defect " << curve_potential;
  return {mass <= 1e-10 && potential <= 1e-7 && curve_mass <= 1e-8 && curve_potential <= 1e-7, os.str()};
}

Outcome level_curve() {
  std::vector<double> seg_ratio, disk;
  for (std::size_t n : {8, 16, 32, 64, 128, 256}) {
    seg_ratio.push_back(level_curve_integral(Segment{-1.0, 1.0}, n, 1) / std::log(double(n)));
    disk.push_back(level_curve_integral(Disk{0.0, 1.0}, n, 1));
  }
  std::vector<double> sorted = seg_ratio;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[2] + sorted[3]);
  const double seg_spread = std::max(sorted.back() / median, median / sorted.front());
  const double disk_spread = *std::max_element(disk.begin(), disk.end()) / *std::min_element(disk.begin(), disk.end());
  auto os = stream();
  os << "segment J/log n:";
  for (double v : seg_ratio) os << ' ' << v;
  os << " (max deviation from median x" << seg_spread << "); disk J max/min " << disk_spread;
  return {seg_spread <= 2.0 && disk_spread <= 1.5, os.str()};
}

Outcome affine() {
  const auto K = cantor(2);
  const auto a = run_series(K, degree_range(1, 30), {}, "K");
  const auto b = run_series(transform(K, {3.0, -2.0}), degree_range(1, 30), {}, "3K-2");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (!a.rows[i].ok() || !b.rows[i].ok()) return {false, "failed row n=" + std::to_string(a.rows[i].n)};
    worst = std::max(worst, std::abs(a.rows[i].t_hi - b.rows[i].t_hi) / a.rows[i].t_hi);
    worst = std::max(worst, std::abs(a.rows[i].t_lo - b.rows[i].t_lo) / a.rows[i].t_lo);
  }
  auto os = stream();
  os << "max relative t difference over n=1..30 " << worst;
  return {worst <= 1e-5, os.str()};
}

struct Suite {
  int id;
  const char* name;
  const char* title;
  double time_limit;  // seconds; 0 for none
  Outcome (*run)();
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> s{
      {1, "interval-baseline", "t_n([-1,1]) = 2, n <= 30", 30.0, interval_baseline},
      {2, "circle-baseline", "t_n(unit circle) = 1, n <= 20", 60.0, circle_baseline},
      {3, "capacity-exactness", "closed-form capacities", 0.0, capacity_exactness},
      {4, "two-interval-growth", "bounded t_n on a symmetric two-interval set", 0.0, two_interval_growth},
      {5, "cantor-power", "power-law growth on the depth-4 Cantor set", 600.0, cantor_power},
      {6, "truncation-pipeline", "capacity sandwich and V of sublevel truncations", 0.0, truncation_pipeline},
      {7, "log-bound", "t_n <= C log(n+1) exp(V) with a stable constant", 0.0, log_bound},
      {8, "crosscut", "crosscut ratios bounded uniformly in Cantor depth", 0.0, crosscut},
      {9, "holder", "Holder exponents of the Green function", 0.0, holder},
      {10, "frostman", "mass and potential constancy of every solve", 0.0, frostman},
      {11, "level-curve", "level-curve integral growth for segment and disk", 0.0, level_curve},
      {12, "affine", "affine invariance of the t_n series", 0.0, affine},
  };
  return s;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : suites()) out.push_back(s.name);
    return out;
  }();
  return names;
}

CheckResult run_suite(const std::string& name) {
  const auto& all = suites();
  const auto it = std::find_if(all.begin(), all.end(), [&](const Suite& s) { return name == s.name; });
  if (it == all.end()) throw ValidationError("unknown verification suite '" + name + "'");
  CheckResult r;
  r.id = it->id;
  r.suite = it->name;
  r.title = it->title;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Outcome o = it->run();
    r.pass = o.pass;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (it->time_limit > 0.0 && r.seconds > it->time_limit) {
    r.pass = false;
    r.detail += "; exceeded time limit of " + std::to_string(int(it->time_limit)) + " s";
  }
  return r;
}

std::vector<CheckResult> run_suites(const std::vector<std::string>& names) {
  std::vector<std::string> expanded;
  for (const auto& n : names) {
    if (n == "all") {
      expanded.insert(expanded.end(), suite_names().begin(), suite_names().end());
    } else {
      expanded.push_back(n);
    }
  }
  for (const auto& n : expanded) {
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end()) {
      throw ValidationError("unknown verification suite '" + n + "'");
    }
  }
  std::vector<CheckResult> out;
  for (const auto& n : expanded) out.push_back(run_suite(n));
  return out;
}

std::string format_check(const CheckResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.suite << ": " << r.title << " | " << r.detail << " ("
     << std::fixed << std::setprecision(2) << r.seconds << " s)";
  return os.str();
}

}  // namespace widom
