#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>

#include "widom/equilibrium.hpp"
#include "widom/errors.hpp"
#include "widom/harness.hpp"
#include "widom/levin_strip.hpp"

using namespace widom;

namespace {

std::vector<std::size_t> range(std::size_t lo, std::size_t hi, std::size_t step = 1) {
  std::vector<std::size_t> out;
  for (std::size_t n = lo; n <= hi; n += step) out.push_back(n);
  return out;
}

SeriesResult synthetic(const std::function<double(double)>& t, std::size_t lo, std::size_t hi) {
  SeriesResult s;
  s.set_id = "synthetic";
  for (std::size_t n : range(lo, hi)) {
    SeriesRow r;
    r.n = n;
    r.t_lo = r.t_hi = t(double(n));
    r.log_norm_lo = r.log_norm_hi = std::log(r.t_hi);
    s.rows.push_back(r);
  }
  return s;
}

}  // namespace

TEST_CASE("interval and circle series") {
  const auto s = run_series(RealIntervalUnion({{-1.0, 1.0}}), range(1, 10));
  REQUIRE(s.rows.size() == 10);
  CHECK(s.log_capacity == doctest::Approx(-std::log(2.0)).epsilon(1e-13));
  for (const auto& r : s.rows) {
    CHECK(r.ok());
    CHECK(r.t_hi == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.t_lo <= r.t_hi);
    CHECK(r.t_lo >= 1.0 - 1e-6);
    CHECK(std::exp(r.log_norm_hi - double(r.n) * s.log_capacity) == doctest::Approx(r.t_hi).epsilon(1e-14));
  }
  const auto c = run_series({Shape(Disk{0.0, 1.0})}, range(1, 10));
  for (const auto& r : c.rows) {
    CHECK(r.ok());
    CHECK(std::abs(r.t_hi - 1.0) < 1e-8);
    CHECK(r.t_lo >= 1.0 - 1e-6);
  }
}

TEST_CASE("two-interval even degrees come from the composition") {
  const double a = 0.5;
  const auto s = run_series(RealIntervalUnion({{-1.0, -a}, {a, 1.0}}), range(2, 24, 2));
  for (const auto& r : s.rows) {
    const double m = double(r.n / 2);
    // ||T_2m|| = 2^(1-m) ((1 - a^2) / 2)^m and cap^2m = ((1 - a^2) / 4)^m.
    const double log_norm = (1.0 - m) * std::log(2.0) + m * std::log((1.0 - a * a) / 2.0);
    CHECK(r.log_norm_hi == doctest::Approx(log_norm).epsilon(1e-9));
    CHECK(r.t_hi == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("series rows are validated and failures are recorded") {
  CHECK_THROWS_AS(run_series(RealIntervalUnion({{0.0, 1.0}}), {}), ValidationError);
  CHECK_THROWS_AS(run_series(RealIntervalUnion({{0.0, 1.0}}), {3, 2}), ValidationError);
  CHECK_THROWS_AS(run_series(RealIntervalUnion({{0.0, 1.0}}), {2, 2}), ValidationError);
  SolverOptions impossible;
  impossible.real_bracket_tol = 1e-300;
  impossible.max_exchange_iterations = 1;
  impossible.refinement_rounds = 0;
  const auto s = run_series(build_cantor({1.0 / 3.0, 3, {0.0, 1.0}}), {20, 21}, impossible, "k");
  CHECK(s.failures() == 2);
  for (const auto& r : s.rows) {
    CHECK_FALSE(r.ok());
    CHECK(r.status.rfind("failed: ", 0) == 0);
    CHECK(std::isnan(r.t_hi));
  }
}

TEST_CASE("series CSV keeps full precision") {
  const auto s = run_series(RealIntervalUnion({{-1.0, -0.5}, {0.5, 1.0}}), {1, 2, 3}, {}, "two");
  std::ostringstream os;
  write_series_csv(os, s);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "set_id,n,log_capacity,log_norm_lo,log_norm_hi,t_lo,t_hi,status");
  for (const auto& r : s.rows) {
    REQUIRE(std::getline(in, line));
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    REQUIRE(f.size() == 8);
    CHECK(f[0] == "two");
    CHECK(std::stoul(f[1]) == r.n);
    CHECK(std::stod(f[2]) == s.log_capacity);
    CHECK(std::stod(f[4]) == r.log_norm_hi);
    CHECK(std::stod(f[6]) == r.t_hi);
    CHECK(f[7] == "ok");
    // t is recoverable from the logged columns.
    CHECK(std::exp(std::stod(f[4]) - double(r.n) * std::stod(f[2])) == doctest::Approx(r.t_hi).epsilon(1e-14));
  }
}

TEST_CASE("growth fits recover their generators") {
  const auto c = fit_growth(synthetic([](double) { return 2.0; }, 1, 40));
  CHECK(c.model == GrowthModel::constant);
  CHECK(c.constant_a == doctest::Approx(2.0));
  CHECK(c.residual() < 1e-12);
  CHECK(c.n_min == 8);
  CHECK(c.rows_used == 33);

  const auto l = fit_growth(synthetic([](double n) { return 1.0 + 0.5 * std::log(n); }, 1, 60));
  CHECK(l.model == GrowthModel::logarithmic);
  CHECK(l.log_b == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(l.log_a == doctest::Approx(1.0).epsilon(1e-10));

  const auto p = fit_growth(synthetic([](double n) { return std::pow(n, 0.3); }, 1, 96));
  CHECK(p.model == GrowthModel::power);
  CHECK(std::abs(p.power_c - 0.3) < 1e-3);
  CHECK(std::abs(p.power_d) < 1e-10);
  CHECK(p.residual_power < p.residual_logarithmic);

  CHECK(to_string(GrowthModel::constant) == "constant");
  CHECK(to_string(GrowthModel::logarithmic) == "logarithmic");
  CHECK(to_string(GrowthModel::power) == "power");
  CHECK_THROWS_AS(fit_growth(synthetic([](double) { return 2.0; }, 1, 12)), ValidationError);
}

TEST_CASE("logarithmic bound constant") {
  const auto s = run_series(RealIntervalUnion({{-1.0, 1.0}}), range(1, 20));
  const auto rep = verify_log_bound(s, build_levin(solve_real_equilibrium(RealIntervalUnion({{-1.0, 1.0}}))));
  CHECK(rep.V == 0.0);
  CHECK(rep.C == doctest::Approx(2.0 / std::log(2.0)).epsilon(1e-9));
  CHECK(rep.ratios.front() == doctest::Approx(rep.C));
  for (std::size_t i = 1; i < rep.ratios.size(); ++i) CHECK(rep.ratios[i] < rep.ratios[i - 1]);
  CHECK(rep.stable);

  const RealIntervalUnion two({{-1.0, -0.5}, {0.5, 1.0}});
  const auto s2 = run_series(two, range(4, 30));
  const auto strip = build_levin(solve_real_equilibrium(two));
  const auto r2 = verify_log_bound(s2, strip);
  CHECK(std::exp(r2.V) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  for (const auto& row : s2.rows) {
    CHECK(r2.C * std::log(double(row.n) + 1.0) * std::exp(r2.V) >= row.t_hi * (1.0 - 1e-15));
  }

  const auto other = build_levin(solve_real_equilibrium(RealIntervalUnion({{-1.0, -0.2}, {0.2, 1.0}})));
  CHECK_THROWS_AS(verify_log_bound(s2, other), ValidationError);
}

TEST_CASE("series are affine invariant") {
  const auto k = build_cantor({1.0 / 3.0, 2, {0.0, 1.0}});
  const auto a = run_series(k, range(1, 12));
  const auto b = run_series(transform(k, {0.25, 7.0}), range(1, 12));
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(b.rows[i].t_hi == doctest::Approx(a.rows[i].t_hi).epsilon(1e-6));
    CHECK(a.rows[i].t_lo >= 1.0 - 1e-6);
  }
}
