#include <doctest.h>

#include <cmath>
#include <numbers>
#include <optional>

#include "oracles.hpp"
#include "widom/errors.hpp"
#include "widom/levin_strip.hpp"

using namespace widom;

namespace {

constexpr double kPi = std::numbers::pi;

/// Endpoints of {x in gap : g(x) > s} located by scanning a dense grid and bisecting sign changes.
std::vector<double> crossing_oracle(const EquilibriumReal& eq, Interval gap, double s) {
  std::vector<double> out;
  const int m = 4000;
  auto f = [&](double x) { return green_eval(eq, x) - s; };
  double x0 = gap.lo, f0 = f(x0);
  for (int i = 1; i <= m; ++i) {
    const double x1 = gap.lo + gap.length() * i / m, f1 = f(x1);
    if ((f0 <= 0.0) != (f1 <= 0.0)) {
      double a = x0, b = x1;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double c = 0.5 * (a + b);
        ((f(c) <= 0.0) == (f0 <= 0.0) ? a : b) = c;
      }
      out.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

}  // namespace

TEST_CASE("single interval has no slits") {
  const auto eq = solve_real_equilibrium(RealIntervalUnion({{-1.0, 1.0}}));
  const auto strip = build_levin(eq);
  CHECK(strip.slits.empty());
  CHECK(strip.V == 0.0);
  CHECK(strip.max_height() == 0.0);
  CHECK(sublevel_truncate(eq, strip, 0.3) == RealIntervalUnion({{-1.0, 1.0}}));
}

TEST_CASE("symmetric two-interval strip") {
  const auto eq = solve_real_equilibrium(RealIntervalUnion({{-1.0, -0.5}, {0.5, 1.0}}));
  const auto strip = build_levin(eq);
  REQUIRE(strip.slits.size() == 1);
  CHECK(strip.slits[0].u == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(strip.slits[0].v == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-12));
  CHECK(strip.slits[0].v == doctest::Approx(oracle::green_two_interval(0.5, 0.0)).epsilon(1e-12));
  CHECK(strip.V == strip.slits[0].v);
  CHECK(strip.capacity == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-12));
  CHECK(levin_real_part(eq, {0.0, 1.0}) == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(levin_real_part(eq, {5.0, 0.0}) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(std::abs(levin_real_part(eq, {-5.0, 0.0})) < 1e-12);
}

TEST_CASE("slit invariants on cantor sets") {
  for (int depth = 1; depth <= 4; ++depth) {
    const auto eq = solve_real_equilibrium(build_cantor({1.0 / 3.0, depth, {0.0, 1.0}}));
    const auto strip = build_levin(eq);
    const auto g = gaps(eq.intervals());
    REQUIRE(strip.slits.size() == g.size());
    double total = 0.0, prev_u = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto& s = strip.slits[j];
      CHECK(s.gap == j);
      CHECK(s.u > prev_u);
      CHECK(s.u < kPi);
      CHECK(s.v > 0.0);
      CHECK(s.peak > g[j].lo);
      CHECK(s.peak < g[j].hi);
      // u is pi times the mass to the left of the gap.
      CHECK(s.u == doctest::Approx(kPi * eq.cumulative(g[j].lo)).epsilon(1e-12));
      // Independent check through the harmonic conjugate just above the gap.
      CHECK(std::abs(levin_real_part(eq, {s.peak, 1e-12}) - s.u) < 1e-8);
      // v is the Green function at the critical point, where the derivative vanishes.
      CHECK(s.v == doctest::Approx(green_eval(eq, s.peak)).epsilon(1e-13));
      const double h = 1e-5 * g[j].length();
      const double slope = (green_eval(eq, s.peak + h) - green_eval(eq, s.peak - h)) / (2 * h);
      CHECK(std::abs(slope) < 1e-6 * (1.0 + s.v / g[j].length()));
      CHECK(green_eval(eq, s.peak + 0.1 * (g[j].hi - s.peak)) < s.v);
      CHECK(green_eval(eq, s.peak - 0.1 * (s.peak - g[j].lo)) < s.v);
      total += s.v;
      prev_u = s.u;
    }
    CHECK(strip.V == doctest::Approx(total).epsilon(1e-15));
  }
}

TEST_CASE("sublevel truncation against a bisection oracle") {
  const auto k = normalize_to_unit(build_cantor({1.0 / 3.0, 2, {0.0, 1.0}})).set;
  const auto eq = solve_real_equilibrium(k);
  const auto strip = build_levin(eq);
  REQUIRE(strip.slits.size() == 3);
  const double s = strip.slits[1].v / 2.0;
  CHECK(strip.slits[0].v < s);
  CHECK(strip.slits[2].v < s);
  const auto t = sublevel_truncate(eq, strip, s);
  REQUIRE(t.size() == 2);
  const auto cross = crossing_oracle(eq, gaps(k)[1], s);
  REQUIRE(cross.size() == 2);
  CHECK(t[0].lo == k.min());
  CHECK(t[1].hi == k.max());
  CHECK(t[0].hi == doctest::Approx(cross[0]).epsilon(1e-12));
  CHECK(t[1].lo == doctest::Approx(cross[1]).epsilon(1e-12));

  CHECK(sublevel_truncate(eq, strip, strip.max_height()) == RealIntervalUnion({{k.min(), k.max()}}));
  CHECK_THROWS_AS(sublevel_truncate(eq, strip, 0.0), ValidationError);
}

TEST_CASE("truncation contains the set and grows with the level") {
  const auto eq = solve_real_equilibrium(build_cantor({1.0 / 3.0, 3, {0.0, 1.0}}));
  const auto strip = build_levin(eq);
  const auto& k = eq.intervals();
  std::optional<RealIntervalUnion> prev;
  for (double s : {0.005, 0.01, 0.05, 0.1, 0.3, 0.6, 1.0}) {
    const auto t = sublevel_truncate(eq, strip, s);
    for (const auto& iv : k.intervals()) {
      CHECK(t.contains(iv.lo));
      CHECK(t.contains(iv.hi));
      CHECK(t.component_of(iv.lo) == t.component_of(iv.hi));
    }
    if (prev) {
      for (const auto& iv : prev->intervals()) {
        CHECK(t.contains(iv.lo));
        CHECK(t.component_of(iv.lo) == t.component_of(iv.hi));
      }
    }
    for (double x : {t.min(), t.max()}) CHECK(green_eval(eq, x) <= s + 1e-12);
    prev = t;
  }
}

TEST_CASE("crosscut ratios") {
  const auto eq = solve_real_equilibrium(RealIntervalUnion({{-1.0, -0.5}, {0.5, 1.0}}));
  const auto strip = build_levin(eq);
  const double v = strip.slits[0].v;
  const auto half = crosscut_ratios(strip, {v / 2});
  REQUIRE(half.size() == 1);
  CHECK(half[0].min_width == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(half[0].max_ratio == doctest::Approx(v / kPi).epsilon(1e-12));
  // At the tallest slit's own height it no longer counts as a wall.
  const auto top = crosscut_ratios(strip, {v});
  CHECK(top[0].min_width == doctest::Approx(kPi));
  CHECK(top[0].max_ratio == doctest::Approx(v / kPi));

  CHECK_THROWS_AS(crosscut_ratios(strip, {}), ValidationError);
  CHECK_THROWS_AS(crosscut_ratios(strip, {0.0}), ValidationError);
  CHECK_THROWS_AS(crosscut_ratios(strip, {v * 1.01}), ValidationError);
}
