#include <doctest.h>

#include <cmath>
#include <numbers>

#include "widom/diagnostics.hpp"
#include "widom/errors.hpp"

using namespace widom;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Holder exponents of classical sets") {
  const auto seg = holder_fit(solve_real_equilibrium(RealIntervalUnion({{-1.0, 1.0}})));
  CHECK(seg.alpha == doctest::Approx(0.5).epsilon(0.1));
  CHECK(seg.holdout_violation < 1e-3);
  CHECK(seg.samples > 0);
  CHECK(seg.d_min == doctest::Approx(2e-6));
  CHECK(seg.d_max == doctest::Approx(0.2));

  const Disk disk{0.0, 1.0};
  const auto d = holder_fit(solve_symm({Shape(disk)}), disk);
  CHECK(d.alpha == doctest::Approx(1.0).epsilon(0.05));

  const auto cantor = holder_fit(solve_real_equilibrium(build_cantor({1.0 / 3.0, 4, {0.0, 1.0}})));
  CHECK(cantor.alpha > 0.05);
  CHECK(cantor.alpha <= 0.5 + 0.05);
}

TEST_CASE("Holder fit of a synthetic power law") {
  std::vector<HolderProbe> probes;
  for (int i = 0; i < 20; ++i) {
    const double dist = std::pow(10.0, -6.0 + 0.25 * i);
    probes.push_back({Complex(1.0 + dist, 0.0), dist});
  }
  const auto f = holder_fit([](Complex z) { return 3.0 * std::pow(z.real() - 1.0, 0.7); }, probes);
  CHECK(f.alpha == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(f.c1 == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(f.fit_residual < 1e-9);
  CHECK_THROWS_AS(holder_fit([](Complex) { return 0.0; }, probes), ValidationError);
}

TEST_CASE("Holder exponent is invariant under scaling") {
  const auto k = build_cantor({1.0 / 3.0, 3, {0.0, 1.0}});
  const double a = holder_fit(solve_real_equilibrium(k)).alpha;
  const double b = holder_fit(solve_real_equilibrium(transform(k, {5.0, -3.0}))).alpha;
  CHECK(std::abs(a - b) <= 0.02);
}

TEST_CASE("capacity density of windows") {
  const RealIntervalUnion k({{-1.0, 1.0}});
  const auto edge = perfectness_check(k, {1.0}, {0.5});
  CHECK(edge.worst_ratio == doctest::Approx(0.25).epsilon(1e-12));
  const auto full = perfectness_check(k, {0.0}, {0.5});
  CHECK(full.worst_ratio == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(full.samples == 1);

  for (int depth = 2; depth <= 5; ++depth) {
    const auto c = build_cantor({1.0 / 3.0, depth, {0.0, 1.0}});
    const auto rep = perfectness_check(c);
    CHECK(rep.worst_ratio > 0.0);
    CHECK(rep.worst_ratio <= 0.5 + 1e-9);
    CHECK(rep.samples == 3 * c.size() * 8);
  }
  CHECK_THROWS_AS(perfectness_check(k, {2.0}, {0.5}), ValidationError);
  CHECK_THROWS_AS(perfectness_check(k, {0.0}, {3.0}), ValidationError);
  CHECK_THROWS_AS(perfectness_check(k, {}, {0.5}), ValidationError);
}

TEST_CASE("level-curve integral on the disk has a closed form") {
  for (std::size_t n : {8, 16, 64, 256}) {
    const double R = 1.0 + 1.0 / double(n);
    // Sup over boundary probes of the Poisson-type kernel integral: 2 pi R / (R + 1).
    CHECK(level_curve_integral(Disk{0.0, 1.0}, n, 1) == doctest::Approx(2.0 * kPi * R / (R + 1.0)).epsilon(1e-8));
    CHECK(level_curve_integral(Disk{{2.0, -1.0}, 3.0}, n, 1) == doctest::Approx(2.0 * kPi * R / (R + 1.0)).epsilon(1e-8));
  }
}

TEST_CASE("level-curve integral is scale invariant and validated") {
  for (std::size_t n : {8, 32}) {
    const double a = level_curve_integral(Segment{-1.0, 1.0}, n, 1);
    const double b = level_curve_integral(Segment{-2.0, 2.0}, n, 1);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
    CHECK(level_curve_integral(Segment{-1.0, 1.0}, n, 2) <= a * (1.0 + 1e-9));
  }
  CHECK(level_curve_probes(Segment{-1.0, 1.0}).size() == 65);
  CHECK(level_curve_probes(Disk{0.0, 1.0}).size() == 17);
  CHECK_THROWS_AS(level_curve_integral(Disk{0.0, 1.0}, 4, 1), ValidationError);
  CHECK_THROWS_AS(level_curve_integral(Disk{0.0, 1.0}, 8, 0), ValidationError);
}
