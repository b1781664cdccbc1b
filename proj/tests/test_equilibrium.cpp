#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "widom/equilibrium.hpp"
#include "widom/errors.hpp"

using namespace widom;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Complex> real_candidates(const RealIntervalUnion& k, std::size_t per_interval) {
  std::vector<Complex> out;
  for (const auto& iv : k.intervals()) {
    for (std::size_t i = 0; i < per_interval; ++i) {
      out.push_back(iv.midpoint() - 0.5 * iv.length() * std::cos(kPi * double(i) / double(per_interval - 1)));
    }
  }
  return out;
}

std::vector<Complex> square_candidates(std::size_t per_side) {
  const Complex v[4] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  std::vector<Complex> out;
  for (int s = 0; s < 4; ++s) {
    for (std::size_t i = 0; i < per_side; ++i) {
      const double t = 0.5 - 0.5 * std::cos(kPi * double(i) / double(per_side));
      out.push_back(v[s] + t * (v[(s + 1) % 4] - v[s]));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("segment equilibrium") {
  const auto eq = solve_real_equilibrium(RealIntervalUnion({{-1.0, 1.0}}));
  CHECK(eq.capacity() == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(capacity(eq) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(std::abs(eq.mass() - 1.0) < 1e-12);
  for (double x : {-0.9, -0.3, 0.0, 0.4, 0.99}) {
    CHECK(eq.density(x) == doctest::Approx(1.0 / (kPi * std::sqrt(1.0 - x * x))).epsilon(1e-11));
    CHECK(eq.cumulative(x) == doctest::Approx(0.5 + std::asin(x) / kPi).epsilon(1e-11));
  }
  CHECK(eq.density(1.5) == 0.0);
  CHECK(eq.q_roots().empty());
  CHECK(green_eval(eq, 2.0) == doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-12));
}

TEST_CASE("green function against the closed form for a segment") {
  const auto eq = solve_real_equilibrium(RealIntervalUnion({{-1.0, 1.0}}));
  for (Complex z : {Complex(2.0, 0.0), Complex(0.0, 1.0), Complex(1.0, 1e-6), Complex(-3.0, -2.0), Complex(0.3, 1e-3),
                    Complex(1.000001, 0.0), Complex(50.0, 70.0)}) {
    CHECK(green_eval(eq, z) == doctest::Approx(oracle::green_segment(z)).epsilon(1e-10));
  }
  for (double x : {-1.0, -0.2, 0.7, 1.0}) CHECK(green_eval(eq, x) == 0.0);
}

TEST_CASE("complex green function branches") {
  const auto eq = solve_real_equilibrium(RealIntervalUnion({{-1.0, 1.0}}));
  const Complex a = green_complex(eq, 2.0);
  CHECK(a.real() == doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-12));
  CHECK(std::abs(a.imag()) < 1e-12);
  CHECK(green_complex(eq, -2.0).imag() == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(green_complex(eq, {0.0, 1.0}).imag() == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK_THROWS_AS(green_complex(eq, {0.0, -1.0}), ValidationError);
}

TEST_CASE("two-interval equilibrium against the polynomial preimage") {
  for (double a : {0.2, 0.5, 0.8}) {
    const auto eq = solve_real_equilibrium(RealIntervalUnion({{-1.0, -a}, {a, 1.0}}));
    CHECK(eq.capacity() == doctest::Approx(std::sqrt(1.0 - a * a) / 2.0).epsilon(1e-12));
    REQUIRE(eq.q_roots().size() == 1);
    CHECK(std::abs(eq.q_roots()[0]) < 1e-12);
    CHECK(std::abs(eq.mass() - 1.0) < 1e-10);
    CHECK(eq.component_mass(0) == doctest::Approx(0.5).epsilon(1e-12));
    for (Complex z : {Complex(0.0, 0.0), Complex(0.1, 0.0), Complex(0.0, 0.5), Complex(1.5, -0.2), Complex(-0.6, 1e-4),
                      Complex(3.0, 4.0)}) {
      CHECK(green_eval(eq, z) == doctest::Approx(oracle::green_two_interval(a, z)).epsilon(1e-10));
    }
  }
  const auto eq = solve_real_equilibrium(RealIntervalUnion({{-1.0, -0.5}, {0.5, 1.0}}));
  CHECK(green_eval(eq, 0.0) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("gap polynomial has one zero per gap and the density is nonnegative") {
  for (int depth = 1; depth <= 4; ++depth) {
    const auto k = build_cantor({1.0 / 3.0, depth, {0.0, 1.0}});
    const auto eq = solve_real_equilibrium(k);
    const auto roots = eq.q_roots();
    const auto g = gaps(k);
    REQUIRE(roots.size() == g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(roots[j] > g[j].lo);
      CHECK(roots[j] < g[j].hi);
    }
    for (const auto& iv : k.intervals()) {
      for (int i = 1; i < 20; ++i) CHECK(eq.density(iv.lo + iv.length() * i / 20.0) > 0.0);
    }
  }
}

TEST_CASE("capacity against a Leja-point oracle") {
  // The discrete transfinite diameter converges slowly; calibrate on the segment first.
  const RealIntervalUnion seg({{-1.0, 1.0}});
  const double seg_leja = oracle::leja_capacity(real_candidates(seg, 4000), 300);
  CHECK(seg_leja == doctest::Approx(0.5).epsilon(0.02));

  const auto cantor = build_cantor({1.0 / 3.0, 3, {0.0, 1.0}});
  const double c_eq = solve_real_equilibrium(cantor).capacity();
  const double c_leja = oracle::leja_capacity(real_candidates(cantor, 500), 300);
  CHECK(c_eq == doctest::Approx(c_leja).epsilon(0.03));

  const Shape square = Polygon{{{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}};
  const double sq_eq = solve_symm({square}).capacity();
  CHECK(sq_eq == doctest::Approx(oracle::leja_capacity(square_candidates(1000), 300)).epsilon(0.03));
  const double closed_form = std::pow(std::tgamma(0.25), 2) / (4.0 * std::pow(kPi, 1.5)) * 2.0;
  CHECK(sq_eq == doctest::Approx(closed_form).epsilon(1e-6));
}

TEST_CASE("capacity decreases with cantor depth and respects the hull bound") {
  double prev = INFINITY;
  for (int depth = 0; depth <= 5; ++depth) {
    const auto k = build_cantor({1.0 / 3.0, depth, {0.0, 1.0}});
    const auto eq = solve_real_equilibrium(k);
    CHECK(eq.capacity() < prev);
    CHECK(eq.capacity() <= k.diameter() / 4.0 + 1e-14);
    CHECK(eq.capacity() > 0.0);
    CHECK(std::abs(eq.mass() - 1.0) <= 1e-10);
    CHECK(eq.frostman_deviation() <= 1e-7);
    prev = eq.capacity();
  }
}

TEST_CASE("capacity scales with affine maps") {
  const auto k = build_cantor({0.3, 2, {-1.0, 2.0}});
  const double c = solve_real_equilibrium(k).capacity();
  for (double lambda : {0.5, 2.0}) {
    for (double shift : {0.0, 1.0}) {
      const double cl = solve_real_equilibrium(transform(k, {lambda, shift})).capacity();
      CHECK(std::abs(cl - lambda * c) <= 1e-9);
    }
  }
  const double d = solve_symm({Shape(Disk{0.0, 1.0})}).capacity();
  for (double lambda : {0.5, 2.0}) {
    for (Complex shift : {Complex(0.0, 0.0), Complex(1.0, 1.0)}) {
      CHECK(std::abs(solve_symm({Shape(Disk{shift, lambda})}).capacity() - lambda * d) <= 1e-9);
    }
  }
}

TEST_CASE("green function is nonnegative and grows like log|z|") {
  const auto eq = solve_real_equilibrium(build_cantor({1.0 / 3.0, 2, {0.0, 1.0}}));
  for (int i = 0; i < 40; ++i) {
    const Complex z = std::polar(0.05 + 0.05 * i, 0.7 * i);
    CHECK(green_eval(eq, z + 0.5) >= 0.0);
  }
  for (int k = 1; k <= 3; ++k) {
    const double r = std::pow(10.0, k);
    for (double angle : {0.0, 1.0, 2.5}) {
      const double excess = green_eval(eq, std::polar(r, angle)) - std::log(r);
      CHECK(std::abs(excess - eq.robin()) < 1e-3 * (1.0 + 1.0 / r) + 1.0 / r);
    }
  }
}

TEST_CASE("circle, disk and square boundary densities") {
  const auto circle = solve_symm({Shape(Disk{0.0, 1.0})});
  CHECK(std::abs(circle.capacity() - 1.0) < 1e-10);
  CHECK(std::abs(circle.mass() - 1.0) < 1e-8);
  double smin = INFINITY, smax = -INFINITY;
  for (double s : circle.sigma()) {
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  CHECK(smax - smin < 1e-10 * smax);
  CHECK(smin == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-9));
  CHECK(green_eval(circle, {2.0, 0.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(green_eval(circle, {0.0, 0.5}) == 0.0);

  const auto big = solve_symm({Shape(Disk{0.0, 2.0})});
  CHECK(std::abs(big.capacity() - 2.0) < 1e-9);

  const auto square = solve_symm({Shape(Polygon{{{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}})});
  CHECK(std::abs(square.capacity() - 1.1803406) < 1e-5);
  CHECK(std::abs(square.mass() - 1.0) < 1e-8);
  CHECK(square.frostman_deviation() < 1e-7);
  for (double s : square.sigma()) CHECK(s >= -1e-10);
}

TEST_CASE("equilibrium input validation") {
  CHECK_THROWS_AS(solve_real_equilibrium(RealIntervalUnion({{0.0, 1.0}, {1.0 + 1e-10, 2.0}})), SolverError);
  CHECK_THROWS_AS(solve_symm(std::vector<Shape>{}), ValidationError);
  CHECK_THROWS_AS(solve_symm({Shape(RealIntervalUnion({{0.0, 1.0}}))}), ValidationError);
}
