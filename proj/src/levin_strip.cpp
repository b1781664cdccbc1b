#include "widom/levin_strip.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "widom/errors.hpp"

namespace widom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCrossCheckFailure = 1e-6;

double green_on_axis(const EquilibriumReal& eq, double x) { return green_eval(eq, Complex(x, 0.0)); }

// Bisection for g(x) = level on [lo, hi] where g is monotone; `rising` says g(lo) < g(hi).
double solve_level(const EquilibriumReal& eq, double lo, double hi, double level, bool rising) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const bool below = green_on_axis(eq, mid) < level;
    if (below == rising) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double LevinStrip::max_height() const {
  double m = 0.0;
  for (const auto& s : slits) m = std::max(m, s.v);
  return m;
}

double levin_real_part(const EquilibriumReal& eq, Complex z) {
  return kPi - eq.log_potential(z).imag();
}

LevinStrip build_levin(const EquilibriumReal& eq) {
  LevinStrip strip;
  strip.capacity = eq.capacity();
  const auto& set = eq.intervals();
  const auto peaks = eq.q_roots();
  for (std::size_t j = 0; j < peaks.size(); ++j) {
    const double alpha = set[j].hi;
    const double beta = set[j + 1].lo;
    const double peak = peaks[j];
    if (!(peak > alpha && peak < beta)) {
      throw SolverError("gap-polynomial zero is not inside gap " + std::to_string(j), j);
    }
    Slit slit;
    slit.gap = j;
    slit.peak = peak;
    slit.v = green_on_axis(eq, peak);
    slit.u = kPi * eq.cumulative(alpha);
    const double u_check = levin_real_part(eq, Complex(peak, 0.0));
    if (std::abs(u_check - slit.u) > kCrossCheckFailure) {
      throw SolverError("slit position of gap " + std::to_string(j) + " disagrees with the boundary value of the map (" +
                            std::to_string(slit.u) + " vs " + std::to_string(u_check) + ")",
                        j);
    }
    strip.V += slit.v;
    strip.slits.push_back(slit);
  }
  return strip;
}

RealIntervalUnion sublevel_truncate(const EquilibriumReal& eq, const LevinStrip& strip, double s) {
  if (!(s > 0.0)) throw ValidationError("truncation level must be positive");
  const auto& set = eq.intervals();
  if (strip.slits.size() + 1 != set.size()) throw ValidationError("strip was not built from this set");
  std::vector<Interval> out;
  double lo = set.min();
  for (const auto& slit : strip.slits) {
    if (slit.v <= s) continue;
    const double alpha = set[slit.gap].hi;
    const double beta = set[slit.gap + 1].lo;
    const double left = solve_level(eq, alpha, slit.peak, s, true);
    const double right = solve_level(eq, slit.peak, beta, s, false);
    out.push_back({lo, left});
    lo = right;
  }
  out.push_back({lo, set.max()});
  return RealIntervalUnion(std::move(out));
}

std::vector<CrosscutRatio> crosscut_ratios(const LevinStrip& strip, const std::vector<double>& heights) {
  if (heights.empty()) throw ValidationError("crosscut heights must not be empty");
  const double top = strip.max_height();
  std::vector<CrosscutRatio> out;
  out.reserve(heights.size());
  for (double b : heights) {
    if (!(b > 0.0 && b <= top)) {
      throw ValidationError("crosscut height " + std::to_string(b) + " outside (0, max slit height]");
    }
    std::vector<double> walls{0.0};
    for (const auto& slit : strip.slits) {
      if (slit.v > b) walls.push_back(slit.u);
    }
    walls.push_back(kPi);
    std::sort(walls.begin(), walls.end());
    CrosscutRatio r{b, 0.0, kPi};
    for (std::size_t i = 0; i + 1 < walls.size(); ++i) {
      const double width = walls[i + 1] - walls[i];
      r.min_width = std::min(r.min_width, width);
      r.max_ratio = std::max(r.max_ratio, b / width);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace widom
