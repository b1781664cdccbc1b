#include "widom/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "widom/errors.hpp"

namespace widom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDistanceLo = 1e-6;
constexpr double kDistanceHi = 1e-1;
constexpr double kQuadTol = 1e-9;

std::vector<double> probe_distances(double diam, std::size_t levels, bool holdout) {
  if (levels < 2) throw ValidationError("at least two probe distance levels are required");
  const double lo = std::log(kDistanceLo), hi = std::log(kDistanceHi);
  const double step = (hi - lo) / double(levels - 1);
  std::vector<double> d;
  const std::size_t count = holdout ? levels - 1 : levels;
  for (std::size_t i = 0; i < count; ++i) d.push_back(diam * std::exp(lo + step * (double(i) + (holdout ? 0.5 : 0.0))));
  return d;
}

double distance_to_segment(Complex z, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  const double t = len2 > 0 ? std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0) : 0.0;
  return std::abs(z - (a + t * ab));
}

double integrate(const std::function<double(double)>& f, std::vector<double> breaks) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] - breaks[i] <= 0.0) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, breaks[i], breaks[i + 1], 20, kQuadTol);
  }
  return total;
}

}  // namespace

HolderFit holder_fit(const std::function<double(Complex)>& green, const std::vector<HolderProbe>& probes,
                     const std::vector<HolderProbe>& holdout) {
  std::vector<std::pair<double, double>> kept;  // (d, g)
  for (const auto& p : probes) {
    const double g = green(p.z);
    if (!(g > 0.0) || !(p.distance > 0.0) || !std::isfinite(g)) continue;
    kept.push_back({p.distance, g});
  }
  if (kept.empty()) throw ValidationError("every Holder probe lies on the set");
  std::sort(kept.begin(), kept.end());
  std::vector<double> x, y;
  for (std::size_t i = 0; i < kept.size();) {
    double gmax = kept[i].second;
    std::size_t j = i + 1;
    while (j < kept.size() && kept[j].first - kept[i].first <= 1e-9 * kept[i].first) gmax = std::max(gmax, kept[j++].second);
    x.push_back(std::log(kept[i].first));
    y.push_back(std::log(gmax));
    i = j;
  }
  if (x.size() < 2) throw ValidationError("Holder fit needs probes at two or more distances");

  HolderFit fit;
  fit.samples = kept.size();
  fit.d_min = kept.front().first;
  fit.d_max = kept.back().first;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(x.size());
  my /= double(y.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.alpha = sxy / sxx;
  const double intercept = my - fit.alpha * mx;
  double res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + fit.alpha * x[i]);
    res += r * r;
  }
  fit.fit_residual = std::sqrt(res / double(x.size()));
  for (const auto& [d, g] : kept) fit.c1 = std::max(fit.c1, g / std::pow(d, fit.alpha));

  fit.holdout_violation = -1.0;
  for (const auto& p : holdout) {
    if (!(p.distance > 0.0)) continue;
    const double g = green(p.z);
    fit.holdout_violation = std::max(fit.holdout_violation, g / (fit.c1 * std::pow(p.distance, fit.alpha)) - 1.0);
  }
  if (holdout.empty()) fit.holdout_violation = 0.0;
  return fit;
}

std::vector<HolderProbe> holder_probes(const RealIntervalUnion& set, std::size_t levels, bool holdout) {
  std::vector<HolderProbe> out;
  const auto iv = set.intervals();
  for (double d : probe_distances(set.diameter(), levels, holdout)) {
    for (std::size_t j = 0; j < iv.size(); ++j) {
      const double left_room = j == 0 ? std::numeric_limits<double>::infinity() : 0.5 * (iv[j].lo - iv[j - 1].hi);
      const double right_room =
          j + 1 == iv.size() ? std::numeric_limits<double>::infinity() : 0.5 * (iv[j + 1].lo - iv[j].hi);
      if (d <= left_room) out.push_back({Complex(iv[j].lo - d, 0.0), d});
      if (d <= right_room) out.push_back({Complex(iv[j].hi + d, 0.0), d});
      for (double x : {iv[j].lo, iv[j].midpoint(), iv[j].hi}) out.push_back({Complex(x, d), d});
    }
  }
  return out;
}

std::vector<HolderProbe> holder_probes(const Disk& disk, std::size_t levels, bool holdout) {
  std::vector<HolderProbe> out;
  for (double d : probe_distances(2.0 * disk.radius, levels, holdout)) {
    for (int a = 0; a < 8; ++a) {
      const double angle = 0.1 + 2.0 * kPi * double(a) / 8.0;
      out.push_back({disk.center + (disk.radius + d) * std::polar(1.0, angle), d});
    }
  }
  return out;
}

HolderFit holder_fit(const EquilibriumReal& eq, std::size_t levels) {
  return holder_fit([&](Complex z) { return green_eval(eq, z); }, holder_probes(eq.intervals(), levels, false),
                    holder_probes(eq.intervals(), levels, true));
}

HolderFit holder_fit(const BoundaryDensity& eq, const Disk& disk, std::size_t levels) {
  return holder_fit([&](Complex z) { return green_eval(eq, z); }, holder_probes(disk, levels, false),
                    holder_probes(disk, levels, true));
}

PerfectnessReport perfectness_check(const RealIntervalUnion& set, const std::vector<double>& centers,
                                    const std::vector<double>& radii) {
  if (centers.empty() || radii.empty()) throw ValidationError("perfectness check needs centers and radii");
  PerfectnessReport rep;
  rep.worst_ratio = std::numeric_limits<double>::infinity();
  for (double z : centers) {
    if (!set.contains(z)) {
      std::ostringstream os;
      os << "perfectness center " << z << " is not in the set";
      throw ValidationError(os.str());
    }
    for (double r : radii) {
      if (!(r > 0.0 && r < set.diameter())) {
        std::ostringstream os;
        os << "perfectness radius " << r << " outside (0, diam)";
        throw ValidationError(os.str());
      }
      RealIntervalUnion window = [&] {
        try {
          return intersect(set, {z - r, z + r});
        } catch (const ValidationError& e) {
          std::ostringstream os;
          os << "degenerate window at center " << z << ", radius " << r << ": " << e.what();
          throw ValidationError(os.str());
        }
      }();
      const double ratio = solve_real_equilibrium(window).capacity() / r;
      ++rep.samples;
      if (ratio < rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_center = z;
        rep.worst_radius = r;
      }
    }
  }
  return rep;
}

PerfectnessReport perfectness_check(const RealIntervalUnion& set, std::size_t levels) {
  std::vector<double> centers, radii;
  for (const auto& iv : set.intervals()) {
    centers.push_back(iv.lo);
    centers.push_back(iv.midpoint());
    centers.push_back(iv.hi);
  }
  for (std::size_t k = 1; k <= levels; ++k) radii.push_back(set.diameter() * std::ldexp(1.0, -int(k)));
  return perfectness_check(set, centers, radii);
}

std::vector<Complex> level_curve_probes(const std::variant<Segment, Disk>& shape) {
  std::vector<Complex> out;
  if (const auto* s = std::get_if<Segment>(&shape)) {
    const Complex c = 0.5 * (s->a + s->b), h = 0.5 * (s->b - s->a);
    for (int j = 0; j <= 64; ++j) out.push_back(c + h * std::cos(kPi * double(j) / 64.0));
  } else {
    const auto& d = std::get<Disk>(shape);
    for (int j = 0; j < 16; ++j) out.push_back(d.center + d.radius * std::polar(1.0, 2.0 * kPi * double(j) / 16.0));
    out.push_back(d.center);
  }
  return out;
}

double level_curve_integral(const std::variant<Segment, Disk>& shape, std::size_t n, int k,
                        const std::vector<Complex>& probes) {
  if (n < 8) throw ValidationError("level-curve integral needs n >= 8");
  if (k < 1) throw ValidationError("level-curve integral needs k >= 1");
  if (probes.empty()) throw ValidationError("no probe points");
  const double R = 1.0 + 1.0 / double(n);
  double sup = 0.0;
  if (const auto* s = std::get_if<Segment>(&shape)) {
    const Complex c = 0.5 * (s->a + s->b), h = 0.5 * (s->b - s->a);
    if (std::abs(h) == 0.0) throw ValidationError("degenerate segment");
    for (Complex z : probes) {
      auto f = [&](double theta) {
        const Complex w = std::polar(R, theta);
        const Complex zeta = c + 0.5 * h * (w + 1.0 / w);
        const double speed = 0.5 * std::abs(h) * std::abs(1.0 - 1.0 / (w * w)) * R;
        const double d = distance_to_segment(zeta, s->a, s->b);
        return std::pow(d, k) / std::pow(std::abs(zeta - z), k + 1) * speed;
      };
      const double phi = std::acos(std::clamp(((z - c) / h).real(), -1.0, 1.0));
      // The distance to the segment switches formula where the level curve crosses
      // the normals through the endpoints.
      const double kink = std::acos(2.0 / (R + 1.0 / R));
      sup = std::max(sup, integrate(f, {0.0, kink, phi, kPi - kink, kPi, kPi + kink, 2.0 * kPi - phi,
                                        2.0 * kPi - kink, 2.0 * kPi}));
    }
  } else {
    const auto& disk = std::get<Disk>(shape);
    if (!(disk.radius > 0.0)) throw ValidationError("degenerate disk");
    for (Complex z : probes) {
      auto f = [&](double theta) {
        const Complex zeta = disk.center + disk.radius * std::polar(R, theta);
        const double d = disk.radius * (R - 1.0);
        return std::pow(d, k) / std::pow(std::abs(zeta - z), k + 1) * disk.radius * R;
      };
      double phi = std::arg(z - disk.center);
      if (phi < 0.0) phi += 2.0 * kPi;
      sup = std::max(sup, integrate(f, {0.0, phi, 2.0 * kPi}));
    }
  }
  return sup;
}

double level_curve_integral(const std::variant<Segment, Disk>& shape, std::size_t n, int k) {
  return level_curve_integral(shape, n, k, level_curve_probes(shape));
}

}  // namespace widom
