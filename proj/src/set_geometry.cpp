#include "widom/set_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "widom/errors.hpp"

namespace widom {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double distance_to_segment(Complex z, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - a);
  const double t = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }

bool segments_intersect(Complex p1, Complex p2, Complex q1, Complex q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  // Collinear or touching cases: treat zero distance as intersection.
  return distance_to_segment(p1, q1, q2) == 0.0 || distance_to_segment(p2, q1, q2) == 0.0 ||
         distance_to_segment(q1, p1, p2) == 0.0 || distance_to_segment(q2, p1, p2) == 0.0;
}

bool point_in_polygon(Complex z, std::span<const Complex> poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Complex a = poly[i];
    const Complex b = poly[j];
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

struct Polyline {
  std::vector<Complex> points;
  bool closed;
};

std::vector<Polyline> boundary_polylines(const Shape& shape) {
  constexpr std::size_t kSamples = 256;
  return std::visit(
      Overloaded{
          [](const Segment& s) { return std::vector<Polyline>{{{s.a, s.b}, false}}; },
          [](const RealIntervalUnion& k) {
            std::vector<Polyline> out;
            for (const auto& iv : k.intervals()) out.push_back({{Complex(iv.lo), Complex(iv.hi)}, false});
            return out;
          },
          [&](const Disk& d) {
            const auto c = discretize_boundary(d, kSamples, 1.0);
            return std::vector<Polyline>{{{c.vertices().begin(), c.vertices().end()}, true}};
          },
          [](const Polygon& p) { return std::vector<Polyline>{{p.vertices, true}}; },
          [](const DiscretizedCurve& c) {
            return std::vector<Polyline>{{{c.vertices().begin(), c.vertices().end()}, c.closed()}};
          },
      },
      shape);
}

bool polylines_touch(const Polyline& p, const Polyline& q) {
  const std::size_t np = p.closed ? p.points.size() : p.points.size() - 1;
  const std::size_t nq = q.closed ? q.points.size() : q.points.size() - 1;
  for (std::size_t i = 0; i < np; ++i) {
    const Complex a = p.points[i];
    const Complex b = p.points[(i + 1) % p.points.size()];
    for (std::size_t j = 0; j < nq; ++j) {
      if (segments_intersect(a, b, q.points[j], q.points[(j + 1) % q.points.size()])) return true;
    }
  }
  if (q.closed && point_in_polygon(p.points.front(), q.points)) return true;
  if (p.closed && point_in_polygon(q.points.front(), p.points)) return true;
  return false;
}

// Points along a polyline at the given arclength fractions in [0, 1].
std::vector<Complex> resample(std::span<const Complex> pts, bool closed, std::span<const double> fractions) {
  const std::size_t nseg = closed ? pts.size() : pts.size() - 1;
  std::vector<double> cum(nseg + 1, 0.0);
  for (std::size_t i = 0; i < nseg; ++i) cum[i + 1] = cum[i] + std::abs(pts[(i + 1) % pts.size()] - pts[i]);
  const double total = cum.back();
  std::vector<Complex> out;
  out.reserve(fractions.size());
  std::size_t seg = 0;
  for (double f : fractions) {
    const double s = f * total;
    while (seg + 1 < nseg && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
    out.push_back(pts[seg] + t * (pts[(seg + 1) % pts.size()] - pts[seg]));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

RealIntervalUnion::RealIntervalUnion(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw ValidationError("interval union must be non-empty");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw ValidationError("interval " + std::to_string(i) + " has a non-finite endpoint");
    }
    if (!(iv.lo < iv.hi)) {
      std::ostringstream os;
      os << "interval " << i << " = [" << iv.lo << ", " << iv.hi << "] must satisfy a < b";
      throw ValidationError(os.str());
    }
    if (i > 0 && !(intervals_[i - 1].hi < iv.lo)) {
      std::ostringstream os;
      os << "intervals " << i - 1 << " and " << i << " are not strictly ordered and disjoint";
      throw ValidationError(os.str());
    }
  }
}

double RealIntervalUnion::total_length() const {
  double s = 0.0;
  for (const auto& iv : intervals_) s += iv.length();
  return s;
}

std::size_t RealIntervalUnion::component_of(double x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return size();
  --it;
  return x <= it->hi ? static_cast<std::size_t>(it - intervals_.begin()) : size();
}

bool RealIntervalUnion::contains(double x) const { return component_of(x) < size(); }

double RealIntervalUnion::distance(Complex z) const {
  const double x = z.real();
  const double y = std::abs(z.imag());
  double dx;
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) {
    dx = it->lo - x;
  } else {
    const auto prev = std::prev(it);
    if (x <= prev->hi) {
      dx = 0.0;
    } else {
      dx = x - prev->hi;
      if (it != intervals_.end()) dx = std::min(dx, it->lo - x);
    }
  }
  return std::hypot(dx, y);
}

RealIntervalUnion transform(const RealIntervalUnion& set, const AffineMap& map) {
  if (!(map.scale > 0.0)) throw ValidationError("affine map must be increasing");
  std::vector<Interval> out;
  out.reserve(set.size());
  for (const auto& iv : set.intervals()) out.push_back({map.apply(iv.lo), map.apply(iv.hi)});
  return RealIntervalUnion(std::move(out));
}

RealIntervalUnion build_cantor(const CantorSpec& spec) {
  if (!(spec.ratio > 0.0 && spec.ratio < 0.5)) throw ValidationError("cantor ratio must lie in (0, 1/2)");
  if (spec.depth < 0) throw ValidationError("cantor depth must be non-negative");
  if (spec.depth > 20) throw ValidationError("cantor depth above 20 is not supported");
  if (!(spec.base.lo < spec.base.hi)) throw ValidationError("cantor base must satisfy a < b");
  std::vector<Interval> level{spec.base};
  for (int d = 0; d < spec.depth; ++d) {
    std::vector<Interval> next;
    next.reserve(2 * level.size());
    for (const auto& iv : level) {
      const double keep = spec.ratio * iv.length();
      next.push_back({iv.lo, iv.lo + keep});
      next.push_back({iv.hi - keep, iv.hi});
    }
    level = std::move(next);
  }
  return RealIntervalUnion(std::move(level));
}

NormalizedSet normalize_to_unit(const RealIntervalUnion& set) {
  const double lo = set.min();
  const double hi = set.max();
  const double scale = 2.0 / (hi - lo);
  const double shift = -(hi + lo) / (hi - lo);
  AffineMap map{scale, shift};
  std::vector<Interval> out;
  out.reserve(set.size());
  for (const auto& iv : set.intervals()) out.push_back({map.apply(iv.lo), map.apply(iv.hi)});
  // Pin the extreme endpoints exactly.
  out.front().lo = -1.0;
  out.back().hi = 1.0;
  return {RealIntervalUnion(std::move(out)), map};
}

std::vector<Interval> gaps(const RealIntervalUnion& set) {
  std::vector<Interval> out;
  for (std::size_t i = 1; i < set.size(); ++i) out.push_back({set[i - 1].hi, set[i].lo});
  return out;
}

RealIntervalUnion intersect(const RealIntervalUnion& set, Interval window) {
  std::vector<Interval> out;
  for (const auto& iv : set.intervals()) {
    const double lo = std::max(iv.lo, window.lo);
    const double hi = std::min(iv.hi, window.hi);
    if (lo < hi) out.push_back({lo, hi});
  }
  if (out.empty()) {
    std::ostringstream os;
    os << "window [" << window.lo << ", " << window.hi << "] meets the set in at most a point";
    throw ValidationError(os.str());
  }
  return RealIntervalUnion(std::move(out));
}

// ---------------------------------------------------------------------------

DiscretizedCurve::DiscretizedCurve(std::vector<Complex> vertices, bool closed, double grading)
    : vertices_(std::move(vertices)), closed_(closed), grading_(grading) {
  if (vertices_.size() < 8) throw ValidationError("discretized curve needs at least 8 vertices");
  if (!(grading_ >= 1.0)) throw ValidationError("curve grading exponent must be >= 1");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (vertices_[i] == vertices_[i - 1]) {
      throw ValidationError("curve vertices " + std::to_string(i - 1) + " and " + std::to_string(i) +
                            " coincide");
    }
  }
  if (closed_ && vertices_.front() == vertices_.back()) {
    throw ValidationError("closed curve must not repeat its first vertex at the end");
  }
}

double DiscretizedCurve::length() const {
  double s = 0.0;
  const std::size_t nseg = closed_ ? vertices_.size() : vertices_.size() - 1;
  for (std::size_t i = 0; i < nseg; ++i) s += std::abs(vertices_[(i + 1) % vertices_.size()] - vertices_[i]);
  return s;
}

ShapeSet::ShapeSet(std::vector<Shape> components) : components_(std::move(components)) {
  if (components_.empty()) throw ValidationError("shape set must be non-empty");
  for (std::size_t i = 0; i < components_.size(); ++i) {
    std::visit(Overloaded{
                   [&](const Segment& s) {
                     if (s.a == s.b) throw ValidationError("segment " + std::to_string(i) + " is a single point");
                   },
                   [&](const Disk& d) {
                     if (!(d.radius > 0.0)) throw ValidationError("disk " + std::to_string(i) + " needs radius > 0");
                   },
                   [&](const Polygon& p) {
                     if (p.vertices.size() < 3) {
                       throw ValidationError("polygon " + std::to_string(i) + " needs at least 3 vertices");
                     }
                   },
                   [](const auto&) {},
               },
               components_[i]);
  }
  std::vector<std::vector<Polyline>> lines;
  lines.reserve(components_.size());
  for (const auto& s : components_) lines.push_back(boundary_polylines(s));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      for (const auto& p : lines[i]) {
        for (const auto& q : lines[j]) {
          if (polylines_touch(p, q)) {
            throw ValidationError("shape components " + std::to_string(i) + " and " + std::to_string(j) +
                                  " are not disjoint");
          }
        }
      }
    }
  }
}

bool ShapeSet::is_real() const {
  return std::all_of(components_.begin(), components_.end(), [](const Shape& s) {
    if (std::holds_alternative<RealIntervalUnion>(s)) return true;
    if (const auto* seg = std::get_if<Segment>(&s)) return seg->a.imag() == 0.0 && seg->b.imag() == 0.0;
    return false;
  });
}

RealIntervalUnion ShapeSet::to_real() const {
  if (!is_real()) throw ValidationError("shape set is not contained in the real line");
  std::vector<Interval> all;
  for (const auto& s : components_) {
    if (const auto* k = std::get_if<RealIntervalUnion>(&s)) {
      all.insert(all.end(), k->intervals().begin(), k->intervals().end());
    } else {
      const auto& seg = std::get<Segment>(s);
      all.push_back({std::min(seg.a.real(), seg.b.real()), std::max(seg.a.real(), seg.b.real())});
    }
  }
  std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return RealIntervalUnion(std::move(all));
}

double ShapeSet::diameter() const {
  std::vector<Complex> pts;
  for (const auto& s : components_) {
    for (const auto& line : boundary_polylines(s)) pts.insert(pts.end(), line.points.begin(), line.points.end());
  }
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, std::abs(pts[i] - pts[j]));
  }
  return d;
}

double graded_parameter(double t, double grading) {
  const double c = std::pow(2.0, grading - 1.0);
  if (t <= 0.5) return c * std::pow(t, grading);
  return 1.0 - c * std::pow(1.0 - t, grading);
}

DiscretizedCurve discretize_boundary(const Shape& shape, std::size_t m, double grading) {
  if (m < 16) throw ValidationError("boundary discretization needs m >= 16");
  if (!(grading >= 1.0)) throw ValidationError("grading exponent must be >= 1");
  return std::visit(
      Overloaded{
          [](const Segment&) -> DiscretizedCurve {
            throw ValidationError("segments have no interior boundary; use the real-line pipeline");
          },
          [](const RealIntervalUnion&) -> DiscretizedCurve {
            throw ValidationError("interval unions are handled by the real-line pipeline");
          },
          [&](const Disk& d) {
            std::vector<Complex> pts(m);
            for (std::size_t i = 0; i < m; ++i) {
              // Quarter-turn multiples are placed exactly.
              const std::size_t q = 4 * i;
              if (q % m == 0) {
                static constexpr Complex kUnit[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
                pts[i] = d.center + d.radius * kUnit[(q / m) % 4];
              } else {
                pts[i] = d.center + d.radius * std::polar(1.0, 2.0 * std::numbers::pi * double(i) / double(m));
              }
            }
            return DiscretizedCurve(std::move(pts), true, 1.0);
          },
          [&](const Polygon& p) {
            const std::size_t sides = p.vertices.size();
            if (m < 2 * sides) throw ValidationError("too few points for the polygon's sides");
            std::vector<Complex> pts;
            pts.reserve(m);
            for (std::size_t s = 0; s < sides; ++s) {
              const std::size_t k = m / sides + (s < m % sides ? 1 : 0);
              const Complex a = p.vertices[s];
              const Complex b = p.vertices[(s + 1) % sides];
              for (std::size_t i = 0; i < k; ++i) {
                pts.push_back(a + graded_parameter(double(i) / double(k), grading) * (b - a));
              }
            }
            return DiscretizedCurve(std::move(pts), true, grading);
          },
          [&](const DiscretizedCurve& c) {
            std::vector<double> f(m);
            if (c.closed()) {
              for (std::size_t i = 0; i < m; ++i) f[i] = double(i) / double(m);
            } else {
              for (std::size_t i = 0; i < m; ++i) f[i] = graded_parameter(double(i) / double(m - 1), grading);
            }
            return DiscretizedCurve(resample(c.vertices(), c.closed(), f), c.closed(), c.closed() ? 1.0 : grading);
          },
      },
      shape);
}

}  // namespace widom
