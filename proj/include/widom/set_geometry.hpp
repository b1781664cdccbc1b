#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace widom {

using Complex = std::complex<double>;

struct Interval {
  double lo;
  double hi;

  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool operator==(const Interval&) const = default;
};

/// Finite union of disjoint closed real intervals, stored in increasing order.
///
/// Construction validates that every component has positive length and that
/// consecutive components are strictly separated. Touching or overlapping
/// intervals are rejected, never merged.
class RealIntervalUnion {
 public:
  explicit RealIntervalUnion(std::vector<Interval> intervals);

  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }

  double min() const { return intervals_.front().lo; }
  double max() const { return intervals_.back().hi; }
  double diameter() const { return max() - min(); }
  double total_length() const;

  bool contains(double x) const;
  /// Index of the component containing x, or size() when x is not in the set.
  std::size_t component_of(double x) const;
  /// Euclidean distance from a complex point to the set.
  double distance(Complex z) const;

  bool operator==(const RealIntervalUnion&) const = default;

 private:
  std::vector<Interval> intervals_;
};

/// Increasing affine map x -> scale * x + shift.
struct AffineMap {
  double scale = 1.0;
  double shift = 0.0;

  double apply(double x) const { return scale * x + shift; }
  Complex apply(Complex z) const { return scale * z + shift; }
  double invert(double y) const { return (y - shift) / scale; }
  Complex invert(Complex w) const { return (w - shift) / scale; }
};

RealIntervalUnion transform(const RealIntervalUnion& set, const AffineMap& map);

struct CantorSpec {
  double ratio = 1.0 / 3.0;
  int depth = 0;
  Interval base{0.0, 1.0};
};

/// Depth-L iterate of the symmetric Cantor construction: 2^L intervals of length (b-a)*ratio^L.
RealIntervalUnion build_cantor(const CantorSpec& spec);

struct NormalizedSet {
  RealIntervalUnion set;
  AffineMap map;  ///< original -> normalized
};

/// Image of the set under the increasing affine map sending min -> -1 and max -> 1.
NormalizedSet normalize_to_unit(const RealIntervalUnion& set);

/// Open gaps between consecutive components, in increasing order.
std::vector<Interval> gaps(const RealIntervalUnion& set);

/// Intersection with a closed window [lo, hi]. Components that degenerate to a
/// point are dropped. Throws ValidationError if nothing of positive length remains.
RealIntervalUnion intersect(const RealIntervalUnion& set, Interval window);

// ---------------------------------------------------------------------------
// Planar shapes

struct Segment {
  Complex a;
  Complex b;
};

struct Disk {
  Complex center;
  double radius;
};

/// Closed polygon; vertices in either orientation, last vertex not repeated.
struct Polygon {
  std::vector<Complex> vertices;
};

/// Ordered boundary samples of a Jordan curve (closed) or arc (open).
class DiscretizedCurve {
 public:
  DiscretizedCurve(std::vector<Complex> vertices, bool closed, double grading = 1.0);

  std::span<const Complex> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool closed() const { return closed_; }
  double grading() const { return grading_; }
  double length() const;

 private:
  std::vector<Complex> vertices_;
  bool closed_;
  double grading_;
};

using Shape = std::variant<Segment, Disk, Polygon, DiscretizedCurve, RealIntervalUnion>;

/// Union of pairwise disjoint shapes. Disjointness is validated on boundary
/// discretizations only.
class ShapeSet {
 public:
  explicit ShapeSet(std::vector<Shape> components);

  std::span<const Shape> components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  /// True when every component is a segment on the real axis or an interval union.
  bool is_real() const;
  /// Collapses an all-real shape set to an interval union.
  RealIntervalUnion to_real() const;
  double diameter() const;

 private:
  std::vector<Shape> components_;
};

/// m boundary points of a shape. Disks are sampled at uniform angles starting
/// at angle 0; polygon sides get m / #sides points clustered algebraically
/// toward the corners; open arcs are resampled with endpoint clustering.
/// Segments and interval unions are rejected: they belong to the real-line pipeline.
DiscretizedCurve discretize_boundary(const Shape& shape, std::size_t m, double grading = 2.0);

/// Graded position in [0, 1] for a uniform parameter t in [0, 1], clustered
/// symmetrically at both ends: distance to the nearer end is 2^(g-1) * t^g.
double graded_parameter(double t, double grading);

}  // namespace widom
