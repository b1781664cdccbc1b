#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "widom/set_geometry.hpp"

namespace widom {

/// Equilibrium measure of a finite union of real intervals.
///
/// The density is |Q(x)| / (pi sqrt|R(x)|) with R(x) = prod_j (x - a_j)(x - b_j)
/// and Q monic of degree (#intervals - 1), fixed by requiring the integral of
/// Q / sqrt|R| over every gap to vanish. Internally everything is computed in
/// the hull variable s = (x - c) / h that maps [min K, max K] onto [-1, 1].
///
/// On component j the measure is written as f_j(theta) d theta with
/// s = c_j + h_j cos(theta); f_j is smooth and is stored as a cosine series,
/// which gives closed forms for the logarithmic potential everywhere in the plane.
class EquilibriumReal {
 public:
  static constexpr int kDefaultQuadOrder = 64;

  const RealIntervalUnion& intervals() const { return set_; }

  /// Coefficients of Q in the Chebyshev basis of the hull variable s (Q monic in s).
  /// Reporting only: evaluation goes through the zeros, which are well conditioned.
  std::vector<double> q_coeffs() const;
  /// Zeros of Q in the original variable, one per gap, increasing.
  std::vector<double> q_roots() const;
  /// Q evaluated in the original variable and normalized to be monic in x.
  double q_value(double x) const;

  double robin() const { return robin_; }
  double capacity() const;
  double log_capacity() const { return -robin_; }
  int quad_order() const { return quad_order_; }

  double mass() const;
  double component_mass(std::size_t j) const;
  /// Density of the measure with respect to dx (zero off the set).
  double density(double x) const;
  /// mu((-inf, x]).
  double cumulative(double x) const;

  /// Logarithmic potential: integral of log|z - t| d mu(t).
  double potential(Complex z) const;
  /// Integral of log(z - t) d mu(t), principal branch; requires Im z >= 0.
  Complex log_potential(Complex z) const;

  /// max |potential(x) + robin| over a Chebyshev-Lobatto probe grid on every component.
  double frostman_deviation(std::size_t probes_per_component = 33) const;

 private:
  friend EquilibriumReal solve_real_equilibrium(const RealIntervalUnion&, int);

  EquilibriumReal(RealIntervalUnion set) : set_(std::move(set)) {}

  double to_unit(double x) const { return (x - hull_center_) / hull_half_; }
  Complex unit_log_potential(Complex s) const;

  RealIntervalUnion set_;
  double hull_center_ = 0.0;
  double hull_half_ = 1.0;
  std::vector<Interval> unit_;
  std::vector<double> roots_;  ///< zeros of Q in the hull variable
  std::vector<std::vector<double>> cosine_;  ///< per component: f_j(theta) = sum_k cosine_[j][k] cos(k theta)
  double robin_ = 0.0;
  int quad_order_ = kDefaultQuadOrder;
};

/// Equilibrium measure of an interval union; see EquilibriumReal.
/// Throws SolverError (with the gap index) on a nearly closed gap, and when the
/// mass does not converge to 1 within 1e-8 after three doublings of quad_order.
EquilibriumReal solve_real_equilibrium(const RealIntervalUnion& set, int quad_order = EquilibriumReal::kDefaultQuadOrder);

namespace detail {
struct PanelSet;
}

struct SymmOptions {
  std::size_t nodes_per_panel = 16;
  std::size_t disk_panels = 16;
  /// Dyadic panel levels toward each polygon corner, in the graded parameter.
  std::size_t corner_levels = 2;
  /// Algebraic grading exponent toward polygon corners and arc endpoints.
  double corner_grading = 3.0;
};

/// Equilibrium measure of a union of Jordan curves/arcs as a single-layer
/// density sampled at Gauss-Legendre nodes of boundary panels.
class BoundaryDensity {
 public:
  std::span<const Complex> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> sigma() const { return sigma_; }
  double robin() const { return robin_; }
  double capacity() const;
  double log_capacity() const { return -robin_; }
  double mass() const;

  /// Integral of log|z - t| d mu(t), with near-boundary product integration.
  double potential(Complex z) const;
  /// max |potential + robin| at boundary points between the collocation nodes.
  double frostman_deviation() const;

 private:
  friend BoundaryDensity solve_symm(const std::vector<Shape>&, const SymmOptions&);
  friend BoundaryDensity solve_symm(const std::vector<DiscretizedCurve>&, const SymmOptions&);
  static BoundaryDensity solve(std::shared_ptr<const detail::PanelSet> panels, Complex center, double scale);

  std::shared_ptr<const detail::PanelSet> panels_;
  Complex center_{};
  double scale_ = 1.0;  ///< panels live in the frame (z - center) * scale
  std::vector<Complex> nodes_;
  std::vector<double> weights_;
  std::vector<double> sigma_;
  double robin_ = 0.0;
};

/// First-kind (Symm) single-layer equation: potential constant on the boundary,
/// total mass one. Accepts disks, polygons and discretized curves/arcs;
/// geometry is translated and scaled to unit diameter before solving.
BoundaryDensity solve_symm(const std::vector<Shape>& components, const SymmOptions& options = {});
BoundaryDensity solve_symm(const std::vector<DiscretizedCurve>& curves, const SymmOptions& options = {});

double capacity(const EquilibriumReal& eq);
double capacity(const BoundaryDensity& eq);

/// Green function of the complement with pole at infinity; zero on the set.
double green_eval(const EquilibriumReal& eq, Complex z);
double green_eval(const BoundaryDensity& eq, Complex z);

/// Complex Green function: integral of log(z - t) d mu(t) + robin, arguments in [0, pi].
/// Its real part is green_eval. Throws ValidationError for Im z < 0.
Complex green_complex(const EquilibriumReal& eq, Complex z);

}  // namespace widom
