#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "widom/set_geometry.hpp"

namespace widom {

struct SolverOptions {
  /// Remez grid points per component; 0 selects 30 n + 200.
  std::size_t grid_per_interval = 0;
  int refinement_rounds = 3;
  int max_exchange_iterations = 200;
  double real_bracket_tol = 1e-6;
  double complex_bracket_tol = 1e-4;
  /// Lawson weight exponents by iteration; the last entry repeats.
  std::vector<double> irls_exponents{1.0, 1.0, 2.0};
  double irls_exponent_cap = 3.0;
  int max_irls_iterations = 20000;
  /// Boundary samples per component for the complex solver; 0 selects max(32 n, 512).
  std::size_t boundary_samples = 0;
  std::size_t max_degree = 200;
};

/// Monic Chebyshev polynomial T_n with a bracket on its sup norm.
///
/// T_n = L * q where q = phi_n + sum_{k<n} c_k phi_k in a basis phi_k of
/// polynomials orthonormal on a sample set of K, in the normalized variable
/// zeta = (z - center) / scale. The basis is generated by its Hessenberg
/// recurrence (three-term for real sets), so q is accurate on K even when the
/// monomial or hull-Chebyshev coefficients of T_n span many orders of magnitude.
/// L is kept as a logarithm.
class MonicChebyshev {
 public:
  std::size_t degree() const { return n_; }
  bool is_real() const { return real_; }
  Complex center() const { return center_; }
  double scale() const { return scale_; }

  double log_norm_lo() const { return log_lo_; }
  double log_norm_hi() const { return log_hi_; }
  double norm_lo() const;
  double norm_hi() const;
  /// (norm_hi - norm_lo) / norm_hi.
  double bracket() const;
  /// log L, with T_n = L * q.
  double log_leading_scale() const { return log_lead_; }

  /// Points where |T_n| >= norm_hi * (1 - 1e-7).
  const std::vector<Complex>& extremes() const { return extremes_; }
  std::size_t iterations() const { return iterations_; }

  Complex operator()(Complex z) const;
  double operator()(double x) const;
  /// log |T_n(z)| without forming L.
  double log_abs(Complex z) const;

  /// Coefficients of q in the orthonormal basis; the last one is 1.
  const std::vector<Complex>& basis_coefficients() const { return coef_; }
  /// Real sets: T_n(x) = sum_k a_k T_k((x - center) / scale), with a_n = scale^n 2^(1-n).
  std::vector<double> chebyshev_coefficients() const;
  /// Ascending monomial coefficients in the original variable. Reconstructed
  /// from the recurrence; meaningful for moderate n only.
  std::vector<Complex> power_coefficients() const;

 private:
  friend MonicChebyshev solve_real_monic(const RealIntervalUnion&, std::size_t, const SolverOptions&);
  friend MonicChebyshev solve_complex_monic(const std::vector<Shape>&, std::size_t, const SolverOptions&,
                                            std::optional<double>);

  /// q and its derivative with respect to zeta.
  Complex eval_q(Complex zeta, Complex* dq = nullptr) const;
  double eval_q_real(double s, double* dq = nullptr) const;

  std::size_t n_ = 0;
  bool real_ = true;
  Complex center_{};
  double scale_ = 1.0;
  std::vector<std::vector<Complex>> hess_;  ///< column k holds h_{0..k+1, k}
  std::vector<double> alpha_, beta_;         ///< real sets: three-term recurrence
  std::vector<Complex> coef_;
  double log_lead_ = 0.0;
  double log_lo_ = 0.0;
  double log_hi_ = 0.0;
  std::vector<Complex> extremes_;
  std::size_t iterations_ = 0;
};

/// Monic Chebyshev polynomial of an interval union: discrete Remez exchange on a
/// clustered grid, refined with polished local extrema of |T_n|.
/// norm_lo is the levelled error of the final reference (a lower bound for the
/// optimal norm); norm_hi is the maximum over polished extrema and a 10x finer
/// verification grid. Throws SolverError when the bracket misses real_bracket_tol.
MonicChebyshev solve_real_monic(const RealIntervalUnion& set, std::size_t n, const SolverOptions& options = {});

/// Monic Chebyshev polynomial of a union of disks, polygons and curves by
/// Lawson-type iteratively reweighted least squares on boundary samples.
/// norm_lo is the best weighted least-squares bound, raised to capacity^n when
/// log_capacity is given; norm_hi is the maximum over a 4x finer boundary sampling.
/// Segments and interval unions are rejected in favour of solve_real_monic.
MonicChebyshev solve_complex_monic(const std::vector<Shape>& components, std::size_t n,
                                   const SolverOptions& options = {},
                                   std::optional<double> log_capacity = std::nullopt);

Complex eval_poly(const MonicChebyshev& t, Complex z);

}  // namespace widom
