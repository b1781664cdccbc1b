#include "widom/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include "widom/chebyshev.hpp"
#include "widom/equilibrium.hpp"
#include "widom/errors.hpp"

namespace widom {

namespace {

constexpr double kExtremeFraction = 1e-7;

void check_degree(std::size_t n, const SolverOptions& opts) {
  if (n < 1) throw ValidationError("degree must be at least 1");
  if (n > opts.max_degree) {
    throw ValidationError("degree " + std::to_string(n) + " exceeds the supported maximum " +
                          std::to_string(opts.max_degree));
  }
}

// First-kind Chebyshev points of [lo, hi], ascending.
std::vector<double> chebyshev_points(std::size_t m, double lo, double hi) {
  std::vector<double> x(m);
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  for (std::size_t j = 0; j < m; ++j) {
    x[m - 1 - j] = c + h * std::cos(std::numbers::pi * (double(j) + 0.5) / double(m));
  }
  return x;
}

// Lanczos with full reorthogonalization for the uniform discrete measure on `pts`:
// alpha[k], beta[k+1] of phi_{k+1} = ((s - alpha_k) phi_k - beta_k phi_{k-1}) / beta_{k+1}, phi_0 = 1.
void lanczos(const std::vector<double>& pts, std::size_t n, std::vector<double>& alpha, std::vector<double>& beta) {
  const long N = long(pts.size());
  const Eigen::Map<const Eigen::VectorXd> s(pts.data(), N);
  Eigen::MatrixXd V(N, long(n) + 1);
  V.col(0).setOnes();
  alpha.assign(n, 0.0);
  beta.assign(n + 1, 0.0);
  const double inv_n = 1.0 / double(N);
  for (std::size_t k = 0; k < n; ++k) {
    const long kk = long(k);
    Eigen::VectorXd u = s.cwiseProduct(V.col(kk));
    alpha[k] = inv_n * u.dot(V.col(kk));
    u -= alpha[k] * V.col(kk);
    if (k > 0) u -= beta[k] * V.col(kk - 1);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd c = inv_n * (V.leftCols(kk + 1).transpose() * u);
      u -= V.leftCols(kk + 1) * c;
    }
    beta[k + 1] = std::sqrt(inv_n * u.squaredNorm());
    if (!(beta[k + 1] > 0.0)) throw SolverError("orthogonal basis broke down: too few sample points for the degree");
    V.col(kk + 1) = u / beta[k + 1];
  }
}

// Arnoldi with full reorthogonalization for the uniform discrete measure on complex samples.
Eigen::MatrixXcd arnoldi(const std::vector<Complex>& pts, std::size_t n, std::vector<std::vector<Complex>>& hess) {
  const long N = long(pts.size());
  Eigen::MatrixXcd V(N, long(n) + 1);
  V.col(0).setOnes();
  hess.assign(n, {});
  const double inv_n = 1.0 / double(N);
  for (std::size_t k = 0; k < n; ++k) {
    const long kk = long(k);
    Eigen::VectorXcd u(N);
    for (long i = 0; i < N; ++i) u(i) = pts[std::size_t(i)] * V(i, kk);
    std::vector<Complex> h(k + 2, Complex(0.0, 0.0));
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXcd c = inv_n * (V.leftCols(kk + 1).adjoint() * u);
      u -= V.leftCols(kk + 1) * c;
      for (std::size_t j = 0; j <= k; ++j) h[j] += c(long(j));
    }
    const double norm = std::sqrt(inv_n * u.squaredNorm());
    if (!(norm > 0.0)) throw SolverError("orthogonal basis broke down: too few boundary samples for the degree");
    h[k + 1] = norm;
    V.col(kk + 1) = u / norm;
    hess[k] = std::move(h);
  }
  return V;
}

struct GridPoint {
  double s;
  std::size_t comp;
};

}  // namespace

// ---------------------------------------------------------------------------
// Evaluation

double MonicChebyshev::norm_lo() const { return std::exp(log_lo_); }
double MonicChebyshev::norm_hi() const { return std::exp(log_hi_); }
double MonicChebyshev::bracket() const { return -std::expm1(log_lo_ - log_hi_); }

double MonicChebyshev::eval_q_real(double s, double* dq) const {
  double p_prev = 0.0, p = 1.0, d_prev = 0.0, d = 0.0;
  double acc = coef_[0].real() * p, dacc = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    const double b = beta_[k + 1];
    const double p_next = ((s - alpha_[k]) * p - beta_[k] * p_prev) / b;
    if (dq) {
      const double d_next = ((s - alpha_[k]) * d + p - beta_[k] * d_prev) / b;
      d_prev = d;
      d = d_next;
      dacc += coef_[k + 1].real() * d;
    }
    p_prev = p;
    p = p_next;
    acc += coef_[k + 1].real() * p;
  }
  if (dq) *dq = dacc;
  return acc;
}

Complex MonicChebyshev::eval_q(Complex zeta, Complex* dq) const {
  if (real_) {
    if (zeta.imag() == 0.0) {
      double d = 0.0;
      const double v = eval_q_real(zeta.real(), dq ? &d : nullptr);
      if (dq) *dq = d;
      return v;
    }
    Complex p_prev = 0.0, p = 1.0, d_prev = 0.0, d = 0.0;
    Complex acc = coef_[0] * p, dacc = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      const double b = beta_[k + 1];
      const Complex p_next = ((zeta - alpha_[k]) * p - beta_[k] * p_prev) / b;
      const Complex d_next = ((zeta - alpha_[k]) * d + p - beta_[k] * d_prev) / b;
      d_prev = d;
      d = d_next;
      p_prev = p;
      p = p_next;
      acc += coef_[k + 1] * p;
      dacc += coef_[k + 1] * d;
    }
    if (dq) *dq = dacc;
    return acc;
  }
  std::vector<Complex> phi(n_ + 1), dphi(n_ + 1);
  phi[0] = 1.0;
  dphi[0] = 0.0;
  Complex acc = coef_[0], dacc = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    Complex v = zeta * phi[k], dv = phi[k] + zeta * dphi[k];
    for (std::size_t j = 0; j <= k; ++j) {
      v -= hess_[k][j] * phi[j];
      dv -= hess_[k][j] * dphi[j];
    }
    phi[k + 1] = v / hess_[k][k + 1];
    dphi[k + 1] = dv / hess_[k][k + 1];
    acc += coef_[k + 1] * phi[k + 1];
    dacc += coef_[k + 1] * dphi[k + 1];
  }
  if (dq) *dq = dacc;
  return acc;
}

Complex MonicChebyshev::operator()(Complex z) const {
  return std::exp(log_lead_) * eval_q((z - center_) / scale_);
}

double MonicChebyshev::operator()(double x) const {
  if (!real_) return (*this)(Complex(x, 0.0)).real();
  return std::exp(log_lead_) * eval_q_real((x - center_.real()) / scale_);
}

double MonicChebyshev::log_abs(Complex z) const {
  return log_lead_ + std::log(std::abs(eval_q((z - center_) / scale_)));
}

Complex eval_poly(const MonicChebyshev& t, Complex z) { return t(z); }

std::vector<double> MonicChebyshev::chebyshev_coefficients() const {
  if (!real_) throw ValidationError("Chebyshev coefficients are defined for real sets only");
  // Chebyshev-series coefficients of every phi_k via the three-term recurrence.
  std::vector<std::vector<double>> phi(n_ + 1, std::vector<double>(n_ + 1, 0.0));
  phi[0][0] = 1.0;
  for (std::size_t k = 0; k < n_; ++k) {
    std::vector<double> v(n_ + 1, 0.0);
    for (std::size_t j = 0; j <= k; ++j) {
      const double c = phi[k][j];
      if (c == 0.0) continue;
      if (j == 0) {
        v[1] += c;
      } else {
        v[j + 1] += 0.5 * c;
        v[j - 1] += 0.5 * c;
      }
    }
    for (std::size_t j = 0; j <= k + 1; ++j) {
      v[j] -= alpha_[k] * phi[k][j];
      if (k > 0) v[j] -= beta_[k] * phi[k - 1][j];
      v[j] /= beta_[k + 1];
    }
    phi[k + 1] = std::move(v);
  }
  const double lead = std::exp(log_lead_);
  std::vector<double> out(n_ + 1, 0.0);
  for (std::size_t k = 0; k <= n_; ++k) {
    for (std::size_t j = 0; j <= n_; ++j) out[j] += lead * coef_[k].real() * phi[k][j];
  }
  return out;
}

std::vector<Complex> MonicChebyshev::power_coefficients() const {
  // Monomial coefficients of phi_k in zeta.
  std::vector<std::vector<Complex>> phi(n_ + 1, std::vector<Complex>(n_ + 1, 0.0));
  phi[0][0] = 1.0;
  for (std::size_t k = 0; k < n_; ++k) {
    std::vector<Complex> v(n_ + 1, 0.0);
    for (std::size_t j = 0; j <= k; ++j) v[j + 1] = phi[k][j];
    for (std::size_t i = 0; i <= k; ++i) {
      const Complex h = hess_[k][i];
      if (h == 0.0) continue;
      for (std::size_t j = 0; j <= i; ++j) v[j] -= h * phi[i][j];
    }
    for (auto& x : v) x /= hess_[k][k + 1];
    phi[k + 1] = std::move(v);
  }
  // T(z) = L q(zeta); coefficients in powers of (z - center) carry scale^-j.
  const double lead = std::exp(log_lead_);
  std::vector<Complex> shifted(n_ + 1, 0.0);
  for (std::size_t k = 0; k <= n_; ++k) {
    for (std::size_t j = 0; j <= n_; ++j) shifted[j] += coef_[k] * phi[k][j];
  }
  for (std::size_t j = 0; j <= n_; ++j) shifted[j] *= lead * std::pow(scale_, -double(j));
  // Taylor shift from powers of (z - center) to powers of z.
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = n_ - 1; j + 1 > i; --j) shifted[j] -= center_ * shifted[j + 1];
  }
  return shifted;
}

// ---------------------------------------------------------------------------
// Real sets: discrete Remez exchange in the orthonormal basis

MonicChebyshev solve_real_monic(const RealIntervalUnion& set, std::size_t n, const SolverOptions& opts) {
  check_degree(n, opts);
  if (opts.refinement_rounds < 0 || opts.max_exchange_iterations < 1 || !(opts.real_bracket_tol > 0.0)) {
    throw ValidationError("solver options must be positive");
  }
  const std::size_t per = opts.grid_per_interval ? opts.grid_per_interval : 30 * n + 200;
  if (per < 8) throw ValidationError("grid points per interval must be at least 8");

  MonicChebyshev T;
  T.n_ = n;
  T.real_ = true;
  const double center = 0.5 * (set.min() + set.max());
  const double half = 0.5 * set.diameter();
  T.center_ = center;
  T.scale_ = half;
  auto to_s = [&](double x) { return (x - center) / half; };

  std::vector<Interval> comps;
  for (const auto& iv : set.intervals()) comps.push_back({to_s(iv.lo), to_s(iv.hi)});
  comps.front().lo = -1.0;
  comps.back().hi = 1.0;

  // Basis: orthonormal for the uniform measure on first-kind Chebyshev points of every component.
  {
    std::vector<double> pts;
    const std::size_t mb = 4 * n + 64;
    for (const auto& c : comps) {
      const auto p = chebyshev_points(mb, c.lo, c.hi);
      pts.insert(pts.end(), p.begin(), p.end());
    }
    lanczos(pts, n, T.alpha_, T.beta_);
  }
  T.hess_.assign(n, {});
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Complex> h(k + 2, 0.0);
    if (k > 0) h[k - 1] = T.beta_[k];
    h[k] = T.alpha_[k];
    h[k + 1] = T.beta_[k + 1];
    T.hess_[k] = std::move(h);
  }
  T.log_lead_ = double(n) * std::log(half);
  for (std::size_t k = 1; k <= n; ++k) T.log_lead_ += std::log(T.beta_[k]);
  T.coef_.assign(n + 1, 0.0);
  T.coef_[n] = 1.0;

  std::vector<GridPoint> grid;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (double s : cheb::lobatto_points(per, comps[c].lo, comps[c].hi)) grid.push_back({s, c});
  }

  // Initial reference: equilibrium quantiles j / n, which are the exact alternation
  // points for a single interval.
  std::vector<double> ref_s(n + 1);
  try {
    const auto eq = solve_real_equilibrium(set);
    for (std::size_t j = 0; j <= n; ++j) {
      const double target = double(j) / double(n);
      double lo = set.min(), hi = set.max();
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eq.cumulative(mid) < target ? lo : hi) = mid;
      }
      ref_s[j] = to_s(j == 0 ? set.min() : (j == n ? set.max() : hi));
    }
  } catch (const SolverError&) {
    for (std::size_t j = 0; j <= n; ++j) ref_s[j] = grid[j * (grid.size() - 1) / n].s;
  }

  const std::size_t nb = n;  // free coefficients
  std::vector<double> basis(n + 1);
  auto basis_at = [&](double s) {
    double p_prev = 0.0, p = 1.0;
    basis[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double next = ((s - T.alpha_[k]) * p - T.beta_[k] * p_prev) / T.beta_[k + 1];
      p_prev = p;
      p = next;
      basis[k + 1] = p;
    }
  };
  auto q_at = [&](double s) { return T.eval_q_real(s); };

  auto nearest_index = [&](double s) {
    auto it = std::lower_bound(grid.begin(), grid.end(), s, [](const GridPoint& g, double v) { return g.s < v; });
    std::size_t i = std::size_t(it - grid.begin());
    if (i == grid.size()) return grid.size() - 1;
    if (i > 0 && std::abs(grid[i - 1].s - s) <= std::abs(grid[i].s - s)) return i - 1;
    return i;
  };

  double levelled = 0.0;
  std::vector<double> qv;
  std::size_t total_iterations = 0;

  auto remez = [&]() {
    std::vector<std::size_t> ref(n + 1);
    for (std::size_t j = 0; j <= n; ++j) ref[j] = nearest_index(ref_s[j]);
    for (std::size_t j = 1; j <= n; ++j) ref[j] = std::max(ref[j], ref[j - 1] + 1);
    if (ref[n] >= grid.size()) {
      ref[n] = grid.size() - 1;
      for (std::size_t j = n; j-- > 0;) ref[j] = std::min(ref[j], ref[j + 1] - 1);
    }
    qv.assign(grid.size(), 0.0);
    for (int it = 0; it < opts.max_exchange_iterations; ++it) {
      ++total_iterations;
      Eigen::MatrixXd A(long(n) + 1, long(n) + 1);
      Eigen::VectorXd rhs(long(n) + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        basis_at(grid[ref[i]].s);
        for (std::size_t k = 0; k < nb; ++k) A(long(i), long(k)) = basis[k];
        A(long(i), long(nb)) = (i % 2 == 0) ? -1.0 : 1.0;
        rhs(long(i)) = -basis[n];
      }
      const Eigen::VectorXd x = A.partialPivLu().solve(rhs);
      if (!x.allFinite()) throw SolverError("exchange system is singular at degree " + std::to_string(n));
      for (std::size_t k = 0; k < nb; ++k) T.coef_[k] = x(long(k));
      levelled = std::abs(x(long(nb)));

      double top = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        qv[i] = q_at(grid[i].s);
        top = std::max(top, std::abs(qv[i]));
      }
      // One candidate per run of constant sign: the point of largest |q|.
      std::vector<std::size_t> cand;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const bool pos = qv[i] >= 0.0;
        if (cand.empty() || (qv[cand.back()] >= 0.0) != pos) {
          cand.push_back(i);
        } else if (std::abs(qv[i]) > std::abs(qv[cand.back()])) {
          cand.back() = i;
        }
      }
      while (cand.size() > n + 1) {
        if (cand.size() == n + 2) {
          if (std::abs(qv[cand.front()]) < std::abs(qv[cand.back()])) {
            cand.erase(cand.begin());
          } else {
            cand.pop_back();
          }
          continue;
        }
        std::size_t w = 0;
        for (std::size_t i = 1; i < cand.size(); ++i) {
          if (std::abs(qv[cand[i]]) < std::abs(qv[cand[w]])) w = i;
        }
        if (w == 0 || w + 1 == cand.size()) {
          cand.erase(cand.begin() + long(w));
          continue;
        }
        // Removing an interior point leaves two equal-sign neighbours; drop the smaller one too.
        const std::size_t other = std::abs(qv[cand[w - 1]]) < std::abs(qv[cand[w + 1]]) ? w - 1 : w + 1;
        cand.erase(cand.begin() + long(std::max(w, other)));
        cand.erase(cand.begin() + long(std::min(w, other)));
      }
      if (cand.size() < n + 1) break;  // cannot happen for a levelled solution; keep the current one
      const bool same = cand == ref;
      ref = cand;
      if (same || top - levelled <= 1e-14 * top) break;
    }
    for (std::size_t j = 0; j <= n; ++j) ref_s[j] = grid[ref[j]].s;
  };

  // Local maxima of |q| on the grid, polished to roots of q' inside components.
  auto polished_extrema = [&]() {
    std::vector<double> out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double a = std::abs(qv[i]);
      const bool left_same = i > 0 && grid[i - 1].comp == grid[i].comp;
      const bool right_same = i + 1 < grid.size() && grid[i + 1].comp == grid[i].comp;
      if (left_same && std::abs(qv[i - 1]) > a) continue;
      if (right_same && std::abs(qv[i + 1]) > a) continue;
      if (!left_same || !right_same) {
        out.push_back(grid[i].s);
        continue;
      }
      double lo = grid[i - 1].s, hi = grid[i + 1].s, dlo = 0.0, dhi = 0.0;
      T.eval_q_real(lo, &dlo);
      T.eval_q_real(hi, &dhi);
      if (!(dlo * dhi < 0.0)) {
        out.push_back(grid[i].s);
        continue;
      }
      auto dq = [&](double s) {
        double d = 0.0;
        T.eval_q_real(s, &d);
        return d;
      };
      boost::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(dq, lo, hi, dlo, dhi,
                                                       boost::math::tools::eps_tolerance<double>(52), iters);
      const double root = 0.5 * (r.first + r.second);
      out.push_back(std::abs(q_at(root)) >= a ? root : grid[i].s);
    }
    // Neighbouring grid maxima of equal height polish to the same critical point.
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return y - x <= 1e-10; }), out.end());
    return out;
  };

  remez();
  for (int round = 0; round < opts.refinement_rounds; ++round) {
    auto ext = polished_extrema();
    std::vector<GridPoint> added;
    for (double s : ext) {
      auto it = std::lower_bound(grid.begin(), grid.end(), s, [](const GridPoint& g, double v) { return g.s < v; });
      if (it != grid.end() && it->s == s) continue;
      const std::size_t comp = (it == grid.end() ? grid.back().comp : it->comp);
      added.push_back({s, comp});
    }
    if (added.empty()) break;
    grid.insert(grid.end(), added.begin(), added.end());
    std::sort(grid.begin(), grid.end(), [](const GridPoint& a, const GridPoint& b) { return a.s < b.s; });
    remez();
  }

  // Certification.
  const auto ext = polished_extrema();
  double hi = 0.0;
  std::vector<std::pair<double, double>> ext_vals;
  for (double s : ext) {
    const double v = std::abs(q_at(s));
    ext_vals.push_back({s, v});
    hi = std::max(hi, v);
  }
  for (const auto& c : comps) {
    for (double s : cheb::lobatto_points(10 * per, c.lo, c.hi)) hi = std::max(hi, std::abs(q_at(s)));
  }
  T.log_lo_ = T.log_lead_ + std::log(levelled);
  T.log_hi_ = T.log_lead_ + std::log(hi);
  for (const auto& [s, v] : ext_vals) {
    if (v >= hi * (1.0 - kExtremeFraction)) T.extremes_.push_back(center + half * s);
  }
  T.iterations_ = total_iterations;
  if (!(T.bracket() <= opts.real_bracket_tol)) {
    throw SolverError("exchange did not meet the norm bracket at degree " + std::to_string(n) +
                      " (relative width " + std::to_string(T.bracket()) + ")");
  }
  return T;
}

// ---------------------------------------------------------------------------
// Curves: Lawson iteration in the Arnoldi basis

MonicChebyshev solve_complex_monic(const std::vector<Shape>& components, std::size_t n, const SolverOptions& opts,
                                   std::optional<double> log_capacity) {
  check_degree(n, opts);
  if (components.empty()) throw ValidationError("no components given");
  if (opts.irls_exponents.empty() || opts.max_irls_iterations < 1 || !(opts.complex_bracket_tol > 0.0)) {
    throw ValidationError("solver options must be positive");
  }
  const std::size_t m = opts.boundary_samples ? opts.boundary_samples : std::max<std::size_t>(32 * n, 512);

  std::vector<Complex> z;
  std::vector<Complex> z_fine;
  for (const auto& shape : components) {
    const auto c = discretize_boundary(shape, m, 1.0);
    z.insert(z.end(), c.vertices().begin(), c.vertices().end());
    const auto f = discretize_boundary(shape, 4 * m, 1.0);
    z_fine.insert(z_fine.end(), f.vertices().begin(), f.vertices().end());
  }
  if (z.size() < 8 * n) throw ValidationError("fewer than 8 n boundary samples");

  MonicChebyshev T;
  T.n_ = n;
  T.real_ = false;
  Complex center = std::accumulate(z.begin(), z.end(), Complex(0.0, 0.0)) / double(z.size());
  double scale = 0.0;
  for (auto p : z) scale = std::max(scale, std::abs(p - center));
  // Round tiny centroid offsets produced by summation of symmetric samples.
  if (std::abs(center) < 1e-13 * scale) center = 0.0;
  T.center_ = center;
  T.scale_ = scale;

  std::vector<Complex> zeta(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) zeta[i] = (z[i] - center) / scale;
  const Eigen::MatrixXcd V = arnoldi(zeta, n, T.hess_);
  T.log_lead_ = double(n) * std::log(scale);
  for (std::size_t k = 0; k < n; ++k) T.log_lead_ += std::log(T.hess_[k][k + 1].real());

  const long N = long(z.size());
  const Eigen::MatrixXcd B = V.leftCols(long(n));
  const Eigen::VectorXcd top = V.col(long(n));
  Eigen::VectorXd w = Eigen::VectorXd::Constant(N, 1.0 / double(N));

  double best_lo = 0.0;
  double best_hi = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd best_c = Eigen::VectorXcd::Zero(long(n));
  double exponent = opts.irls_exponents.front();
  int stagnant = 0;
  double last_hi = best_hi;
  double last_lo = 0.0;
  std::size_t iterations = 0;
  for (int it = 0; it < opts.max_irls_iterations; ++it) {
    ++iterations;
    if (std::size_t(it) < opts.irls_exponents.size()) exponent = opts.irls_exponents[std::size_t(it)];
    exponent = std::min(exponent, opts.irls_exponent_cap);
    const Eigen::VectorXd sw = w.cwiseSqrt();
    const Eigen::MatrixXcd Bw = sw.asDiagonal() * B;
    const Eigen::VectorXcd rhs = -(sw.asDiagonal() * top);
    const Eigen::VectorXcd c = Bw.colPivHouseholderQr().solve(rhs);
    const Eigen::VectorXcd r = top + B * c;
    const Eigen::VectorXd ar = r.cwiseAbs();
    const double lo = std::sqrt(w.dot(ar.cwiseAbs2()));
    const double hi = ar.maxCoeff();
    best_lo = std::max(best_lo, lo);
    if (hi < best_hi) {
      best_hi = hi;
      best_c = c;
    }
    if (best_hi - best_lo <= 0.25 * opts.complex_bracket_tol * best_hi) break;
    if (std::abs(last_hi - hi) <= 1e-12 * hi && std::abs(last_lo - lo) <= 1e-12 * lo) {
      if (++stagnant >= 10) {
        if (exponent >= opts.irls_exponent_cap) break;
        exponent = std::min(exponent + 1.0, opts.irls_exponent_cap);
        stagnant = 0;
      }
    } else {
      stagnant = 0;
    }
    last_hi = hi;
    last_lo = lo;
    Eigen::VectorXd nw = w.cwiseProduct(ar.array().pow(exponent).matrix());
    const double total = nw.sum();
    if (!(total > 0.0) || !nw.allFinite()) break;
    w = nw / total;
  }

  T.coef_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) T.coef_[k] = best_c(long(k));
  T.coef_[n] = 1.0;
  T.iterations_ = iterations;

  double hi = best_hi;
  std::vector<std::pair<Complex, double>> vals;
  vals.reserve(z_fine.size());
  for (auto p : z_fine) {
    const double v = std::abs(T.eval_q((p - center) / scale));
    vals.push_back({p, v});
    hi = std::max(hi, v);
  }
  double log_lo = T.log_lead_ + std::log(best_lo);
  if (log_capacity) log_lo = std::max(log_lo, double(n) * *log_capacity);
  T.log_lo_ = log_lo;
  T.log_hi_ = T.log_lead_ + std::log(hi);
  for (const auto& [p, v] : vals) {
    if (v >= hi * (1.0 - kExtremeFraction)) T.extremes_.push_back(p);
  }
  if (!(T.bracket() <= opts.complex_bracket_tol)) {
    throw SolverError("reweighted least squares did not meet the norm bracket at degree " + std::to_string(n) +
                      " (relative width " + std::to_string(T.bracket()) + ")");
  }
  return T;
}

}  // namespace widom
