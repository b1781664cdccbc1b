#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "widom/chebyshev.hpp"
#include "widom/equilibrium.hpp"
#include "widom/errors.hpp"

namespace widom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMassTarget = 1e-10;
constexpr double kMassFailure = 1e-8;
constexpr double kMinGapFraction = 1e-8;
constexpr int kMaxDoublings = 3;

// log of prod_{e in ends, e not excluded} |s - e|
double log_abs_product(double s, std::span<const double> ends, std::size_t skip1, std::size_t skip2) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    if (i == skip1 || i == skip2) continue;
    acc += std::log(std::abs(s - ends[i]));
  }
  return acc;
}

// +0.0 imaginary part so the principal square roots land on the upper sheet.
Complex upper(Complex z) { return z.imag() == 0.0 ? Complex(z.real(), 0.0) : z; }

// Exterior Joukowski variable of tau with |w| >= 1 and Im w >= 0 for Im tau >= 0.
Complex joukowski_inverse(Complex tau) {
  tau = upper(tau);
  return tau + std::sqrt(tau - 1.0) * std::sqrt(tau + 1.0);
}

}  // namespace

EquilibriumReal solve_real_equilibrium(const RealIntervalUnion& set, int quad_order) {
  if (quad_order < 32) throw ValidationError("quad_order must be at least 32");
  EquilibriumReal eq(set);
  eq.hull_center_ = 0.5 * (set.min() + set.max());
  eq.hull_half_ = 0.5 * set.diameter();

  const std::size_t m = set.size();
  eq.unit_.reserve(m);
  std::vector<double> ends;
  ends.reserve(2 * m);
  for (const auto& iv : set.intervals()) {
    eq.unit_.push_back({eq.to_unit(iv.lo), eq.to_unit(iv.hi)});
    ends.push_back(eq.unit_.back().lo);
    ends.push_back(eq.unit_.back().hi);
  }
  eq.unit_.front().lo = -1.0;
  eq.unit_.back().hi = 1.0;
  ends.front() = -1.0;
  ends.back() = 1.0;

  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double gap = eq.unit_[j + 1].lo - eq.unit_[j].hi;
    if (gap < kMinGapFraction * 2.0) {
      throw SolverError("gap " + std::to_string(j) + " is nearly closed (relative width " +
                            std::to_string(gap / 2.0) + "); merge the neighbouring intervals",
                        j);
    }
  }

  const std::size_t d = m - 1;  // degree of Q
  int order = quad_order;
  double mass = 0.0;
  for (int attempt = 0; attempt <= kMaxDoublings; ++attempt, order *= 2) {
    const std::size_t M = static_cast<std::size_t>(order);
    std::vector<double> cos_theta(M);
    for (std::size_t l = 0; l < M; ++l) cos_theta[l] = std::cos((double(l) + 0.5) * kPi / double(M));
    std::vector<double> dct(M * M);
    for (std::size_t k = 0; k < M; ++k) {
      for (std::size_t l = 0; l < M; ++l) dct[k * M + l] = std::cos(double(k) * (double(l) + 0.5) * kPi / double(M));
    }

    // Gap conditions: int_gap Q / sqrt|R| = 0. Q is written as
    //   Q(s) = omega(s) + sum_k beta_k omega(s) / (s - g_k),  omega(s) = prod_k (s - g_k),
    // with centres g_k inside the gaps. The system is diagonally dominant, unlike a
    // power or Chebyshev basis on sets of small capacity. Two passes: the second
    // re-centres on the zeros found by the first.
    std::vector<double> roots(d);
    for (std::size_t j = 0; j < d; ++j) roots[j] = 0.5 * (eq.unit_[j].hi + eq.unit_[j + 1].lo);
    for (int pass = 0; pass < 2 && d > 0; ++pass) {
      const std::vector<double> centres = roots;
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(long(d), long(d));
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(long(d));
      std::vector<double> log_mag(M), sign(M), s_nodes(M);
      for (std::size_t j = 0; j < d; ++j) {
        const double c = 0.5 * (eq.unit_[j].hi + eq.unit_[j + 1].lo);
        const double h = 0.5 * (eq.unit_[j + 1].lo - eq.unit_[j].hi);
        double row_max = -std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < M; ++l) {
          double s = c + h * cos_theta[l];
          s_nodes[l] = s;
          double lm = -0.5 * log_abs_product(s, ends, 2 * j + 1, 2 * j + 2);
          double sg = 1.0;
          for (double g : centres) {
            lm += std::log(std::abs(s - g));
            if (s < g) sg = -sg;
          }
          log_mag[l] = lm;
          sign[l] = sg;
          row_max = std::max(row_max, lm);
        }
        for (std::size_t l = 0; l < M; ++l) {
          const double s = s_nodes[l];
          const double base = sign[l] * std::exp(log_mag[l] - row_max);
          if (base == 0.0) continue;
          rhs(long(j)) -= base;
          for (std::size_t k = 0; k < d; ++k) A(long(j), long(k)) += base / (s - centres[k]);
        }
        const double scale = std::abs(A(long(j), long(j)));
        if (scale > 0.0) {
          A.row(long(j)) /= scale;
          rhs(long(j)) /= scale;
        }
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      const Eigen::VectorXd beta = lu.solve(rhs);
      if (!beta.allFinite() || (A * beta - rhs).norm() > 1e-8 * (1.0 + rhs.norm())) {
        throw SolverError("gap-polynomial system is numerically singular");
      }
      auto q_at = [&](double s) {
        double acc = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
          if (s == centres[k]) s = std::nextafter(s, 2.0);
          acc += beta(long(k)) / (s - centres[k]);
        }
        double sg = 1.0;
        for (double g : centres) {
          if (s < g) sg = -sg;
        }
        return sg * acc;  // sign of Q; magnitude irrelevant for bracketing
      };
      for (std::size_t j = 0; j < d; ++j) {
        double lo = eq.unit_[j].hi, hi = eq.unit_[j + 1].lo;
        double flo = q_at(lo);
        const double fhi = q_at(hi);
        if (!(flo * fhi < 0.0)) {
          throw SolverError("gap polynomial has no simple zero in gap " + std::to_string(j), j);
        }
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          const double fm = q_at(mid);
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        roots[j] = 0.5 * (lo + hi);
      }
    }

    // Cosine series of f_j(theta) = |Q(s)| / (pi sqrt|R_other(s)|) on each component.
    std::vector<std::vector<double>> cosine(m, std::vector<double>(M, 0.0));
    std::vector<double> f(M);
    bool resolved = true;
    mass = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double c = eq.unit_[i].midpoint();
      const double h = 0.5 * eq.unit_[i].length();
      for (std::size_t l = 0; l < M; ++l) {
        const double s = c + h * cos_theta[l];
        double log_q = 0.0;
        for (double r : roots) log_q += std::log(std::abs(s - r));
        f[l] = std::exp(log_q - 0.5 * log_abs_product(s, ends, 2 * i, 2 * i + 1)) / kPi;
      }
      auto& ck = cosine[i];
      for (std::size_t k = 0; k < M; ++k) {
        double acc = 0.0;
        for (std::size_t l = 0; l < M; ++l) acc += f[l] * dct[k * M + l];
        ck[k] = (k == 0 ? 1.0 : 2.0) * acc / double(M);
      }
      mass += kPi * ck[0];
      const double tail = std::abs(ck[M - 1]) + std::abs(ck[M - 2]);
      if (tail > 1e-13 * std::abs(ck[0])) resolved = false;
    }
    eq.roots_ = std::move(roots);
    eq.cosine_ = std::move(cosine);
    eq.quad_order_ = order;
    if (std::abs(mass - 1.0) <= kMassTarget && resolved) break;
  }
  if (!(std::abs(mass - 1.0) <= kMassFailure)) {
    throw SolverError("equilibrium quadrature did not converge: mass deviates from 1 by " +
                      std::to_string(std::abs(mass - 1.0)));
  }

  // Drop negligible trailing coefficients.
  for (auto& ck : eq.cosine_) {
    const double scale = std::abs(ck[0]);
    while (ck.size() > 1 && std::abs(ck.back()) < 1e-18 * scale) ck.pop_back();
  }

  std::size_t longest = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (eq.unit_[i].length() > eq.unit_[longest].length()) longest = i;
  }
  const double robin_unit = -eq.unit_log_potential(Complex(eq.unit_[longest].midpoint(), 0.0)).real();
  eq.robin_ = robin_unit - std::log(eq.hull_half_);
  return eq;
}

Complex EquilibriumReal::unit_log_potential(Complex s) const {
  Complex total(0.0, 0.0);
  for (std::size_t i = 0; i < unit_.size(); ++i) {
    const auto& ck = cosine_[i];
    const double c = unit_[i].midpoint();
    const double h = 0.5 * unit_[i].length();
    Complex tau = (s - c) / h;
    if (s.imag() == 0.0 && s.real() >= unit_[i].lo && s.real() <= unit_[i].hi) {
      tau = Complex(std::clamp(tau.real(), -1.0, 1.0), 0.0);
    }
    const Complex w = joukowski_inverse(tau);
    const Complex winv = 1.0 / w;
    Complex series(0.0, 0.0);
    Complex p = winv;
    for (std::size_t k = 1; k < ck.size(); ++k) {
      series += ck[k] * p / double(k);
      p *= winv;
      if (std::norm(p) < 1e-40) break;
    }
    total += kPi * ck[0] * (std::log(h) + std::log(w / 2.0)) - kPi * series;
  }
  return total;
}

double EquilibriumReal::capacity() const { return std::exp(-robin_); }

double EquilibriumReal::q_value(double x) const {
  const double s = to_unit(x);
  double v = 1.0;
  for (double r : roots_) v *= hull_half_ * (s - r);
  return v;
}

std::vector<double> EquilibriumReal::q_roots() const {
  std::vector<double> out;
  out.reserve(roots_.size());
  for (double r : roots_) out.push_back(hull_center_ + hull_half_ * r);
  return out;
}

std::vector<double> EquilibriumReal::q_coeffs() const {
  // Chebyshev interpolation of Q (monic in s) at d + 1 Chebyshev points.
  const std::size_t n = roots_.size() + 1;
  std::vector<double> vals(n), out(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    const double s = std::cos((double(l) + 0.5) * kPi / double(n));
    double v = 1.0;
    for (double r : roots_) v *= (s - r);
    vals[l] = v;
  }
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t l = 0; l < n; ++l) acc += vals[l] * std::cos(double(k) * (double(l) + 0.5) * kPi / double(n));
    out[k] = (k == 0 ? 1.0 : 2.0) * acc / double(n);
  }
  return out;
}

double EquilibriumReal::component_mass(std::size_t j) const { return kPi * cosine_.at(j)[0]; }

double EquilibriumReal::mass() const {
  double m = 0.0;
  for (std::size_t j = 0; j < cosine_.size(); ++j) m += component_mass(j);
  return m;
}

double EquilibriumReal::density(double x) const {
  if (!set_.contains(x)) return 0.0;
  const double s = to_unit(x);
  double log_r = 0.0;
  for (const auto& iv : unit_) {
    log_r += std::log(std::abs(s - iv.lo)) + std::log(std::abs(s - iv.hi));
  }
  double log_q = 0.0;
  for (double r : roots_) log_q += std::log(std::abs(s - r));
  return std::exp(log_q - 0.5 * log_r) / (kPi * hull_half_);
}

double EquilibriumReal::cumulative(double x) const {
  if (x < set_.min()) return 0.0;
  if (x >= set_.max()) return 1.0;
  const double s = to_unit(x);
  double acc = 0.0;
  for (std::size_t i = 0; i < unit_.size(); ++i) {
    if (s > unit_[i].hi) {
      acc += component_mass(i);
      continue;
    }
    if (s >= unit_[i].lo) {
      const double c = unit_[i].midpoint();
      const double h = 0.5 * unit_[i].length();
      const double theta = std::acos(std::clamp((s - c) / h, -1.0, 1.0));
      const auto& ck = cosine_[i];
      double right = ck[0] * theta;  // mass of [s, b_i]
      for (std::size_t k = 1; k < ck.size(); ++k) right += ck[k] * std::sin(double(k) * theta) / double(k);
      acc += component_mass(i) - right;
    }
    break;
  }
  return acc;
}

double EquilibriumReal::potential(Complex z) const {
  Complex s((z.real() - hull_center_) / hull_half_, std::abs(z.imag()) / hull_half_);
  if (z.imag() == 0.0) {
    // Points of K must not leak out of their unit component through rounding:
    // the potential has a square-root profile at the endpoints.
    const std::size_t j = set_.component_of(z.real());
    if (j < set_.size()) s = Complex(std::clamp(s.real(), unit_[j].lo, unit_[j].hi), 0.0);
  }
  return std::log(hull_half_) + unit_log_potential(s).real();
}

Complex EquilibriumReal::log_potential(Complex z) const {
  if (z.imag() < 0.0) throw ValidationError("log_potential requires Im z >= 0");
  const Complex s((z.real() - hull_center_) / hull_half_, z.imag() / hull_half_);
  return std::log(hull_half_) + unit_log_potential(s);
}

double EquilibriumReal::frostman_deviation(std::size_t probes_per_component) const {
  const double robin_unit = robin_ + std::log(hull_half_);
  double worst = 0.0;
  for (const auto& iv : unit_) {
    for (double s : cheb::lobatto_points(std::max<std::size_t>(probes_per_component, 2), iv.lo, iv.hi)) {
      worst = std::max(worst, std::abs(unit_log_potential(Complex(s, 0.0)).real() + robin_unit));
    }
  }
  return worst;
}

double capacity(const EquilibriumReal& eq) { return eq.capacity(); }

double green_eval(const EquilibriumReal& eq, Complex z) {
  if (z.imag() == 0.0 && eq.intervals().contains(z.real())) return 0.0;
  return std::max(0.0, eq.potential(z) + eq.robin());
}

Complex green_complex(const EquilibriumReal& eq, Complex z) {
  if (z.imag() < 0.0) throw ValidationError("green_complex requires Im z >= 0");
  return eq.log_potential(z) + eq.robin();
}

}  // namespace widom
