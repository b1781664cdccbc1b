#pragma once

// Small Chebyshev-series and quadrature helpers shared by the solvers.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace widom::cheb {

/// Sum_k c[k] T_k(x) by Clenshaw's recurrence. Works for real or complex x.
template <class T>
T clenshaw(std::span<const double> c, T x) {
  if (c.empty()) return T(0);
  T b1(0), b2(0);
  const T two_x = x + x;
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    const T b0 = two_x * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c[0];
}

/// Coefficients of d/dx sum_k c[k] T_k(x).
inline std::vector<double> derivative(std::span<const double> c) {
  const std::size_t n = c.size();
  if (n <= 1) return {0.0};
  std::vector<double> d(n - 1, 0.0);
  // d_{k-1} = d_{k+1} + 2k c_k, with d_0 halved at the end.
  double next = 0.0, next2 = 0.0;
  for (std::size_t k = n - 1; k >= 1; --k) {
    const double dk = next2 + 2.0 * double(k) * c[k];
    d[k - 1] = dk;
    next2 = next;
    next = dk;
  }
  d[0] *= 0.5;
  return d;
}

/// Chebyshev-Lobatto points cos(pi j / (m-1)) mapped to [a, b], ascending.
inline std::vector<double> lobatto_points(std::size_t m, double a, double b) {
  std::vector<double> x(m);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t j = 0; j < m; ++j) {
    x[m - 1 - j] = c + h * std::cos(std::numbers::pi * double(j) / double(m - 1));
  }
  x.front() = a;
  x.back() = b;
  return x;
}

struct GaussRule {
  std::vector<double> nodes;    ///< ascending in (-1, 1)
  std::vector<double> weights;
  std::vector<double> bary;     ///< barycentric interpolation weights for the nodes
};

/// n-point Gauss-Legendre rule on [-1, 1] via Newton iteration on P_n.
GaussRule gauss_legendre(std::size_t n);

/// Lagrange basis values l_j(t) for the rule's nodes, written into out (size n).
void lagrange_basis(const GaussRule& rule, double t, std::span<double> out);

}  // namespace widom::cheb
