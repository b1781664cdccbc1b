#include "widom/chebyshev.hpp"

#include <algorithm>

namespace widom::cheb {

GaussRule gauss_legendre(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * double(k) - 1.0) * x * p1 - (double(k) - 1.0) * p0) / double(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = double(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  rule.bary.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double p = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) p *= (rule.nodes[j] - rule.nodes[k]);
    }
    rule.bary[j] = 1.0 / p;
  }
  // Rescale for range safety; barycentric formula is invariant to a common factor.
  const double scale = *std::max_element(rule.bary.begin(), rule.bary.end(),
                                         [](double a, double b) { return std::abs(a) < std::abs(b); });
  for (auto& b : rule.bary) b /= std::abs(scale);
  return rule;
}

void lagrange_basis(const GaussRule& rule, double t, std::span<double> out) {
  const std::size_t n = rule.nodes.size();
  double denom = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = t - rule.nodes[j];
    if (d == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      out[j] = 1.0;
      return;
    }
    out[j] = rule.bary[j] / d;
    denom += out[j];
  }
  for (std::size_t j = 0; j < n; ++j) out[j] /= denom;
}

}  // namespace widom::cheb
