#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

/// Green function of [-1, 1]: log |w + sqrt(w^2 - 1)| on the branch with modulus >= 1.
inline double green_segment(Complex w) {
  const Complex r = std::sqrt(w - 1.0) * std::sqrt(w + 1.0);
  return std::max(0.0, std::log(std::max(std::abs(w + r), std::abs(w - r))));
}

/// Green function of {-1 <= x <= -a} u {a <= x <= 1} by pulling back [-1, 1] under
/// P(x) = (2x^2 - 1 - a^2) / (1 - a^2).
inline double green_two_interval(double a, Complex z) {
  const Complex p = (2.0 * z * z - 1.0 - a * a) / (1.0 - a * a);
  return 0.5 * green_segment(p);
}

/// Transfinite-diameter estimate from m greedy Leja points chosen out of `candidates`.
inline double leja_capacity(const std::vector<Complex>& candidates, std::size_t m) {
  std::vector<double> logprod(candidates.size(), 0.0);
  std::vector<bool> used(candidates.size(), false);
  std::vector<std::size_t> chosen;
  std::size_t first = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (std::abs(candidates[i]) > std::abs(candidates[first])) first = i;
  }
  chosen.push_back(first);
  used[first] = true;
  for (std::size_t k = 1; k < m; ++k) {
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      logprod[i] += std::log(std::abs(candidates[i] - candidates[chosen.back()]));
      if (best == candidates.size() || logprod[i] > logprod[best]) best = i;
    }
    chosen.push_back(best);
    used[best] = true;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    for (std::size_t j = i + 1; j < chosen.size(); ++j) total += std::log(std::abs(candidates[chosen[i]] - candidates[chosen[j]]));
  }
  return std::exp(2.0 * total / (double(m) * double(m - 1)));
}

}  // namespace oracle
