#pragma once

#include <cstddef>
#include <vector>

#include "widom/equilibrium.hpp"

namespace widom {

/// One vertical slit [u, u + i v] of the Levin half-strip.
struct Slit {
  double u;           ///< pi times the equilibrium mass left of the gap
  double v;           ///< maximum of the Green function over the gap
  std::size_t gap;    ///< index of the gap in increasing order
  double peak;        ///< critical point of the Green function inside the gap
};

/// Slit data of the conformal image of the upper half-plane under
/// phi(z) = pi + i (int log(z - t) d mu(t) - log cap K).
struct LevinStrip {
  std::vector<Slit> slits;
  double V = 0.0;       ///< sum of slit heights
  double capacity = 0.0;

  double max_height() const;
};

/// Builds slit positions and heights from an equilibrium measure.
/// u_j comes from integrating the density; it is cross-checked against
/// pi - Im(green_complex) at the gap peak and a SolverError is raised if they
/// differ by more than 1e-6.
LevinStrip build_levin(const EquilibriumReal& eq);

/// Re(phi(z)) = pi - Im(int log(z - t) d mu(t)), for Im z >= 0.
double levin_real_part(const EquilibriumReal& eq, Complex z);

/// K*_s = hull(K) intersected with {g <= s}: gaps with v_j <= s close, the
/// others shrink to the open set where g > s.
RealIntervalUnion sublevel_truncate(const EquilibriumReal& eq, const LevinStrip& strip, double s);

struct CrosscutRatio {
  double height;
  double max_ratio;   ///< max over horizontal crosscuts at this height of height / width
  double min_width;
};

/// Horizontal crosscuts at each height b run between consecutive walls
/// {0, pi} and {u_j : v_j > b}. Requires 0 < b <= max_j v_j for every height.
std::vector<CrosscutRatio> crosscut_ratios(const LevinStrip& strip, const std::vector<double>& heights);

}  // namespace widom
