#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "widom/equilibrium.hpp"
#include "widom/set_geometry.hpp"

namespace widom {

struct HolderProbe {
  Complex z;
  double distance;  ///< d(z, K)
};

struct HolderFit {
  double alpha = 0.0;
  double c1 = 0.0;
  double fit_residual = 0.0;     ///< RMS of the log-log regression
  std::size_t samples = 0;
  double d_min = 0.0;
  double d_max = 0.0;
  /// max over holdout probes of g / (c1 d^alpha) - 1; <= 0 when the bound holds.
  double holdout_violation = 0.0;
};

/// Regresses log(max g at each distance level) on log d. Probes with g = 0 or
/// d = 0 are dropped; c1 is the smallest constant for which g <= c1 d^alpha on
/// the fitting probes. Probes sharing a distance (relative 1e-9) form one level.
HolderFit holder_fit(const std::function<double(Complex)>& green, const std::vector<HolderProbe>& probes,
                     const std::vector<HolderProbe>& holdout = {});

/// Deterministic probes at geometric distances d in [1e-6, 1e-1] diam(K): outward
/// from every endpoint along the axis (while inside the gap) and vertically above
/// endpoints and component midpoints. `levels` distances; the holdout uses the
/// geometric midpoints between them.
std::vector<HolderProbe> holder_probes(const RealIntervalUnion& set, std::size_t levels = 25, bool holdout = false);
/// Radial probes |z - c| = r (1 + d / diam) at 8 angles.
std::vector<HolderProbe> holder_probes(const Disk& disk, std::size_t levels = 25, bool holdout = false);

HolderFit holder_fit(const EquilibriumReal& eq, std::size_t levels = 25);
HolderFit holder_fit(const BoundaryDensity& eq, const Disk& disk, std::size_t levels = 25);

struct PerfectnessReport {
  double worst_ratio = 0.0;  ///< min over samples of cap(K cap [z-r, z+r]) / r
  double worst_center = 0.0;
  double worst_radius = 0.0;
  std::size_t samples = 0;
};

/// Capacity density of windows K cap [z - r, z + r] over all (center, radius)
/// pairs. Centers must lie in K and radii in (0, diam K).
PerfectnessReport perfectness_check(const RealIntervalUnion& set, const std::vector<double>& centers,
                                    const std::vector<double>& radii);

/// Component endpoints and midpoints as centers; radii diam * 2^-k, k = 1..levels.
PerfectnessReport perfectness_check(const RealIntervalUnion& set, std::size_t levels = 8);

/// sup over z in `probes` of the integral over the level curve {|Phi| = 1 + delta}
/// of d(zeta, K)^k / |zeta - z|^(k+1) |d zeta|, with delta = 1/n and Phi the exact
/// exterior map of a segment or a disk. Adaptive Gauss-Kronrod to 1e-8 relative.
double level_curve_integral(const std::variant<Segment, Disk>& shape, std::size_t n, int k,
                        const std::vector<Complex>& probes);
/// Default probe grid: 65 points clustered at the segment ends, or 16 boundary points
/// of the disk plus its center.
double level_curve_integral(const std::variant<Segment, Disk>& shape, std::size_t n, int k);
std::vector<Complex> level_curve_probes(const std::variant<Segment, Disk>& shape);

}  // namespace widom
