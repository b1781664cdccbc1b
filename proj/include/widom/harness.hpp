#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "widom/levin_strip.hpp"
#include "widom/minimax.hpp"
#include "widom/set_geometry.hpp"

namespace widom {

struct SeriesRow {
  std::size_t n = 0;
  double log_norm_lo = 0.0;
  double log_norm_hi = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::string status = "ok";  ///< "ok", or "failed: <reason>"

  bool ok() const { return status == "ok"; }
};

/// Widom factors t_n = ||T_n|| / cap^n over a list of degrees.
struct SeriesResult {
  std::string set_id;
  double log_capacity = 0.0;
  /// Potential-constancy defect of the equilibrium solve, an error estimate for log_capacity.
  double log_capacity_uncertainty = 0.0;
  std::vector<SeriesRow> rows;

  std::size_t failures() const;
};

/// One row per degree. cap^n is never formed: t = exp(log norm - n log cap).
/// A SolverError in one row marks that row failed and the series continues.
SeriesResult run_series(const RealIntervalUnion& set, const std::vector<std::size_t>& degrees,
                        const SolverOptions& options = {}, std::string set_id = "");
/// Shapes whose components are all real go through the real-line pipeline.
SeriesResult run_series(const std::vector<Shape>& components, const std::vector<std::size_t>& degrees,
                        const SolverOptions& options = {}, std::string set_id = "");

/// CSV with header set_id,n,log_capacity,log_norm_lo,log_norm_hi,t_lo,t_hi,status
/// and 17 significant digits.
void write_series_csv(std::ostream& out, const SeriesResult& series, bool header = true);

enum class GrowthModel { constant, logarithmic, power };
std::string to_string(GrowthModel m);

struct GrowthFit {
  GrowthModel model = GrowthModel::constant;
  double constant_a = 0.0;                     ///< t = a
  double log_a = 0.0, log_b = 0.0;             ///< t = a + b log n
  double power_c = 0.0, power_d = 0.0;         ///< log t = c log n + d
  double residual_constant = 0.0;              ///< RMS of t - model, per model
  double residual_logarithmic = 0.0;
  double residual_power = 0.0;
  double mean_t = 0.0;
  std::size_t n_min = 0;
  std::size_t rows_used = 0;

  double residual() const;
};

inline constexpr std::size_t kDefaultFitWindow = 8;
/// The simplest model counts as tied with the best when its residual is within this factor...
inline constexpr double kModelTieFactor = 1.1;
/// ...or below this fraction of the mean t (all three fits exact up to rounding).
inline constexpr double kModelTieFloor = 1e-8;

/// Least-squares fits of the three growth models to (n, t_hi) for successful rows
/// with n >= n_min. Selects the simplest model whose RMS residual is tied with the best.
/// Throws ValidationError with fewer than 6 usable rows.
GrowthFit fit_growth(const SeriesResult& series, std::size_t n_min = kDefaultFitWindow);

struct BoundReport {
  double V = 0.0;
  double C = 0.0;                 ///< minimal C with t_hi <= C log(n+1) e^V on all rows
  std::vector<double> ratios;     ///< t_hi / (log(n+1) e^V) per successful row
  std::vector<std::size_t> degrees;
  /// The running maximum of the ratios no longer grows over the second half of the rows.
  bool stable = false;
};

/// Throws ValidationError when the strip's capacity does not match the series.
BoundReport verify_log_bound(const SeriesResult& series, const LevinStrip& strip);

}  // namespace widom
