#include "widom/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "widom/equilibrium.hpp"
#include "widom/errors.hpp"

namespace widom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_degrees(const std::vector<std::size_t>& degrees) {
  if (degrees.empty()) throw ValidationError("degree list must be non-empty");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 1) throw ValidationError("degrees must be at least 1");
    if (i > 0 && degrees[i] <= degrees[i - 1]) throw ValidationError("degree list must be strictly increasing");
  }
}

template <class Solve>
void fill_rows(SeriesResult& out, const std::vector<std::size_t>& degrees, Solve&& solve) {
  for (std::size_t n : degrees) {
    SeriesRow row;
    row.n = n;
    try {
      const MonicChebyshev T = solve(n);
      row.log_norm_lo = T.log_norm_lo();
      row.log_norm_hi = T.log_norm_hi();
      row.t_lo = std::exp(row.log_norm_lo - double(n) * out.log_capacity);
      row.t_hi = std::exp(row.log_norm_hi - double(n) * out.log_capacity);
    } catch (const SolverError& e) {
      row.log_norm_lo = row.log_norm_hi = row.t_lo = row.t_hi = kNaN;
      row.status = std::string("failed: ") + e.what();
    }
    out.rows.push_back(std::move(row));
  }
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

template <class Model>
double rms(const std::vector<double>& n, const std::vector<double>& t, Model&& model) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double r = t[i] - model(n[i]);
    acc += r * r;
  }
  return std::sqrt(acc / double(n.size()));
}

}  // namespace

std::size_t SeriesResult::failures() const {
  return std::size_t(std::count_if(rows.begin(), rows.end(), [](const SeriesRow& r) { return !r.ok(); }));
}

SeriesResult run_series(const RealIntervalUnion& set, const std::vector<std::size_t>& degrees,
                        const SolverOptions& options, std::string set_id) {
  check_degrees(degrees);
  SeriesResult out;
  out.set_id = std::move(set_id);
  const auto eq = solve_real_equilibrium(set);
  out.log_capacity = eq.log_capacity();
  out.log_capacity_uncertainty = eq.frostman_deviation();
  fill_rows(out, degrees, [&](std::size_t n) { return solve_real_monic(set, n, options); });
  return out;
}

SeriesResult run_series(const std::vector<Shape>& components, const std::vector<std::size_t>& degrees,
                        const SolverOptions& options, std::string set_id) {
  check_degrees(degrees);
  const ShapeSet shapes(components);
  if (shapes.is_real()) return run_series(shapes.to_real(), degrees, options, std::move(set_id));
  SeriesResult out;
  out.set_id = std::move(set_id);
  const auto eq = solve_symm(components);
  out.log_capacity = eq.log_capacity();
  out.log_capacity_uncertainty = eq.frostman_deviation();
  fill_rows(out, degrees,
            [&](std::size_t n) { return solve_complex_monic(components, n, options, out.log_capacity); });
  return out;
}

void write_series_csv(std::ostream& out, const SeriesResult& series, bool header) {
  if (header) out << "set_id,n,log_capacity,log_norm_lo,log_norm_hi,t_lo,t_hi,status\n";
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  for (const auto& r : series.rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << series.set_id << ',' << r.n << ',' << series.log_capacity << ',' << r.log_norm_lo << ','
        << r.log_norm_hi << ',' << r.t_lo << ',' << r.t_hi << ',' << status << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

std::string to_string(GrowthModel m) {
  switch (m) {
    case GrowthModel::constant:
      return "constant";
    case GrowthModel::logarithmic:
      return "logarithmic";
    case GrowthModel::power:
      return "power";
  }
  return "unknown";
}

double GrowthFit::residual() const {
  switch (model) {
    case GrowthModel::constant:
      return residual_constant;
    case GrowthModel::logarithmic:
      return residual_logarithmic;
    case GrowthModel::power:
      return residual_power;
  }
  return kNaN;
}

GrowthFit fit_growth(const SeriesResult& series, std::size_t n_min) {
  std::vector<double> n, t, log_n, log_t;
  for (const auto& r : series.rows) {
    if (!r.ok() || r.n < n_min) continue;
    n.push_back(double(r.n));
    t.push_back(r.t_hi);
    log_n.push_back(std::log(double(r.n)));
    log_t.push_back(std::log(r.t_hi));
  }
  if (n.size() < 6) {
    throw ValidationError("growth fit needs at least 6 successful rows with n >= " + std::to_string(n_min) +
                          " (have " + std::to_string(n.size()) + ")");
  }
  GrowthFit fit;
  fit.n_min = n_min;
  fit.rows_used = n.size();
  double mean = 0.0;
  for (double v : t) mean += v;
  mean /= double(t.size());
  fit.mean_t = mean;

  fit.constant_a = mean;
  fit.residual_constant = rms(n, t, [&](double) { return mean; });

  const LineFit lf = least_squares(log_n, t);
  fit.log_a = lf.intercept;
  fit.log_b = lf.slope;
  fit.residual_logarithmic = rms(n, t, [&](double x) { return lf.intercept + lf.slope * std::log(x); });

  const LineFit pf = least_squares(log_n, log_t);
  fit.power_c = pf.slope;
  fit.power_d = pf.intercept;
  fit.residual_power = rms(n, t, [&](double x) { return std::exp(pf.intercept + pf.slope * std::log(x)); });

  const double best = std::min({fit.residual_constant, fit.residual_logarithmic, fit.residual_power});
  const double tie = std::max(kModelTieFactor * best, kModelTieFloor * mean);
  if (fit.residual_constant <= tie) {
    fit.model = GrowthModel::constant;
  } else if (fit.residual_logarithmic <= tie) {
    fit.model = GrowthModel::logarithmic;
  } else {
    fit.model = GrowthModel::power;
  }
  return fit;
}

BoundReport verify_log_bound(const SeriesResult& series, const LevinStrip& strip) {
  if (std::abs(std::log(strip.capacity) - series.log_capacity) > 1e-8 * (1.0 + std::abs(series.log_capacity))) {
    throw ValidationError("strip and series were built from different sets (capacities differ)");
  }
  BoundReport rep;
  rep.V = strip.V;
  const double eV = std::exp(strip.V);
  for (const auto& r : series.rows) {
    if (!r.ok()) continue;
    rep.degrees.push_back(r.n);
    rep.ratios.push_back(r.t_hi / (std::log(double(r.n) + 1.0) * eV));
  }
  if (rep.ratios.empty()) throw ValidationError("series has no successful rows");
  rep.C = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  const std::size_t half = rep.ratios.size() / 2;
  const double early = *std::max_element(rep.ratios.begin(), rep.ratios.begin() + long(std::max<std::size_t>(half, 1)));
  rep.stable = rep.ratios.size() >= 2 && early >= rep.C;
  return rep;
}

}  // namespace widom
