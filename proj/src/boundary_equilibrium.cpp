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

namespace detail {

/// A smooth boundary piece parametrized over t in [-1, 1].
struct Panel {
  enum class Kind { line, arc, graded } kind = Kind::line;
  Complex a{}, b{};          // line: a -> b
  Complex center{};          // arc
  double radius = 0.0, theta0 = 0.0, theta1 = 0.0;
  Complex corner{}, direction{};  // graded: corner + direction * half_length * u^p
  double half_length = 0.0, u0 = 0.0, u1 = 0.0, power = 1.0;

  double u_of(double t) const { return u0 + 0.5 * (u1 - u0) * (t + 1.0); }

  Complex point(double t) const {
    switch (kind) {
      case Kind::line:
        return a + 0.5 * (t + 1.0) * (b - a);
      case Kind::arc:
        return center + std::polar(radius, theta0 + 0.5 * (theta1 - theta0) * (t + 1.0));
      case Kind::graded:
        return corner + direction * (half_length * std::pow(u_of(t), power));
    }
    return {};
  }

  /// |d point / dt|
  double speed(double t) const {
    switch (kind) {
      case Kind::line:
        return 0.5 * std::abs(b - a);
      case Kind::arc:
        return 0.5 * std::abs(theta1 - theta0) * radius;
      case Kind::graded:
        return half_length * power * std::pow(u_of(t), power - 1.0) * 0.5 * (u1 - u0);
    }
    return 0.0;
  }
};

struct PanelSet {
  std::vector<Panel> panels;
  cheb::GaussRule rule;
  std::vector<Complex> nodes;     // scaled frame
  std::vector<double> speeds;     // |zeta'(t_j)| per node
  std::vector<double> weights;    // arclength weights per node
  std::vector<double> lengths;    // per panel

  std::size_t q() const { return rule.nodes.size(); }

  void finalize() {
    const std::size_t g = q();
    nodes.clear();
    speeds.clear();
    weights.clear();
    lengths.clear();
    for (const auto& p : panels) {
      double len = 0.0;
      for (std::size_t j = 0; j < g; ++j) {
        const double t = rule.nodes[j];
        nodes.push_back(p.point(t));
        speeds.push_back(p.speed(t));
        weights.push_back(rule.weights[j] * speeds.back());
        len += weights.back();
      }
      lengths.push_back(len);
    }
  }

  /// Product-integration weights: out[j] = int_{-1}^{1} log|z - zeta(t)| l_j(t) dt.
  void singular_weights(std::size_t panel, Complex z, std::span<double> out) const {
    const Panel& p = panels[panel];
    // Parameter of the nearest point, by sampling then golden-section refinement.
    double best_t = -1.0, best_d = std::numeric_limits<double>::infinity();
    constexpr int kSamples = 64;
    for (int i = 0; i <= kSamples; ++i) {
      const double t = -1.0 + 2.0 * double(i) / kSamples;
      const double dd = std::abs(z - p.point(t));
      if (dd < best_d) {
        best_d = dd;
        best_t = t;
      }
    }
    double lo = std::max(-1.0, best_t - 2.0 / kSamples), hi = std::min(1.0, best_t + 2.0 / kSamples);
    constexpr double kGolden = 0.6180339887498949;
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      const double m1 = hi - kGolden * (hi - lo), m2 = lo + kGolden * (hi - lo);
      if (std::abs(z - p.point(m1)) < std::abs(z - p.point(m2))) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    const double tstar = 0.5 * (lo + hi);

    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> basis(q());
    const auto& gl = rule;
    auto accumulate = [&](double a, double b) {
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double t = mid + half * gl.nodes[k];
        const double dist = std::abs(z - p.point(t));
        if (dist == 0.0) continue;
        const double f = std::log(dist) * gl.weights[k] * half;
        cheb::lagrange_basis(rule, t, basis);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += f * basis[j];
      }
    };
    // Geometric grading toward tstar on both sides.
    constexpr int kLevels = 24;
    constexpr double kRatio = 0.25;
    for (int side = -1; side <= 1; side += 2) {
      const double span_len = side < 0 ? tstar + 1.0 : 1.0 - tstar;
      if (span_len <= 0.0) continue;
      double outer = span_len;
      for (int lvl = 0; lvl < kLevels; ++lvl) {
        const double inner = outer * kRatio;
        const double a = tstar + side * inner, b = tstar + side * outer;
        accumulate(std::min(a, b), std::max(a, b));
        outer = inner;
      }
      const double a = tstar, b = tstar + side * outer;
      accumulate(std::min(a, b), std::max(a, b));
    }
  }

  bool is_near(std::size_t panel, Complex z) const {
    const std::size_t g = q();
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < g; ++j) d = std::min(d, std::abs(z - nodes[panel * g + j]));
    d = std::min({d, std::abs(z - panels[panel].point(-1.0)), std::abs(z - panels[panel].point(1.0))});
    return d < 1.2 * lengths[panel];
  }

  /// Integral of log|z - zeta| (density) ds for a density sampled at nodes.
  double potential(Complex z, std::span<const double> sigma) const {
    const std::size_t g = q();
    std::vector<double> w(g);
    double acc = 0.0;
    for (std::size_t p = 0; p < panels.size(); ++p) {
      if (is_near(p, z)) {
        singular_weights(p, z, w);
        for (std::size_t j = 0; j < g; ++j) acc += w[j] * speeds[p * g + j] * sigma[p * g + j];
      } else {
        for (std::size_t j = 0; j < g; ++j) {
          acc += std::log(std::abs(z - nodes[p * g + j])) * weights[p * g + j] * sigma[p * g + j];
        }
      }
    }
    return acc;
  }
};

}  // namespace detail

namespace {

using detail::Panel;
using detail::PanelSet;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Panels for a straight edge a -> b, graded toward the ends flagged.
void add_edge(std::vector<Panel>& out, Complex a, Complex b, bool grade_a, bool grade_b, const SymmOptions& opt) {
  const double len = std::abs(b - a);
  const Complex dir = (b - a) / len;
  // breakpoints in u for a graded half: 0, 2^-L, ..., 1/2, 1
  std::vector<double> breaks{0.0};
  for (std::size_t l = opt.corner_levels; l >= 1; --l) breaks.push_back(std::ldexp(1.0, -int(l)));
  breaks.push_back(1.0);
  auto graded_half = [&](Complex corner, Complex direction) {
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      Panel p;
      p.kind = Panel::Kind::graded;
      p.corner = corner;
      p.direction = direction;
      p.half_length = 0.5 * len;
      p.u0 = breaks[i];
      p.u1 = breaks[i + 1];
      p.power = opt.corner_grading;
      out.push_back(p);
    }
  };
  const Complex mid = 0.5 * (a + b);
  if (grade_a) {
    graded_half(a, dir);
  } else {
    out.push_back({Panel::Kind::line, a, mid});
  }
  if (grade_b) {
    graded_half(b, -dir);
  } else {
    out.push_back({Panel::Kind::line, mid, b});
  }
}

void add_polyline(std::vector<Panel>& out, std::span<const Complex> pts, bool closed, bool grade_vertices,
                  const SymmOptions& opt) {
  const std::size_t n = pts.size();
  const std::size_t edges = closed ? n : n - 1;
  for (std::size_t i = 0; i < edges; ++i) {
    const Complex a = pts[i], b = pts[(i + 1) % n];
    if (grade_vertices) {
      add_edge(out, a, b, true, true, opt);
    } else {
      const bool ga = !closed && i == 0;
      const bool gb = !closed && i + 1 == edges;
      if (ga || gb) {
        add_edge(out, a, b, ga, gb, opt);
      } else {
        out.push_back({Panel::Kind::line, a, b});
      }
    }
  }
}

struct Frame {
  Complex center;
  double scale;
};

Frame unit_frame(std::span<const Complex> pts) {
  Complex c{};
  for (auto p : pts) c += p;
  c /= double(pts.size());
  double diam = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, std::abs(pts[i] - pts[j]));
  }
  if (!(diam > 0.0)) throw ValidationError("boundary has zero diameter");
  return {c, 1.0 / diam};
}

}  // namespace

BoundaryDensity BoundaryDensity::solve(std::shared_ptr<const PanelSet> panels, Complex center, double scale) {
  const PanelSet& ps = *panels;
  const std::size_t n = ps.nodes.size();
  const std::size_t g = ps.q();
  Eigen::MatrixXd A(long(n + 1), long(n + 1));
  std::vector<double> sw(g);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex z = ps.nodes[i];
    for (std::size_t p = 0; p < ps.panels.size(); ++p) {
      if (ps.is_near(p, z)) {
        ps.singular_weights(p, z, sw);
        for (std::size_t j = 0; j < g; ++j) A(long(i), long(p * g + j)) = sw[j] * ps.speeds[p * g + j];
      } else {
        for (std::size_t j = 0; j < g; ++j) {
          A(long(i), long(p * g + j)) = std::log(std::abs(z - ps.nodes[p * g + j])) * ps.weights[p * g + j];
        }
      }
    }
    A(long(i), long(n)) = -1.0;
  }
  for (std::size_t j = 0; j < n; ++j) A(long(n), long(j)) = ps.weights[j];
  A(long(n), long(n)) = 0.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(long(n + 1));
  rhs(long(n)) = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite() || (A * x - rhs).norm() > 1e-8) {
    throw SolverError("single-layer system is numerically singular");
  }

  BoundaryDensity out;
  out.panels_ = std::move(panels);
  out.center_ = center;
  out.scale_ = scale;
  const double log_cap_scaled = x(long(n));  // constant potential = log capacity in the scaled frame
  out.robin_ = -(log_cap_scaled - std::log(scale));
  out.nodes_.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.nodes_.push_back(ps.nodes[j] / scale + center);
    out.weights_.push_back(ps.weights[j] / scale);
    out.sigma_.push_back(x(long(j)) * scale);
  }
  return out;
}

BoundaryDensity solve_symm(const std::vector<Shape>& components, const SymmOptions& options) {
  if (components.empty()) throw ValidationError("solve_symm needs at least one component");
  std::vector<Complex> outline;
  for (const auto& s : components) {
    std::visit(Overloaded{
                   [&](const Disk& d) {
                     for (int k = 0; k < 8; ++k) outline.push_back(d.center + std::polar(d.radius, k * std::numbers::pi / 4));
                   },
                   [&](const Polygon& p) { outline.insert(outline.end(), p.vertices.begin(), p.vertices.end()); },
                   [&](const DiscretizedCurve& c) { outline.insert(outline.end(), c.vertices().begin(), c.vertices().end()); },
                   [&](const Segment& s) {
                     outline.push_back(s.a);
                     outline.push_back(s.b);
                   },
                   [](const RealIntervalUnion&) {
                     throw ValidationError("interval unions are handled by solve_real_equilibrium");
                   },
               },
               s);
  }
  const Frame frame = unit_frame(outline);
  auto to_frame = [&](Complex z) { return (z - frame.center) * frame.scale; };

  auto ps = std::make_shared<PanelSet>();
  ps->rule = cheb::gauss_legendre(options.nodes_per_panel);
  for (const auto& s : components) {
    std::visit(Overloaded{
                   [&](const Disk& d) {
                     const std::size_t np = std::max<std::size_t>(options.disk_panels, 4);
                     for (std::size_t k = 0; k < np; ++k) {
                       Panel p;
                       p.kind = Panel::Kind::arc;
                       p.center = to_frame(d.center);
                       p.radius = d.radius * frame.scale;
                       p.theta0 = 2.0 * std::numbers::pi * double(k) / double(np);
                       p.theta1 = 2.0 * std::numbers::pi * double(k + 1) / double(np);
                       ps->panels.push_back(p);
                     }
                   },
                   [&](const Polygon& poly) {
                     std::vector<Complex> v;
                     for (auto z : poly.vertices) v.push_back(to_frame(z));
                     add_polyline(ps->panels, v, true, true, options);
                   },
                   [&](const DiscretizedCurve& c) {
                     std::vector<Complex> v;
                     for (auto z : c.vertices()) v.push_back(to_frame(z));
                     add_polyline(ps->panels, v, c.closed(), false, options);
                   },
                   [&](const Segment& seg) {
                     std::vector<Complex> v{to_frame(seg.a), to_frame(seg.b)};
                     add_edge(ps->panels, v[0], v[1], true, true, SymmOptions{options.nodes_per_panel,
                                                                              options.disk_panels,
                                                                              options.corner_levels, 2.0});
                   },
                   [](const RealIntervalUnion&) {},
               },
               s);
  }
  ps->finalize();
  return BoundaryDensity::solve(std::move(ps), frame.center, frame.scale);
}

BoundaryDensity solve_symm(const std::vector<DiscretizedCurve>& curves, const SymmOptions& options) {
  std::vector<Shape> shapes(curves.begin(), curves.end());
  for (const auto& c : curves) {
    if (c.size() < 32) throw ValidationError("solve_symm needs at least 32 nodes per curve");
  }
  return solve_symm(shapes, options);
}

double BoundaryDensity::capacity() const { return std::exp(-robin_); }

double BoundaryDensity::mass() const {
  double m = 0.0;
  for (std::size_t j = 0; j < sigma_.size(); ++j) m += sigma_[j] * weights_[j];
  return m;
}

double BoundaryDensity::potential(Complex z) const {
  std::vector<double> sigma_scaled(sigma_.size());
  for (std::size_t j = 0; j < sigma_.size(); ++j) sigma_scaled[j] = sigma_[j] / scale_;
  return panels_->potential((z - center_) * scale_, sigma_scaled) - std::log(scale_);
}

double BoundaryDensity::frostman_deviation() const {
  double worst = 0.0;
  std::vector<double> sigma_scaled(sigma_.size());
  for (std::size_t j = 0; j < sigma_.size(); ++j) sigma_scaled[j] = sigma_[j] / scale_;
  const double constant = -robin_ + std::log(scale_);
  for (const auto& p : panels_->panels) {
    // Points halfway between consecutive Gauss nodes, plus the panel midpoint.
    const auto& t = panels_->rule.nodes;
    for (std::size_t j = 0; j + 1 < t.size(); j += 3) {
      const Complex z = p.point(0.5 * (t[j] + t[j + 1]));
      worst = std::max(worst, std::abs(panels_->potential(z, sigma_scaled) - constant));
    }
  }
  return worst;
}

double capacity(const BoundaryDensity& eq) { return eq.capacity(); }

double green_eval(const BoundaryDensity& eq, Complex z) { return std::max(0.0, eq.potential(z) + eq.robin()); }

}  // namespace widom
