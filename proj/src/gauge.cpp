#include "gauge_graph/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gauge_graph/error.hpp"

namespace gauge_graph {

namespace {

struct PolygonEdge {
  double angle_start;
  double angle_end;
  double nx;
  double ny;
  double offset;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt_value(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(ErrorKind::ParameterOutOfRange,
                std::string(name) + " = " + fmt_value(v) + " must lie in (0, 1)");
  }
}

}  // namespace

struct Gauge::State {
  GaugeSpec spec;
  std::size_t dimension = 2;
  Margin margin = Margin::Exponential;
  SquareMatrix precision;
  std::vector<PolygonEdge> polygon;
};

namespace {

double eval_polygon(const std::vector<PolygonEdge>& edges, Margin margin, double x, double y) {
  if (x == 0.0 && y == 0.0) return 0.0;
  double phi = std::atan2(y, x);
  if (margin == Margin::Laplace && phi < edges.front().angle_start) phi += 2.0 * std::numbers::pi;
  auto it = std::upper_bound(edges.begin(), edges.end(), phi,
                             [](double a, const PolygonEdge& e) { return a < e.angle_end; });
  if (it == edges.end()) it = std::prev(edges.end());
  return (it->nx * x + it->ny * y) / it->offset;
}

std::vector<PolygonEdge> build_polygon(std::vector<std::array<double, 2>> verts, Margin margin) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (const auto& v : verts) {
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || (v[0] == 0.0 && v[1] == 0.0)) {
      throw Error(ErrorKind::ParameterOutOfRange, "polygon vertices must be finite and non-zero");
    }
  }
  auto angle = [](const std::array<double, 2>& v) { return std::atan2(v[1], v[0]); };
  std::sort(verts.begin(), verts.end(),
            [&](const auto& a, const auto& b) { return angle(a) < angle(b); });
  std::vector<PolygonEdge> edges;
  auto add_edge = [&](const std::array<double, 2>& p, const std::array<double, 2>& q, double a0,
                      double a1) {
    if (!(a1 > a0) || a1 - a0 >= std::numbers::pi) {
      throw Error(ErrorKind::ParameterOutOfRange,
                  "polygon vertices must have distinct angles less than pi apart");
    }
    const double nx = q[1] - p[1];
    const double ny = p[0] - q[0];
    const double offset = nx * p[0] + ny * p[1];
    if (!(offset > 0.0)) {
      throw Error(ErrorKind::ParameterOutOfRange, "polygon must be star-shaped around the origin");
    }
    edges.push_back({a0, a1, nx, ny, offset});
  };
  if (margin == Margin::Exponential) {
    if (verts.size() < 2) throw Error(ErrorKind::ParameterOutOfRange, "polygon needs >= 2 vertices");
    for (const auto& v : verts) {
      if (v[0] < 0.0 || v[1] < 0.0) {
        throw Error(ErrorKind::ParameterOutOfRange,
                    "exponential-margin polygon vertices must be non-negative");
      }
    }
    if (verts.front()[1] != 0.0 || verts.back()[0] != 0.0) {
      throw Error(ErrorKind::ParameterOutOfRange,
                  "exponential-margin polygon must start on the x-axis and end on the y-axis");
    }
    for (std::size_t k = 0; k + 1 < verts.size(); ++k) {
      add_edge(verts[k], verts[k + 1], angle(verts[k]), angle(verts[k + 1]));
    }
  } else {
    if (verts.size() < 3) throw Error(ErrorKind::ParameterOutOfRange, "polygon needs >= 3 vertices");
    for (std::size_t k = 0; k < verts.size(); ++k) {
      const auto& p = verts[k];
      const auto& q = verts[(k + 1) % verts.size()];
      const double a0 = angle(p);
      double a1 = angle(q);
      if (k + 1 == verts.size()) a1 += kTwoPi;
      add_edge(p, q, a0, a1);
    }
  }
  return edges;
}

double eval_state(const Gauge::State& st, std::span<const double> x) {
  return std::visit(
      Overloaded{
          [&](const family::Logistic& f) {
            if (f.dimension == 2) {
              return (x[0] + x[1]) / f.theta + (1.0 - 2.0 / f.theta) * std::min(x[0], x[1]);
            }
            double sum = 0.0;
            double lo = x[0];
            for (std::size_t k = 0; k < f.dimension; ++k) {
              sum += x[k];
              lo = std::min(lo, x[k]);
            }
            return sum / f.theta + (1.0 - static_cast<double>(f.dimension) / f.theta) * lo;
          },
          [&](const family::GaussianExp& f) {
            return (x[0] + x[1] - 2.0 * f.rho * std::sqrt(x[0] * x[1])) / (1.0 - f.rho * f.rho);
          },
          [&](const family::InvertedLogistic& f) {
            const double hi = std::max(x[0], x[1]);
            if (hi == 0.0) return 0.0;
            const double lo = std::min(x[0], x[1]);
            return hi * std::pow(1.0 + std::pow(lo / hi, 1.0 / f.theta), f.theta);
          },
          [&](const family::Square& f) {
            return std::max({(x[0] - x[1]) / f.theta, (x[1] - x[0]) / f.theta,
                             (x[0] + x[1]) / (2.0 - f.theta)});
          },
          [&](const family::GaussianLaplace&) {
            const std::size_t n = st.dimension;
            double s[32];
            for (std::size_t k = 0; k < n; ++k) s[k] = std::copysign(std::sqrt(std::abs(x[k])), x[k]);
            double total = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
              const auto row = st.precision.row(r);
              double acc = 0.0;
              for (std::size_t c = 0; c < n; ++c) acc += row[c] * s[c];
              total += s[r] * acc;
            }
            return total;
          },
          [&](const family::AsymmetricAD& f) {
            return x[0] / f.theta + x[1] / f.gamma +
                   (1.0 - 1.0 / f.theta - 1.0 / f.gamma) * std::min(x[0], x[1]);
          },
          [&](const family::StarPolygon&) { return eval_polygon(st.polygon, st.margin, x[0], x[1]); },
          [&](const family::Custom& f) { return f.evaluator(x); },
      },
      st.spec);
}

}  // namespace

std::string_view to_string(Margin margin) noexcept {
  return margin == Margin::Exponential ? "exponential" : "laplace";
}

Margin parse_margin(std::string_view text) {
  if (text == "exponential") return Margin::Exponential;
  if (text == "laplace") return Margin::Laplace;
  throw Error(ErrorKind::InvalidArgument,
              "unknown margin '" + std::string(text) + "' (expected exponential or laplace)");
}

std::string_view to_string(Sign sign) noexcept { return sign == Sign::Plus ? "+" : "-"; }

bool in_domain(Margin margin, std::span<const double> x) noexcept {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
    if (margin == Margin::Exponential && v < 0.0) return false;
  }
  return true;
}

Gauge make_gauge(GaugeSpec spec) {
  auto st = std::make_shared<Gauge::State>();
  std::visit(
      Overloaded{
          [&](const family::Logistic& f) {
            require_open_unit(f.theta, "theta");
            if (f.dimension < 2 || f.dimension > 32) {
              throw Error(ErrorKind::ParameterOutOfRange, "logistic dimension must be 2..32");
            }
            st->dimension = f.dimension;
          },
          [&](const family::GaussianExp& f) {
            if (!(f.rho >= 0.0 && f.rho < 1.0)) {
              throw Error(ErrorKind::ParameterOutOfRange,
                          "rho = " + fmt_value(f.rho) + " must lie in [0, 1)");
            }
          },
          [&](const family::InvertedLogistic& f) {
            if (!(f.theta > 0.0 && f.theta <= 1.0)) {
              throw Error(ErrorKind::ParameterOutOfRange,
                          "theta = " + fmt_value(f.theta) + " must lie in (0, 1]");
            }
          },
          [&](const family::Square& f) { require_open_unit(f.theta, "theta"); },
          [&](const family::GaussianLaplace& f) {
            const auto& m = f.correlation;
            if (m.size() < 1 || m.size() > 32) {
              throw Error(ErrorKind::ParameterOutOfRange, "sigma dimension must be 1..32");
            }
            for (std::size_t k = 0; k < m.size(); ++k) {
              if (std::abs(m(k, k) - 1.0) > 1e-12) {
                throw Error(ErrorKind::ParameterOutOfRange,
                            "sigma[" + std::to_string(k) + "][" + std::to_string(k) +
                                "] must equal 1");
              }
            }
            for (std::size_t r = 0; r < m.size(); ++r) {
              for (std::size_t c = r + 1; c < m.size(); ++c) {
                if (std::abs(m(r, c) - m(c, r)) > 1e-12) {
                  throw Error(ErrorKind::ParameterOutOfRange,
                              "sigma must be symmetric (entry " + std::to_string(r) + "," +
                                  std::to_string(c) + ")");
                }
              }
            }
            st->precision = invert_spd(m);
            st->dimension = m.size();
            st->margin = Margin::Laplace;
          },
          [&](const family::AsymmetricAD& f) {
            require_open_unit(f.theta, "theta");
            require_open_unit(f.gamma, "gamma");
          },
          [&](const family::StarPolygon& f) {
            st->margin = f.margin;
            st->polygon = build_polygon(f.vertices, f.margin);
          },
          [&](const family::Custom& f) {
            if (f.dimension < 1) {
              throw Error(ErrorKind::ParameterOutOfRange, "custom gauge dimension must be >= 1");
            }
            if (!f.evaluator) throw Error(ErrorKind::InvalidArgument, "custom gauge needs an evaluator");
            st->dimension = f.dimension;
            st->margin = f.margin;
          },
      },
      spec);
  st->spec = std::move(spec);
  return Gauge(std::move(st));
}

Gauge make_custom_gauge(std::string name, std::size_t dimension, Margin margin,
                        family::Evaluator evaluator) {
  return make_gauge(family::Custom{std::move(name), dimension, margin, std::move(evaluator)});
}

std::size_t Gauge::dimension() const noexcept { return state_->dimension; }
Margin Gauge::margin() const noexcept { return state_->margin; }
const GaugeSpec& Gauge::spec() const noexcept { return state_->spec; }

std::string Gauge::family_name() const {
  return std::visit(Overloaded{
                        [](const family::Logistic&) -> std::string { return "logistic"; },
                        [](const family::GaussianExp&) -> std::string { return "gaussian"; },
                        [](const family::InvertedLogistic&) -> std::string {
                          return "inverted_logistic";
                        },
                        [](const family::Square&) -> std::string { return "square"; },
                        [](const family::GaussianLaplace&) -> std::string {
                          return "gaussian_laplace";
                        },
                        [](const family::AsymmetricAD&) -> std::string { return "asymmetric_ad"; },
                        [](const family::StarPolygon&) -> std::string { return "polygon"; },
                        [](const family::Custom& c) -> std::string { return c.name; },
                    },
                    state_->spec);
}

double Gauge::operator()(std::span<const double> x) const {
  if (x.size() != dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "gauge of dimension " + std::to_string(dimension()) +
                                                  " evaluated at a point of dimension " +
                                                  std::to_string(x.size()));
  }
  if (!in_domain(margin(), x)) {
    throw Error(ErrorKind::DomainViolation,
                margin() == Margin::Exponential
                    ? "exponential-margin gauges need finite non-negative coordinates"
                    : "coordinates must be finite");
  }
  return eval_state(*state_, x);
}

double Gauge::evaluate(std::span<const double> x) const { return eval_state(*state_, x); }

Gauge Gauge::pairwise(std::size_t p, std::size_t q, const MinimizerConfig& cfg) const {
  const std::size_t d = dimension();
  if (p >= d || q >= d || p == q) {
    throw Error(ErrorKind::InvalidArgument, "pairwise positions must be distinct and < dimension");
  }
  if (d == 2 && p == 0 && q == 1) return *this;

  if (const auto* gl = std::get_if<family::GaussianLaplace>(&state_->spec)) {
    const std::size_t idx[2] = {p, q};
    return make_gauge(family::GaussianLaplace{gl->correlation.submatrix(idx)});
  }
  if (const auto* lg = std::get_if<family::Logistic>(&state_->spec)) {
    return make_gauge(family::Logistic{lg->theta, 2});
  }
  if (d == 2) {
    // Swapped arguments.
    return std::visit(
        Overloaded{
            [&](const family::AsymmetricAD& f) {
              return make_gauge(family::AsymmetricAD{f.gamma, f.theta});
            },
            [&](const family::StarPolygon& f) {
              std::vector<std::array<double, 2>> verts;
              for (const auto& v : f.vertices) verts.push_back({v[1], v[0]});
              return make_gauge(family::StarPolygon{std::move(verts), f.margin});
            },
            [&](const family::Custom& f) {
              auto inner = *this;
              return make_custom_gauge(f.name + "-swapped", 2, margin(),
                                       [inner](std::span<const double> x) {
                                         return inner.evaluate2(x[1], x[0]);
                                       });
            },
            [&](const auto&) { return *this; },
        },
        state_->spec);
  }

  // Numerical elimination of the remaining coordinates.
  auto inner = *this;
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < d; ++k) {
    if (k != p && k != q) rest.push_back(k);
  }
  const Margin m = margin();
  return make_custom_gauge(
      family_name() + "-pair", 2, m, [inner, p, q, rest, d, m, cfg](std::span<const double> x) {
        std::vector<double> full(d, 0.0);
        full[p] = x[0];
        full[q] = x[1];
        const double bound = inner.evaluate(full);
        std::vector<Bounds> box(rest.size(),
                                Bounds{m == Margin::Exponential ? 0.0 : -bound, bound});
        return minimize_box(
                   [&](std::span<const double> y) {
                     for (std::size_t k = 0; k < rest.size(); ++k) full[rest[k]] = y[k];
                     return inner.evaluate(full);
                   },
                   box, cfg)
            .value;
      });
}

EdgeCoefficients EdgeCoefficients::from_alpha_beta(double alpha, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw Error(ErrorKind::ParameterOutOfRange, "beta = " + fmt_value(beta) + " must lie in [0, 1)");
  }
  return {alpha, beta, 1.0 / (1.0 - beta)};
}

std::optional<double> closed_form_alpha(const Gauge& g, Sign conditioning) {
  if (g.dimension() != 2) return std::nullopt;
  if (g.margin() == Margin::Exponential && conditioning == Sign::Minus) return std::nullopt;
  return std::visit(
      Overloaded{
          [](const family::Logistic&) -> std::optional<double> { return 1.0; },
          [](const family::GaussianExp& f) -> std::optional<double> { return f.rho * f.rho; },
          [](const family::InvertedLogistic&) -> std::optional<double> { return 0.0; },
          [](const family::Square& f) -> std::optional<double> { return 1.0 - f.theta; },
          [](const family::AsymmetricAD&) -> std::optional<double> { return 1.0; },
          [&](const family::GaussianLaplace& f) -> std::optional<double> {
            const double rho = f.correlation(0, 1);
            const double signed_sq = (rho > 0.0 ? 1.0 : rho < 0.0 ? -1.0 : 0.0) * rho * rho;
            return conditioning == Sign::Plus ? signed_sq : -signed_sq;
          },
          [](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      g.spec());
}

std::optional<double> closed_form_beta(const Gauge& g) {
  if (g.dimension() != 2 || g.margin() != Margin::Exponential) return std::nullopt;
  return std::visit(
      Overloaded{
          [](const family::Logistic&) -> std::optional<double> { return 0.0; },
          // rho = 0 is independence: g(1, x) - 1 = x is linear.
          [](const family::GaussianExp& f) -> std::optional<double> {
            return f.rho > 0.0 ? 0.5 : 0.0;
          },
          [](const family::InvertedLogistic& f) -> std::optional<double> { return 1.0 - f.theta; },
          [](const family::Square&) -> std::optional<double> { return 0.0; },
          [](const family::AsymmetricAD&) -> std::optional<double> { return 0.0; },
          [](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      g.spec());
}

AxiomReport check_gauge_axioms(const Gauge& g, int n_rays, double tol, std::uint64_t seed) {
  if (n_rays < 1 || !(tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "need n_rays >= 1 and tol > 0");
  }
  std::mt19937_64 rng(seed);
  const double lo = g.margin() == Margin::Exponential ? 0.0 : -1.0;
  std::uniform_real_distribution<double> coord(lo, 1.0);
  std::uniform_real_distribution<double> log_radius(std::log(0.1), std::log(10.0));
  AxiomReport report;
  report.rays = n_rays;
  std::vector<double> x(g.dimension());
  std::vector<double> x2(g.dimension());
  for (int r = 0; r < n_rays; ++r) {
    const double radius = std::exp(log_radius(rng));
    double sup = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = radius * coord(rng);
      x2[k] = 2.0 * x[k];
      sup = std::max(sup, std::abs(x[k]));
    }
    const double gx = g.evaluate(x);
    const double g2x = g.evaluate(x2);
    report.max_homogeneity_defect = std::max(report.max_homogeneity_defect, std::abs(g2x - 2.0 * gx));
    report.max_lower_bound_violation = std::max(report.max_lower_bound_violation, sup - gx);
  }
  report.passed = report.max_homogeneity_defect <= tol && report.max_lower_bound_violation <= tol;
  return report;
}

}  // namespace gauge_graph
