#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gauge_graph/numerics.hpp"

namespace gauge_graph {

/// Standardized margins: exponential coordinates live on [0, inf),
/// Laplace coordinates on the whole real line.
enum class Margin { Exponential, Laplace };

std::string_view to_string(Margin margin) noexcept;
Margin parse_margin(std::string_view text);

/// Sign of the conditioning variable (Minus is meaningful under Laplace only).
enum class Sign { Plus, Minus };

std::string_view to_string(Sign sign) noexcept;
inline double sign_value(Sign s) noexcept { return s == Sign::Plus ? 1.0 : -1.0; }

namespace family {

/// sum_i x_i/theta + (1 - d/theta) min_i x_i, theta in (0, 1); d = 2 is the
/// bivariate logistic gauge. Every pairwise marginal is bivariate logistic.
struct Logistic {
  double theta = 0.5;
  std::size_t dimension = 2;
};

/// (x1 + x2 - 2 rho sqrt(x1 x2)) / (1 - rho^2), rho in [0, 1).
struct GaussianExp {
  double rho = 0.5;
};

/// (x1^(1/theta) + x2^(1/theta))^theta, theta in (0, 1].
struct InvertedLogistic {
  double theta = 0.5;
};

/// max{(x1 - x2)/theta, (x2 - x1)/theta, (x1 + x2)/(2 - theta)}, theta in (0, 1).
struct Square {
  double theta = 0.5;
};

/// s' Sigma^-1 s with s_i = sgn(x_i) |x_i|^(1/2); Laplace margins, any dimension.
struct GaussianLaplace {
  SquareMatrix correlation;
};

/// x1/theta + x2/gamma + (1 - 1/theta - 1/gamma) min(x1, x2), theta, gamma in (0, 1).
/// The parameters are tied to the stored argument order.
struct AsymmetricAD {
  double theta = 0.5;
  double gamma = 0.5;
};

/// Piecewise-linear gauge of a star-shaped polygon around the origin.
/// Laplace: the vertices must surround the origin. Exponential: they run from
/// the positive x-axis to the positive y-axis and the origin closes the region.
struct StarPolygon {
  std::vector<std::array<double, 2>> vertices;
  Margin margin = Margin::Laplace;
};

using Evaluator = std::function<double(std::span<const double>)>;

/// User-supplied evaluator; axioms are checked on demand, not at construction.
struct Custom {
  std::string name;
  std::size_t dimension = 2;
  Margin margin = Margin::Exponential;
  Evaluator evaluator;
};

}  // namespace family

using GaugeSpec = std::variant<family::Logistic, family::GaussianExp, family::InvertedLogistic,
                               family::Square, family::GaussianLaplace, family::AsymmetricAD,
                               family::StarPolygon, family::Custom>;

/// Immutable, shareable 1-homogeneous gauge function.
class Gauge {
 public:
  std::size_t dimension() const noexcept;
  Margin margin() const noexcept;
  const GaugeSpec& spec() const noexcept;
  /// Lower-case family name ("logistic", "gaussian", ...; custom gauges report their name).
  std::string family_name() const;

  /// Checked evaluation: DimensionMismatch / DomainViolation on bad input.
  double operator()(std::span<const double> x) const;
  double operator()(std::initializer_list<double> x) const {
    return (*this)(std::span<const double>(x.begin(), x.size()));
  }
  /// Evaluation without argument validation, for inner loops.
  double evaluate(std::span<const double> x) const;
  double evaluate2(double x1, double x2) const {
    const double x[2] = {x1, x2};
    return evaluate(x);
  }

  /// Bivariate gauge of arguments (x_p, x_q). Catalogue families use closed
  /// forms (argument swap, correlation sub-block); other gauges of higher
  /// dimension are marginalized numerically.
  Gauge pairwise(std::size_t p, std::size_t q, const MinimizerConfig& cfg = {}) const;

  struct State;

 private:
  explicit Gauge(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  friend Gauge make_gauge(GaugeSpec spec);

  std::shared_ptr<const State> state_;
};

/// Validates the parameters of `spec` and builds the gauge.
/// Throws ParameterOutOfRange naming the parameter, or NotPositiveDefinite.
Gauge make_gauge(GaugeSpec spec);

Gauge make_custom_gauge(std::string name, std::size_t dimension, Margin margin,
                        family::Evaluator evaluator);

/// True when the domain admits x (non-negative under Exponential margins).
bool in_domain(Margin margin, std::span<const double> x) noexcept;

/// Conditioning/contact coefficients for one directed edge.
struct EdgeCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 1.0;

  static EdgeCoefficients from_alpha_beta(double alpha, double beta);
};

/// Closed-form alpha of the second argument given the first at sign * 1,
/// when the family has one (catalogue bivariate gauges).
std::optional<double> closed_form_alpha(const Gauge& g, Sign conditioning = Sign::Plus);
/// Closed-form beta of a bivariate Exponential-margin catalogue gauge.
std::optional<double> closed_form_beta(const Gauge& g);

struct AxiomReport {
  int rays = 0;
  double max_homogeneity_defect = 0.0;
  double max_lower_bound_violation = 0.0;
  bool passed = false;
};

/// Samples `n_rays` domain points and measures |g(2x) - 2g(x)| and
/// max(0, max_i |x_i| - g(x)).
AxiomReport check_gauge_axioms(const Gauge& g, int n_rays, double tol,
                               std::uint64_t seed = 0x5eedULL);

}  // namespace gauge_graph
