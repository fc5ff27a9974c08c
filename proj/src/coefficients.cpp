#include "gauge_graph/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gauge_graph/error.hpp"

namespace gauge_graph {

namespace {

// Numeric edge alphas this close to zero are treated as zero in recurrences.
constexpr double kAlphaZeroSnap = 1e-6;

constexpr double kBetaCeiling = 1.0 - 1e-12;

Sign sign_of(double v) { return v < 0.0 ? Sign::Minus : Sign::Plus; }

double edge_alpha_value(const Gauge& g, Sign s, const MinimizerConfig& cfg) {
  if (auto a = closed_form_alpha(g, s)) return *a;
  const double a = edge_alpha(g, s, cfg).value;
  return std::abs(a) <= kAlphaZeroSnap ? 0.0 : a;
}

}  // namespace

std::string_view to_string(AlphaMethod method) noexcept {
  return method == AlphaMethod::Recurrence ? "recurrence" : "numeric";
}

std::string_view to_string(BetaMethod method) noexcept {
  return method == BetaMethod::Recurrence ? "recurrence" : "numeric_fit";
}

AlphaResult edge_alpha(const Gauge& g, Sign conditioning, const MinimizerConfig& cfg) {
  if (g.dimension() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "edge_alpha needs a bivariate gauge");
  }
  const bool exponential = g.margin() == Margin::Exponential;
  if (exponential && conditioning == Sign::Minus) {
    throw Error(ErrorKind::InvalidArgument, "negative conditioning needs Laplace margins");
  }
  const double s = sign_value(conditioning);
  const auto r = rightmost_minimizer_1d([&](double y) { return g.evaluate2(s, y); },
                                        Bounds{exponential ? 0.0 : -1.0, 1.0}, cfg);
  if (std::abs(r.value - 1.0) > cfg.contact_tolerance) {
    throw Error(ErrorKind::ContactValueNotOne,
                "min over y of g(" + std::string(conditioning == Sign::Plus ? "1" : "-1") +
                    ", y) is " + std::to_string(r.value) + ", not 1");
  }
  return {r.argmin, conditioning, AlphaMethod::Numeric, r.value};
}

AlphaResult alpha_path(const Model& m, Vertex i, Vertex j, const MinimizerConfig& cfg) {
  if (m.margin() != Margin::Exponential) {
    throw Error(ErrorKind::MarginMismatch, "alpha_path needs Exponential margins; use the signed recursion");
  }
  double value = 1.0;
  for (const auto& [u, v] : chain_reduction(m.graph(), i, j)) {
    const double a = edge_alpha_value(m.edge_gauge(u, v, cfg), Sign::Plus, cfg);
    if (a == 0.0) return {0.0, Sign::Plus, AlphaMethod::Recurrence, std::nullopt};
    value *= a;
  }
  return {value, Sign::Plus, AlphaMethod::Recurrence, std::nullopt};
}

AlphaResult alpha_path_signed(const Model& m, Vertex i, Vertex j, Sign conditioning,
                              const MinimizerConfig& cfg) {
  if (m.margin() == Margin::Exponential && conditioning == Sign::Minus) {
    throw Error(ErrorKind::InvalidArgument, "negative conditioning needs Laplace margins");
  }
  double magnitude = 1.0;
  Sign s = conditioning;
  for (const auto& [u, v] : chain_reduction(m.graph(), i, j)) {
    const double a = edge_alpha_value(m.edge_gauge(u, v, cfg), s, cfg);
    if (a == 0.0) return {0.0, conditioning, AlphaMethod::Recurrence, std::nullopt};
    magnitude *= std::abs(a);
    s = sign_of(a);
  }
  return {sign_value(s) * magnitude, conditioning, AlphaMethod::Recurrence, std::nullopt};
}

std::vector<AlphaVectorEntry> alpha_vector(const Model& m, Vertex i, Sign conditioning,
                                           const MinimizerConfig& cfg) {
  const bool exponential = m.margin() == Margin::Exponential;
  if (exponential && conditioning == Sign::Minus) {
    throw Error(ErrorKind::InvalidArgument, "negative conditioning needs Laplace margins");
  }
  const std::size_t n = m.size();
  const std::size_t pinned = m.graph().index_of(i);
  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != pinned) free.push_back(k);
  }
  std::vector<double> x(n, 0.0);
  x[pinned] = sign_value(conditioning);
  const std::vector<Bounds> box(free.size(), Bounds{exponential ? 0.0 : -1.0, 1.0});
  const auto best = minimize_box(
      [&](std::span<const double> y) {
        for (std::size_t k = 0; k < free.size(); ++k) x[free[k]] = y[k];
        return m.evaluate(x);
      },
      box, cfg);
  for (std::size_t k = 0; k < free.size(); ++k) x[free[k]] = best.argmin[k];
  double value = m.evaluate(x);

  // Push each coordinate to the right end of its minimizing set until stable.
  for (int sweep = 0; sweep < 50; ++sweep) {
    bool moved = false;
    for (std::size_t p : free) {
      const double current = x[p];
      const double edge = sublevel_right_edge(
          [&](double y) {
            x[p] = y;
            return m.evaluate(x);
          },
          current, 1.0, value, cfg);
      x[p] = current;
      if (edge > current + 1e-12) {
        x[p] = edge;
        value = std::min(value, m.evaluate(x));
        moved = true;
      }
    }
    if (!moved) break;
  }
  value = m.evaluate(x);
  if (std::abs(value - 1.0) > cfg.contact_tolerance) {
    throw Error(ErrorKind::ContactValueNotOne,
                "joint gauge minimum with vertex " + std::to_string(i) + " pinned is " +
                    std::to_string(value) + ", not 1");
  }
  std::vector<AlphaVectorEntry> out;
  for (std::size_t p : free) {
    out.push_back({m.graph().vertices()[p], {x[p], conditioning, AlphaMethod::Numeric, value}});
  }
  return out;
}

BetaResult edge_beta(const Gauge& g, double alpha, const SlopeFitConfig& cfg) {
  if (g.dimension() != 2) throw Error(ErrorKind::DimensionMismatch, "edge_beta needs a bivariate gauge");
  if (g.margin() != Margin::Exponential) {
    throw Error(ErrorKind::NotSupported, "beta is only defined here for Exponential margins");
  }
  const auto fit = fit_loglog_slope([&](double x) { return g.evaluate2(1.0, alpha + x) - 1.0; }, cfg);
  const double beta = std::clamp(1.0 - 1.0 / fit.sigma, 0.0, kBetaCeiling);
  return {beta, 1.0 / (1.0 - beta), BetaMethod::NumericFit, fit};
}

EdgeCoefficients edge_coefficients(const Gauge& g, const MinimizerConfig& mcfg,
                                   const SlopeFitConfig& scfg) {
  const double alpha = edge_alpha_value(g, Sign::Plus, mcfg);
  double beta = 0.0;
  if (auto b = closed_form_beta(g)) {
    beta = *b;
  } else {
    beta = edge_beta(g, alpha, scfg).value;
  }
  return EdgeCoefficients::from_alpha_beta(alpha, beta);
}

BetaResult beta_path(std::span<const EdgeCoefficients> edges) {
  if (edges.empty()) throw Error(ErrorKind::InvalidArgument, "beta_path needs at least one edge");
  double alpha = edges[0].alpha;
  double beta = edges[0].beta;
  for (std::size_t k = 1; k < edges.size(); ++k) {
    const auto& e = edges[k];
    if (!(e.beta >= 0.0 && e.beta < 1.0)) {
      throw Error(ErrorKind::ParameterOutOfRange, "edge beta must lie in [0, 1)");
    }
    const bool prefix_zero = alpha == 0.0;
    const bool edge_zero = e.alpha == 0.0;
    if (!prefix_zero && !edge_zero) {
      beta = std::max(beta, e.beta);
    } else if (prefix_zero && edge_zero) {
      beta = beta * e.beta;
    } else if (edge_zero) {
      beta = e.beta;
    }
    alpha *= e.alpha;
  }
  return {beta, 1.0 / (1.0 - beta), BetaMethod::Recurrence, std::nullopt};
}

std::vector<EdgeCoefficients> path_edge_coefficients(const Model& m, Vertex i, Vertex j,
                                                     const MinimizerConfig& mcfg,
                                                     const SlopeFitConfig& scfg) {
  if (m.margin() != Margin::Exponential) {
    throw Error(ErrorKind::NotSupported, "beta is only defined here for Exponential margins");
  }
  std::vector<EdgeCoefficients> out;
  for (const auto& [u, v] : chain_reduction(m.graph(), i, j)) {
    out.push_back(edge_coefficients(m.edge_gauge(u, v, mcfg), mcfg, scfg));
  }
  return out;
}

BetaResult beta_path(const Model& m, Vertex i, Vertex j, const MinimizerConfig& mcfg,
                     const SlopeFitConfig& scfg) {
  const auto edges = path_edge_coefficients(m, i, j, mcfg, scfg);
  return beta_path(edges);
}

std::optional<double> beta_all_alpha_positive(std::span<const EdgeCoefficients> edges) {
  if (edges.empty()) return std::nullopt;
  double beta = 0.0;
  for (const auto& e : edges) {
    if (!(e.alpha > 0.0)) return std::nullopt;
    beta = std::max(beta, e.beta);
  }
  return beta;
}

std::optional<double> beta_all_alpha_zero(std::span<const EdgeCoefficients> edges) {
  if (edges.empty()) return std::nullopt;
  double beta = 1.0;
  for (const auto& e : edges) {
    if (e.alpha != 0.0) return std::nullopt;
    beta *= e.beta;
  }
  return beta;
}

}  // namespace gauge_graph
