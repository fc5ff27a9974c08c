#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "gauge_graph/model.hpp"

namespace gauge_graph {

enum class AlphaMethod { Recurrence, Numeric };
enum class BetaMethod { Recurrence, NumericFit };

std::string_view to_string(AlphaMethod method) noexcept;
std::string_view to_string(BetaMethod method) noexcept;

struct AlphaResult {
  double value = 0.0;
  Sign conditioning_sign = Sign::Plus;
  AlphaMethod method = AlphaMethod::Numeric;
  /// Gauge value at the contact point; numeric results only.
  std::optional<double> contact_value;
};

struct BetaResult {
  double value = 0.0;
  double sigma = 1.0;
  BetaMethod method = BetaMethod::Recurrence;
  /// Fit diagnostics; NumericFit only. `fit->sigma` is the raw slope before
  /// beta is clamped to [0, 1).
  std::optional<SlopeFit> fit;
};

/// Rightmost minimizer of y -> g(sign * 1, y) over [0, 1] or [-1, 1].
/// Errors: ContactValueNotOne, DimensionMismatch, InvalidArgument (Minus under Exponential).
AlphaResult edge_alpha(const Gauge& g, Sign conditioning = Sign::Plus,
                       const MinimizerConfig& cfg = {});

/// Product of edge alphas along the shortest path; Exponential margins.
/// Catalogue edges use closed forms, other edges numeric edge_alpha.
/// Errors: MarginMismatch (Laplace model), path errors.
AlphaResult alpha_path(const Model& m, Vertex i, Vertex j, const MinimizerConfig& cfg = {});

/// Signed recursion along the shortest path: each edge is conditioned on the
/// sign of the previous partial coefficient (zero counts as positive).
AlphaResult alpha_path_signed(const Model& m, Vertex i, Vertex j, Sign conditioning = Sign::Plus,
                              const MinimizerConfig& cfg = {});

struct AlphaVectorEntry {
  Vertex vertex = 0;
  AlphaResult alpha;
};

/// Coordinatewise-maximal minimizer of the joint gauge with x_i = sign * 1.
/// Entries follow graph().vertices() order, skipping i. Errors: ContactValueNotOne.
std::vector<AlphaVectorEntry> alpha_vector(const Model& m, Vertex i, Sign conditioning = Sign::Plus,
                                           const MinimizerConfig& cfg = {});

/// Numeric beta: slope of log(g(1, alpha + x) - 1) against log x.
BetaResult edge_beta(const Gauge& g, double alpha, const SlopeFitConfig& cfg = {});

/// Closed-form (alpha, beta) of a catalogue edge, numeric values otherwise.
EdgeCoefficients edge_coefficients(const Gauge& g, const MinimizerConfig& mcfg = {},
                                   const SlopeFitConfig& scfg = {});

/// Folds (alpha, beta) along the given directed edges, first edge leaving the
/// conditioning vertex.
BetaResult beta_path(std::span<const EdgeCoefficients> edges);

/// beta_path over the model's shortest path. Errors: NotSupported (Laplace).
BetaResult beta_path(const Model& m, Vertex i, Vertex j, const MinimizerConfig& mcfg = {},
                     const SlopeFitConfig& scfg = {});

/// Shortcut when every edge alpha is positive: the largest edge beta.
std::optional<double> beta_all_alpha_positive(std::span<const EdgeCoefficients> edges);
/// Shortcut when every edge alpha is zero: the product of edge betas.
std::optional<double> beta_all_alpha_zero(std::span<const EdgeCoefficients> edges);

/// Edge (alpha, beta) along the shortest path from i to j.
std::vector<EdgeCoefficients> path_edge_coefficients(const Model& m, Vertex i, Vertex j,
                                                     const MinimizerConfig& mcfg = {},
                                                     const SlopeFitConfig& scfg = {});

}  // namespace gauge_graph
