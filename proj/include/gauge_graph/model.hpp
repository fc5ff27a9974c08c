#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gauge_graph/block_graph.hpp"
#include "gauge_graph/gauge.hpp"

namespace gauge_graph {

/// Gauge of one clique; `vertices` lists the clique members in argument order.
struct CliqueGauge {
  std::vector<Vertex> vertices;
  Gauge gauge;
};

/// Block graph with one gauge per clique. Joint gauge:
/// sum over cliques of g_C(x_C) minus sum over separators of |x_D|.
class Model {
 public:
  const BlockGraph& graph() const noexcept;
  Margin margin() const noexcept;
  /// Aligned with graph().cliques().
  const std::vector<CliqueGauge>& clique_gauges() const noexcept;
  std::size_t size() const noexcept { return graph().size(); }

  /// Joint gauge without input validation; x is indexed like graph().vertices().
  double evaluate(std::span<const double> x) const;

  /// Bivariate gauge of (x_u, x_v) for adjacent u, v, taken from their clique.
  Gauge edge_gauge(Vertex u, Vertex v, const MinimizerConfig& cfg = {}) const;

  /// The joint gauge as a Gauge of dimension size().
  Gauge as_gauge() const;

  struct Impl;

 private:
  explicit Model(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  friend Model assemble_model(BlockGraph graph, std::vector<CliqueGauge> gauges, Margin margin);

  std::shared_ptr<const Impl> impl_;
};

/// Errors: MissingCliqueGauge, UnknownClique, DimensionMismatch, MarginMismatch,
/// InvalidArgument (two gauges for one clique).
Model assemble_model(BlockGraph graph, std::vector<CliqueGauge> gauges, Margin margin);

/// Checked joint evaluation. Errors: DimensionMismatch, DomainViolation.
double eval_joint(const Model& m, std::span<const double> x);

enum class MarginalMethod { NumericElimination, ChainComposition };

std::string_view to_string(MarginalMethod method) noexcept;

struct MarginalGauge {
  std::vector<Vertex> kept;
  MarginalMethod method = MarginalMethod::NumericElimination;
  Gauge gauge;
};

/// Gauge of the coordinates at `keep` (positions into g's arguments, in the
/// order given), minimizing over the rest. The search box for an eliminated
/// coordinate is [0, U] or [-U, U] with U the value at zero eliminated coordinates.
Gauge eliminate(const Gauge& g, std::vector<std::size_t> keep, const MinimizerConfig& cfg = {});

/// Numeric marginal over `kept`. Errors: EmptyKeptSet, UnknownVertex,
/// InvalidArgument (repeated vertex).
MarginalGauge marginal_gauge(const Model& m, std::vector<Vertex> kept,
                             const MinimizerConfig& cfg = {});

struct CompositionConfig {
  /// Intermediate compositions are nested exactly while the nesting depth
  /// stays within this bound; deeper ones are replaced by an angular table.
  int exact_depth = 2;
  /// Initial uniform intervals per quadrant; each is bisected until linear
  /// interpolation matches the gauge within table_tolerance.
  int table_intervals = 256;
  double table_tolerance = 1e-8;
  MinimizerConfig minimizer;
};

/// (x_a, x_b) -> min_t [left(x_a, t) + right(t, x_b) - |t|].
Gauge compose_pair(const Gauge& left, const Gauge& right, const MinimizerConfig& cfg = {});

/// Piecewise-linear angular interpolant of a bivariate gauge.
Gauge tabulate_gauge(const Gauge& g, int intervals = 256, double tolerance = 1e-8);

/// Pairwise marginal of (x_i, x_j) by composition along the shortest path.
/// Errors: SameVertex, UnknownVertex.
MarginalGauge pairwise_marginal(const Model& m, Vertex i, Vertex j,
                                const CompositionConfig& cfg = {});

/// Points w / g(w) on the unit level set. Bivariate gauges use evenly spaced,
/// angularly ordered directions; higher dimensions sample directions uniformly
/// on the simplex (Exponential) or the sup-norm sphere (Laplace).
std::vector<std::vector<double>> sample_level_set(const Gauge& g, int n,
                                                  std::uint64_t seed = 0x5eedULL);
std::vector<std::vector<double>> sample_level_set(const Model& m, int n,
                                                  std::uint64_t seed = 0x5eedULL);

}  // namespace gauge_graph
