#pragma once

#include <vector>

#include "gauge_graph/model.hpp"

namespace gauge_graph {

struct DirectionConfig {
  /// Off-subset coordinates are searched in [0, 1 - eps] (or [-1 + eps, 1 - eps]).
  double corner_eps = 1e-6;
  /// A subset is a direction when the minimal gap is at most this.
  double tolerance = 1e-4;
  MinimizerConfig minimizer;
};

struct Direction {
  std::vector<Vertex> subset;
  /// Indexed like graph().vertices(): 1 on the subset, gamma elsewhere.
  std::vector<double> witness;
  double gap = 0.0;
  bool accepted = false;
};

/// Minimizes the joint gauge at z^A over the off-subset coordinates.
/// Errors: EmptySubset, UnknownVertex.
Direction is_direction(const Model& m, std::vector<Vertex> subset, const DirectionConfig& cfg = {});

/// All accepted subsets, in order of size then lexicographic.
/// Errors: DimensionTooLarge (more than 12 vertices).
std::vector<Direction> enumerate_directions(const Model& m, const DirectionConfig& cfg = {});

struct AlphaDirections {
  std::vector<std::vector<Vertex>> subsets;
  /// Set when some candidate is the full vertex set, which can hide smaller directions.
  bool possibly_incomplete = false;
};

/// Candidates {i} together with {j : alpha_{j|i} = 1}. Errors: NotSupported (Laplace).
AlphaDirections directions_from_alphas(const Model& m, const MinimizerConfig& cfg = {},
                                       double unit_tolerance = 1e-4);

struct CliqueEquivalence {
  double joint_value = 0.0;
  std::vector<double> clique_values;
  bool cliques_at_one = false;
  bool joint_at_one = false;
  /// All cliques at one implies the joint gauge at one.
  bool forward = false;
  /// The joint gauge at one implies all cliques at one.
  bool backward = false;
};

CliqueEquivalence check_clique_equivalence(const Model& m, double tol = 1e-9);

/// Separators on paths between subset members that the subset leaves out.
std::vector<Vertex> omitted_separators(const Model& m, const std::vector<Vertex>& subset);

/// min g(z^A) - 1 with omitted separator coordinates capped at 1 - eps.
/// Errors: SeparatorsIncluded, EmptySubset.
double separator_gap(const Model& m, std::vector<Vertex> subset, double eps,
                     const MinimizerConfig& cfg = {});

struct TreeADMarginal {
  double theta_eff = 0.0;
  double gamma_eff = 0.0;
};

/// Effective parameters of the (x_k, x_l) marginal of a tree whose edges are
/// all AsymmetricAD. Errors: NotATree, NotAllAD, MarginMismatch, path errors.
TreeADMarginal tree_ad_marginal(const Model& m, Vertex k, Vertex l);

/// The AsymmetricAD gauge with the effective parameters.
Gauge tree_ad_gauge(const TreeADMarginal& t);

}  // namespace gauge_graph
