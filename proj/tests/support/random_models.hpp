#pragma once

// Seeded random block-graph models shared by the unit and acceptance tests.

#include <random>
#include <vector>

#include "gauge_graph/model.hpp"

namespace testing_models {

using gauge_graph::CliqueGauge;
using gauge_graph::Gauge;
using gauge_graph::GaugeSpec;
using gauge_graph::Margin;
using gauge_graph::Model;
using gauge_graph::Vertex;
namespace family = gauge_graph::family;

enum class Kind {
  Catalogue,  // pairwise catalogue gauges plus logistic triangles
  AD,        // asymptotically dependent cliques: logistic and asymmetric AD
  ADTree,    // asymmetric AD on every edge of a tree
  Gaussian,  // GaussianExp on every edge of a tree
};

/// Grows a connected block graph on `d` vertices: each new clique shares one
/// existing vertex. `max_clique` bounds the clique size.
inline std::vector<std::vector<Vertex>> random_block_graph(std::mt19937_64& rng, int d, int max_clique) {
  std::vector<std::vector<Vertex>> cliques;
  std::uniform_int_distribution<int> size_pick(2, max_clique);
  int next = 0;
  int first = std::min(size_pick(rng), d);
  std::vector<Vertex> c0;
  for (int k = 0; k < first; ++k) c0.push_back(next++);
  cliques.push_back(c0);
  while (next < d) {
    std::uniform_int_distribution<int> anchor_pick(0, next - 1);
    const int size = std::min(size_pick(rng), d - next + 1);
    std::vector<Vertex> c{anchor_pick(rng)};
    for (int k = 1; k < size; ++k) c.push_back(next++);
    cliques.push_back(c);
  }
  return cliques;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline GaugeSpec random_spec(std::mt19937_64& rng, Kind kind, std::size_t size) {
  if (kind == Kind::ADTree) return family::AsymmetricAD{uniform(rng, 0.15, 0.85), uniform(rng, 0.15, 0.85)};
  if (kind == Kind::Gaussian) return family::GaussianExp{uniform(rng, 0.1, 0.9)};
  if (size > 2) return family::Logistic{uniform(rng, 0.2, 0.8), size};
  if (kind == Kind::AD) {
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) return family::Logistic{uniform(rng, 0.2, 0.8), 2};
    return family::AsymmetricAD{uniform(rng, 0.2, 0.8), uniform(rng, 0.2, 0.8)};
  }
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return family::Logistic{uniform(rng, 0.2, 0.8), 2};
    case 1: return family::GaussianExp{uniform(rng, 0.2, 0.9)};
    case 2: return family::InvertedLogistic{uniform(rng, 0.2, 0.9)};
    default: return family::Square{uniform(rng, 0.2, 0.8)};
  }
}

inline Model random_model(std::mt19937_64& rng, int d, Kind kind, int max_clique = 3) {
  if (kind == Kind::ADTree || kind == Kind::Gaussian) max_clique = 2;
  auto cliques = random_block_graph(rng, d, max_clique);
  std::vector<CliqueGauge> gauges;
  for (const auto& c : cliques) gauges.push_back({c, gauge_graph::make_gauge(random_spec(rng, kind, c.size()))});
  return gauge_graph::assemble_model(gauge_graph::build_block_graph(cliques), std::move(gauges),
                                     Margin::Exponential);
}

/// Chain 0 - 1 - ... - n with one gauge per edge.
inline Model chain_model(const std::vector<GaugeSpec>& edges, Margin margin = Margin::Exponential) {
  std::vector<std::vector<Vertex>> cliques;
  std::vector<CliqueGauge> gauges;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::vector<Vertex> c{static_cast<Vertex>(k), static_cast<Vertex>(k + 1)};
    cliques.push_back(c);
    gauges.push_back({c, gauge_graph::make_gauge(edges[k])});
  }
  return gauge_graph::assemble_model(gauge_graph::build_block_graph(cliques), std::move(gauges), margin);
}

}  // namespace testing_models
