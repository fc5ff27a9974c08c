#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace gauge_graph {

using Vertex = int;

/// Ordered vertex sequence v_0, ..., v_m; consecutive vertices share a clique.
struct Path {
  std::vector<Vertex> vertices;

  std::size_t length() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
};

using Edge = std::pair<Vertex, Vertex>;

/// Connected graph whose cliques meet in single vertices, stored in a
/// running-intersection order.
class BlockGraph {
 public:
  /// Sorted vertex labels.
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  /// Cliques in running-intersection order, each sorted.
  const std::vector<std::vector<Vertex>>& cliques() const noexcept { return cliques_; }
  /// separators()[k] is the intersection of clique k + 1 with the earlier cliques.
  const std::vector<Vertex>& separators() const noexcept { return separators_; }

  std::size_t size() const noexcept { return vertices_.size(); }
  bool contains(Vertex v) const noexcept;
  /// Position of `v` in vertices(); UnknownVertex when absent.
  std::size_t index_of(Vertex v) const;
  /// Sorted neighbours of `v`.
  const std::vector<Vertex>& neighbors(Vertex v) const;
  /// Index (into cliques()) of the unique clique holding both endpoints;
  /// InvalidArgument when u and v are not adjacent.
  std::size_t clique_of_edge(Vertex u, Vertex v) const;
  /// Indices of the cliques containing `v`.
  std::vector<std::size_t> cliques_containing(Vertex v) const;
  /// True when every clique has exactly two vertices.
  bool is_tree() const noexcept;

  friend BlockGraph build_block_graph(std::vector<std::vector<Vertex>> cliques);

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::vector<Vertex>> cliques_;
  std::vector<Vertex> separators_;
  std::vector<std::vector<Vertex>> adjacency_;
};

/// Validates the block-graph structure and orders the cliques.
/// Errors: InvalidArgument (empty list, clique of size < 2), SeparatorNotSingleton,
/// NotConnected, NotDecomposable.
BlockGraph build_block_graph(std::vector<std::vector<Vertex>> cliques);

/// Unique shortest path from i to j. Errors: SameVertex, UnknownVertex.
Path shortest_path(const BlockGraph& g, Vertex i, Vertex j);

/// Consecutive edges (v_{k-1}, v_k) of the shortest path from i to j.
std::vector<Edge> chain_reduction(const BlockGraph& g, Vertex i, Vertex j);

}  // namespace gauge_graph
