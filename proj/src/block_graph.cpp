#include "gauge_graph/block_graph.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <string>

#include "gauge_graph/error.hpp"

namespace gauge_graph {

namespace {

std::string format_set(const std::vector<Vertex>& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(s[k]);
  }
  return out + "}";
}

std::vector<Vertex> intersect(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

BlockGraph build_block_graph(std::vector<std::vector<Vertex>> cliques) {
  if (cliques.empty()) throw Error(ErrorKind::InvalidArgument, "at least one clique is required");
  for (auto& c : cliques) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (c.size() < 2) {
      throw Error(ErrorKind::InvalidArgument, "clique " + format_set(c) + " has fewer than 2 vertices");
    }
  }
  std::sort(cliques.begin(), cliques.end());

  const std::size_t n = cliques.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto common = intersect(cliques[a], cliques[b]);
      if (common.size() >= 2) {
        throw Error(ErrorKind::SeparatorNotSingleton,
                    "cliques " + format_set(cliques[a]) + " and " + format_set(cliques[b]) +
                        " intersect in " + format_set(common));
      }
    }
  }

  // Greedy maximum-cardinality ordering over cliques.
  std::vector<bool> placed(n, false);
  std::vector<std::size_t> order{0};
  placed[0] = true;
  std::vector<Vertex> covered = cliques[0];
  std::vector<Vertex> separators;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t best = n;
    std::size_t best_overlap = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (placed[c]) continue;
      const std::size_t overlap = intersect(cliques[c], covered).size();
      if (overlap > best_overlap) {
        best = c;
        best_overlap = overlap;
      }
    }
    if (best == n) {
      std::vector<Vertex> rest;
      for (std::size_t c = 0; c < n; ++c) {
        if (!placed[c]) rest.insert(rest.end(), cliques[c].begin(), cliques[c].end());
      }
      std::sort(rest.begin(), rest.end());
      rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
      throw Error(ErrorKind::NotConnected,
                  "vertices " + format_set(rest) + " are not connected to " + format_set(covered));
    }
    const auto sep = intersect(cliques[best], covered);
    if (sep.size() != 1) {
      throw Error(ErrorKind::NotDecomposable,
                  "clique " + format_set(cliques[best]) + " closes a cycle through " + format_set(sep));
    }
    separators.push_back(sep.front());
    placed[best] = true;
    order.push_back(best);
    std::vector<Vertex> merged;
    std::set_union(covered.begin(), covered.end(), cliques[best].begin(), cliques[best].end(),
                   std::back_inserter(merged));
    covered = std::move(merged);
  }

  BlockGraph g;
  g.vertices_ = covered;
  for (std::size_t idx : order) g.cliques_.push_back(cliques[idx]);
  g.separators_ = std::move(separators);
  g.adjacency_.assign(g.vertices_.size(), {});
  for (const auto& c : g.cliques_) {
    for (Vertex u : c) {
      auto& adj = g.adjacency_[g.index_of(u)];
      for (Vertex v : c) {
        if (v != u) adj.push_back(v);
      }
    }
  }
  for (auto& adj : g.adjacency_) std::sort(adj.begin(), adj.end());
  return g;
}

bool BlockGraph::contains(Vertex v) const noexcept {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::size_t BlockGraph::index_of(Vertex v) const {
  const auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) {
    throw Error(ErrorKind::UnknownVertex, "vertex " + std::to_string(v) + " is not in the graph");
  }
  return static_cast<std::size_t>(it - vertices_.begin());
}

const std::vector<Vertex>& BlockGraph::neighbors(Vertex v) const { return adjacency_[index_of(v)]; }

std::size_t BlockGraph::clique_of_edge(Vertex u, Vertex v) const {
  for (std::size_t c = 0; c < cliques_.size(); ++c) {
    const auto& cl = cliques_[c];
    if (u != v && std::binary_search(cl.begin(), cl.end(), u) &&
        std::binary_search(cl.begin(), cl.end(), v)) {
      return c;
    }
  }
  throw Error(ErrorKind::InvalidArgument,
              "vertices " + std::to_string(u) + " and " + std::to_string(v) + " are not adjacent");
}

std::vector<std::size_t> BlockGraph::cliques_containing(Vertex v) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cliques_.size(); ++c) {
    if (std::binary_search(cliques_[c].begin(), cliques_[c].end(), v)) out.push_back(c);
  }
  return out;
}

bool BlockGraph::is_tree() const noexcept {
  return std::all_of(cliques_.begin(), cliques_.end(), [](const auto& c) { return c.size() == 2; });
}

Path shortest_path(const BlockGraph& g, Vertex i, Vertex j) {
  const std::size_t si = g.index_of(i);
  const std::size_t sj = g.index_of(j);
  if (si == sj) throw Error(ErrorKind::SameVertex, "path endpoints coincide (" + std::to_string(i) + ")");
  std::vector<long> parent(g.size(), -1);
  parent[si] = static_cast<long>(si);
  std::deque<std::size_t> queue{si};
  while (!queue.empty() && parent[sj] < 0) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(g.vertices()[u])) {
      const std::size_t iw = g.index_of(w);
      if (parent[iw] < 0) {
        parent[iw] = static_cast<long>(u);
        queue.push_back(iw);
      }
    }
  }
  Path p;
  for (std::size_t at = sj; at != si; at = static_cast<std::size_t>(parent[at])) {
    p.vertices.push_back(g.vertices()[at]);
  }
  p.vertices.push_back(i);
  std::reverse(p.vertices.begin(), p.vertices.end());
  return p;
}

std::vector<Edge> chain_reduction(const BlockGraph& g, Vertex i, Vertex j) {
  const Path p = shortest_path(g, i, j);
  std::vector<Edge> edges;
  for (std::size_t k = 1; k < p.vertices.size(); ++k) edges.emplace_back(p.vertices[k - 1], p.vertices[k]);
  return edges;
}

}  // namespace gauge_graph
