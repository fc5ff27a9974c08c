#include <doctest.h>

#include <algorithm>
#include <random>

#include "gauge_graph/block_graph.hpp"
#include "gauge_graph/error.hpp"
#include "support/oracles.hpp"
#include "support/random_models.hpp"

using namespace gauge_graph;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

const std::vector<std::vector<Vertex>> kExample1{{1, 2, 3}, {3, 4}, {4, 5}, {4, 6}, {6, 7, 8, 9}};

void check_running_intersection(const BlockGraph& g) {
  const auto& cs = g.cliques();
  std::vector<Vertex> seen(cs[0]);
  REQUIRE(g.separators().size() == cs.size() - 1);
  for (std::size_t i = 1; i < cs.size(); ++i) {
    std::vector<Vertex> d;
    for (Vertex v : cs[i]) {
      if (std::find(seen.begin(), seen.end(), v) != seen.end()) d.push_back(v);
    }
    REQUIRE(d.size() == 1);
    CHECK(d[0] == g.separators()[i - 1]);
    bool inside = false;
    for (std::size_t j = 0; j < i; ++j) inside |= std::find(cs[j].begin(), cs[j].end(), d[0]) != cs[j].end();
    CHECK(inside);
    seen.insert(seen.end(), cs[i].begin(), cs[i].end());
  }
}

}  // namespace

TEST_CASE("example graph: separators and paths") {
  const auto g = build_block_graph(kExample1);
  auto seps = g.separators();
  std::sort(seps.begin(), seps.end());
  CHECK(seps == std::vector<Vertex>{3, 4, 4, 6});
  CHECK(g.vertices() == std::vector<Vertex>{1, 2, 3, 4, 5, 6, 7, 8, 9});
  check_running_intersection(g);
  const auto p = shortest_path(g, 1, 9);
  CHECK(p.vertices == std::vector<Vertex>{1, 3, 4, 6, 9});
  CHECK(p.length() == 4);
  CHECK(chain_reduction(g, 1, 9) == std::vector<Edge>{{1, 3}, {3, 4}, {4, 6}, {6, 9}});
  CHECK(shortest_path(g, 7, 9).vertices == std::vector<Vertex>{7, 9});
  CHECK_FALSE(g.is_tree());
}

TEST_CASE("chain graph and Gaussian-Laplace graph paths") {
  const auto chain = build_block_graph({{1, 2}, {2, 3}, {3, 4}, {4, 5}});
  CHECK(shortest_path(chain, 1, 5).vertices == std::vector<Vertex>{1, 2, 3, 4, 5});
  CHECK(chain.is_tree());
  const auto gl = build_block_graph({{1, 2}, {2, 3}, {3, 4, 5, 6}});
  CHECK(chain_reduction(gl, 1, 6) == std::vector<Edge>{{1, 2}, {2, 3}, {3, 6}});
  CHECK(chain_reduction(gl, 4, 5) == std::vector<Edge>{{4, 5}});
}

TEST_CASE("structural errors") {
  CHECK(kind_of([] { build_block_graph({{1, 2}, {3, 4}}); }) == ErrorKind::NotConnected);
  CHECK(kind_of([] { build_block_graph({{1, 2, 3}, {2, 3, 4}}); }) == ErrorKind::SeparatorNotSingleton);
  CHECK(kind_of([] { build_block_graph({{1, 2}, {2, 3}, {3, 1}}); }) == ErrorKind::NotDecomposable);
  CHECK(kind_of([] { build_block_graph({{1}}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { build_block_graph({}); }) == ErrorKind::InvalidArgument);
  const auto g = build_block_graph(kExample1);
  CHECK(kind_of([&] { shortest_path(g, 4, 4); }) == ErrorKind::SameVertex);
  CHECK(kind_of([&] { chain_reduction(g, 2, 2); }) == ErrorKind::SameVertex);
  CHECK(kind_of([&] { shortest_path(g, 1, 42); }) == ErrorKind::UnknownVertex);
  try {
    build_block_graph({{1, 2, 3}, {2, 3, 4}});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("{2,3}") != std::string::npos);
  }
}

TEST_CASE("order insensitivity") {
  const auto base = build_block_graph(kExample1);
  auto base_seps = base.separators();
  std::sort(base_seps.begin(), base_seps.end());
  auto perm = kExample1;
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& c : perm) std::shuffle(c.begin(), c.end(), rng);
    const auto g = build_block_graph(perm);
    check_running_intersection(g);
    CHECK(g.vertices() == base.vertices());
    auto seps = g.separators();
    std::sort(seps.begin(), seps.end());
    CHECK(seps == base_seps);
    for (Vertex i : g.vertices()) {
      for (Vertex j : g.vertices()) {
        if (i != j) CHECK(shortest_path(g, i, j).vertices == shortest_path(base, i, j).vertices);
      }
    }
  }
}

TEST_CASE("random block graphs: BFS agreement and path structure") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cliques = testing_models::random_block_graph(rng, 3 + trial % 8, 4);
    const auto g = build_block_graph(cliques);
    check_running_intersection(g);
    for (Vertex i : g.vertices()) {
      for (Vertex j : g.vertices()) {
        if (i == j) continue;
        const auto p = shortest_path(g, i, j);
        CHECK(static_cast<int>(p.length()) == oracle::bfs_distance(cliques, i, j));
        for (std::size_t k = 1; k < p.vertices.size(); ++k) {
          g.clique_of_edge(p.vertices[k - 1], p.vertices[k]);
        }
        // Interior vertices are separators (cut vertices shared by cliques).
        for (std::size_t k = 1; k + 1 < p.vertices.size(); ++k) {
          CHECK(g.cliques_containing(p.vertices[k]).size() >= 2);
        }
        auto fwd = chain_reduction(g, i, j);
        auto back = chain_reduction(g, j, i);
        std::reverse(back.begin(), back.end());
        for (auto& e : back) std::swap(e.first, e.second);
        CHECK(fwd == back);
      }
    }
  }
}
