#include <doctest.h>

#include <cmath>
#include <random>

#include "gauge_graph/error.hpp"
#include "gauge_graph/model.hpp"
#include "support/oracles.hpp"
#include "support/random_models.hpp"

using namespace gauge_graph;
using testing_models::chain_model;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

Model example3() { return chain_model({family::Logistic{0.4}, family::GaussianExp{0.6}}); }

Model tree_model(const Gauge& g12, const Gauge& g23, const Gauge& g24) {
  return assemble_model(build_block_graph({{1, 2}, {2, 3}, {2, 4}}), {{{1, 2}, g12}, {{2, 3}, g23}, {{2, 4}, g24}},
                        Margin::Exponential);
}

double max_grid_deviation(const Gauge& a, const Gauge& b, double lo, double hi) {
  double worst = 0.0;
  for (const auto& [x, y] : oracle::grid2(lo, hi)) worst = std::max(worst, std::abs(a({x, y}) - b({x, y})));
  return worst;
}

}  // namespace

TEST_CASE("tree model evaluates the sum minus separators") {
  const auto g12 = make_gauge(family::Logistic{0.4});
  const auto g23 = make_gauge(family::GaussianExp{0.6});
  const auto g24 = make_gauge(family::InvertedLogistic{0.5});
  const auto m = tree_model(g12, g23, g24);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 2);
  for (int k = 0; k < 100; ++k) {
    const double x[4] = {u(rng), u(rng), u(rng), u(rng)};
    const double hand = oracle::logistic(x[0], x[1], 0.4) + oracle::gaussian_exp(x[1], x[2], 0.6) +
                        oracle::inverted_logistic(x[1], x[3], 0.5) - 2 * x[1];
    CHECK(eval_joint(m, x) == doctest::Approx(hand).epsilon(1e-13));
  }
}

TEST_CASE("assembly errors") {
  const auto graph = build_block_graph({{1, 2}, {2, 3}});
  const auto lg = make_gauge(family::Logistic{0.4});
  CHECK(kind_of([&] {
          assemble_model(graph, {{{1, 2}, lg}, {{2, 3}, make_gauge(family::Logistic{0.4, 3})}}, Margin::Exponential);
        }) == ErrorKind::DimensionMismatch);
  CHECK(kind_of([&] { assemble_model(graph, {{{1, 2}, lg}}, Margin::Exponential); }) ==
        ErrorKind::MissingCliqueGauge);
  CHECK(kind_of([&] { assemble_model(graph, {{{1, 2}, lg}, {{2, 3}, lg}}, Margin::Laplace); }) ==
        ErrorKind::MarginMismatch);
  CHECK(kind_of([&] { assemble_model(graph, {{{1, 2}, lg}, {{1, 3}, lg}}, Margin::Exponential); }) ==
        ErrorKind::UnknownClique);
  const auto m = example3();
  const double bad[3] = {1, -1, 0};
  CHECK(kind_of([&] { eval_joint(m, bad); }) == ErrorKind::DomainViolation);
  const double short_x[2] = {1, 1};
  CHECK(kind_of([&] { eval_joint(m, short_x); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("example 3 evaluations") {
  const auto m = example3();
  const double x[3] = {1, 1, 0.36};
  CHECK(eval_joint(m, x) == doctest::Approx(1.0).epsilon(1e-14));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 50; ++k) {
    const double y[3] = {u(rng), u(rng), u(rng)};
    const double y2[3] = {2 * y[0], 2 * y[1], 2 * y[2]};
    CHECK(eval_joint(m, y2) == doctest::Approx(2 * eval_joint(m, y)).epsilon(1e-13));
  }
}

TEST_CASE("joint value at the unit vector") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testing_models::random_model(rng, 6, testing_models::Kind::AD, 4);
    const std::vector<double> ones(m.size(), 1.0);
    CHECK(eval_joint(m, ones) == doctest::Approx(1.0).epsilon(1e-13));
  }
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testing_models::random_model(rng, 5, testing_models::Kind::Catalogue);
    const std::vector<double> ones(m.size(), 1.0);
    CHECK(eval_joint(m, ones) >= 1.0 - 1e-13);
  }
}

TEST_CASE("singleton marginals are the coordinate") {
  const auto m = example3();
  for (Vertex j : {0, 1, 2}) {
    const auto mg = marginal_gauge(m, {j});
    CHECK(mg.method == MarginalMethod::NumericElimination);
    for (int k = 0; k <= 20; ++k) {
      const double x = k / 20.0;
      CHECK(std::abs(mg.gauge({x}) - x) <= 1e-6);
    }
  }
  CHECK(kind_of([&] { marginal_gauge(m, {}); }) == ErrorKind::EmptyKeptSet);
  CHECK(kind_of([&] { marginal_gauge(m, {7}); }) == ErrorKind::UnknownVertex);
}

TEST_CASE("tree marginal touches at the product of alphas") {
  // alpha_{2|3} = 0.36 and alpha_{4|2} = 0.25.
  const auto m = tree_model(make_gauge(family::Logistic{0.4}), make_gauge(family::GaussianExp{0.6}),
                            make_gauge(family::GaussianExp{0.5}));
  const auto g34 = marginal_gauge(m, {3, 4}).gauge;
  CHECK(g34({1.0, 0.36 * 0.25}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(g34({1.0, 0.2}) > 1.0 + 1e-3);
}

TEST_CASE("example 3: vertices 1 and 3 are not jointly extreme") {
  const auto m = example3();
  const auto g13 = marginal_gauge(m, {0, 2}).gauge;
  const auto dense = oracle::dense_min(
      [&](double t) {
        const double x[3] = {1, t, 1};
        return m.evaluate(x);
      },
      0, 3);
  CHECK(g13({1, 1}) == doctest::Approx(dense.value).epsilon(1e-7));
  CHECK(g13({1, 1}) > 1.05);
}

TEST_CASE("Gaussian chains marginalize to the product correlation") {
  const auto m = chain_model({family::GaussianExp{0.6}, family::GaussianExp{0.7}});
  const auto closed = make_gauge(family::GaussianExp{0.42});
  CHECK(max_grid_deviation(marginal_gauge(m, {0, 2}).gauge, closed, 0, 1) <= 1e-6);
  CHECK(max_grid_deviation(pairwise_marginal(m, 0, 2).gauge, closed, 0, 1) <= 1e-6);

  const auto lap = chain_model({family::GaussianLaplace{SquareMatrix{{1, -0.8}, {-0.8, 1}}},
                                family::GaussianLaplace{SquareMatrix{{1, 0.5}, {0.5, 1}}}},
                               Margin::Laplace);
  const auto lap_closed = make_gauge(family::GaussianLaplace{SquareMatrix{{1, -0.4}, {-0.4, 1}}});
  CHECK(max_grid_deviation(marginal_gauge(lap, {0, 2}).gauge, lap_closed, -1, 1) <= 1e-6);
  CHECK(max_grid_deviation(pairwise_marginal(lap, 0, 2).gauge, lap_closed, -1, 1) <= 1e-6);
}

TEST_CASE("composition agrees with numeric elimination on the example-2 chains") {
  using namespace family;
  const std::vector<std::vector<GaugeSpec>> chains{
      {Logistic{0.4}, GaussianExp{0.6}, Logistic{0.5}},
      {GaussianExp{0.6}, GaussianExp{0.5}, InvertedLogistic{0.3}},
      {InvertedLogistic{0.3}, Logistic{0.5}, InvertedLogistic{0.2}},
      {Logistic{0.4}, Square{0.5}, Square{0.3}},
  };
  for (const auto& spec : chains) {
    const auto m = chain_model(spec);
    const auto chain = pairwise_marginal(m, 0, 3);
    CHECK(chain.method == MarginalMethod::ChainComposition);
    const auto numeric = marginal_gauge(m, {0, 3});
    CHECK(max_grid_deviation(chain.gauge, numeric.gauge, 0, 1) <= 1e-5);
  }
}

TEST_CASE("pairwise marginal of an edge is the edge gauge") {
  const auto m = example3();
  const auto h = pairwise_marginal(m, 1, 2);
  const auto g = make_gauge(family::GaussianExp{0.6});
  CHECK(max_grid_deviation(h.gauge, g, 0, 1) == 0.0);
  const auto rev = pairwise_marginal(m, 2, 1);
  CHECK(rev.gauge({0.3, 0.8}) == doctest::Approx(g({0.8, 0.3})).epsilon(1e-15));
  CHECK(kind_of([&] { pairwise_marginal(m, 1, 1); }) == ErrorKind::SameVertex);
}

TEST_CASE("Gaussian-Laplace block graph marginal touches at the signed product") {
  const SquareMatrix s{{1, .5, .3, .7}, {.5, 1, .4, .2}, {.3, .4, 1, .6}, {.7, .2, .6, 1}};
  const auto m = assemble_model(
      build_block_graph({{1, 2}, {2, 3}, {3, 4, 5, 6}}),
      {{{1, 2}, make_gauge(family::GaussianLaplace{SquareMatrix{{1, -0.9}, {-0.9, 1}}})},
       {{2, 3}, make_gauge(family::GaussianLaplace{SquareMatrix{{1, 0.8}, {0.8, 1}}})},
       {{3, 4, 5, 6}, make_gauge(family::GaussianLaplace{s})}},
      Margin::Laplace);
  const auto g16 = pairwise_marginal(m, 1, 6).gauge;
  CHECK(g16({1, -0.81 * 0.64 * 0.49}) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("elimination order does not matter") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  // Nested one-dimensional eliminations cost a factor per level, so the
  // larger models get fewer test points.
  for (int trial = 0; trial < 4; ++trial) {
    const int d = trial < 2 ? 4 : trial + 2;
    const int points = d == 4 ? 50 : d == 5 ? 8 : 2;
    const auto m = testing_models::random_model(rng, d, testing_models::Kind::Catalogue);
    const Vertex a = 0;
    const Vertex b = static_cast<Vertex>(m.size() - 1);
    const auto joint = marginal_gauge(m, {a, b}).gauge;
    // Drop the second argument until only the end points remain.
    Gauge seq = m.as_gauge();
    for (std::size_t dim = m.size(); dim > 2; --dim) {
      std::vector<std::size_t> keep{0};
      for (std::size_t k = 2; k < dim; ++k) keep.push_back(k);
      seq = eliminate(seq, keep);
    }
    for (int k = 0; k < points; ++k) {
      const double x = u(rng), y = u(rng);
      CHECK(std::abs(joint({x, y}) - seq({x, y})) <= 2e-6);
    }
  }
}

TEST_CASE("marginal of a marginal") {
  const auto m = chain_model({family::Logistic{0.4}, family::GaussianExp{0.6}, family::InvertedLogistic{0.5}});
  const auto g013 = marginal_gauge(m, {0, 1, 3}).gauge;
  const auto via = eliminate(g013, {0, 2});
  const auto direct = marginal_gauge(m, {0, 3}).gauge;
  CHECK(max_grid_deviation(via, direct, 0, 1) <= 2e-6);
}

TEST_CASE("marginal gauges satisfy the axioms") {
  const auto m = chain_model({family::Logistic{0.4}, family::GaussianExp{0.6}, family::Square{0.3}});
  CHECK(check_gauge_axioms(marginal_gauge(m, {0, 3}).gauge, 200, 1e-6).passed);
  CHECK(check_gauge_axioms(pairwise_marginal(m, 0, 3).gauge, 200, 1e-6).passed);
  CHECK(check_gauge_axioms(marginal_gauge(m, {0, 2, 3}).gauge, 100, 1e-6).passed);
}

TEST_CASE("tabulated gauges interpolate kinks") {
  const auto sq = make_gauge(family::Square{0.3});
  const auto t = tabulate_gauge(sq);
  for (const auto& [x, y] : oracle::grid2(0, 1, 41)) CHECK(std::abs(t({x, y}) - sq({x, y})) <= 1e-7);
  const auto gl = make_gauge(family::GaussianLaplace{SquareMatrix{{1, 0.3}, {0.3, 1}}});
  const auto tl = tabulate_gauge(gl);
  for (const auto& [x, y] : oracle::grid2(-1, 1, 41)) CHECK(std::abs(tl({x, y}) - gl({x, y})) <= 1e-7);
}

TEST_CASE("level sets") {
  const auto g = make_gauge(family::GaussianExp{0.6});
  const auto pts = sample_level_set(g, 35);
  REQUIRE(pts.size() == 35);
  bool hit = false;
  for (const auto& p : pts) {
    CHECK(std::abs(g(p) - 1) <= 1e-9);
    hit |= std::abs(p[0] - 1) < 1e-12 && std::abs(p[1] - 0.36) < 1e-12;
  }
  CHECK(hit);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    CHECK(std::atan2(pts[k][1], pts[k][0]) > std::atan2(pts[k - 1][1], pts[k - 1][0]));
  }

  const auto gl = make_gauge(family::GaussianLaplace{SquareMatrix{{1, -0.5}, {-0.5, 1}}});
  const auto lp = sample_level_set(gl, 64);
  for (const auto& p : lp) CHECK(std::abs(gl(p) - 1) <= 1e-9);

  const auto m = example3();
  const auto cloud = sample_level_set(m, 10000);
  REQUIRE(cloud.size() == 10000);
  double worst = 0;
  for (const auto& p : cloud) {
    CHECK(p.size() == 3);
    worst = std::max(worst, std::abs(m.evaluate(p) - 1));
  }
  CHECK(worst <= 1e-9);
  CHECK(sample_level_set(m, 10, 1) == sample_level_set(m, 10, 1));
}
