#include "gauge_graph/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gauge_graph/error.hpp"

namespace gauge_graph {

struct Model::Impl {
  BlockGraph graph;
  Margin margin = Margin::Exponential;
  std::vector<CliqueGauge> gauges;
  std::vector<std::vector<std::size_t>> positions;
  std::vector<std::size_t> separator_positions;
  std::size_t max_clique = 0;
};

const BlockGraph& Model::graph() const noexcept { return impl_->graph; }
Margin Model::margin() const noexcept { return impl_->margin; }
const std::vector<CliqueGauge>& Model::clique_gauges() const noexcept { return impl_->gauges; }

double Model::evaluate(std::span<const double> x) const {
  const Impl& m = *impl_;
  std::array<double, 16> small{};
  std::vector<double> large;
  double* buf = small.data();
  if (m.max_clique > small.size()) {
    large.resize(m.max_clique);
    buf = large.data();
  }
  double total = 0.0;
  for (std::size_t c = 0; c < m.gauges.size(); ++c) {
    const auto& pos = m.positions[c];
    for (std::size_t k = 0; k < pos.size(); ++k) buf[k] = x[pos[k]];
    total += m.gauges[c].gauge.evaluate(std::span<const double>(buf, pos.size()));
  }
  for (std::size_t p : m.separator_positions) total -= std::abs(x[p]);
  return total;
}

Gauge Model::edge_gauge(Vertex u, Vertex v, const MinimizerConfig& cfg) const {
  const std::size_t c = impl_->graph.clique_of_edge(u, v);
  const auto& cg = impl_->gauges[c];
  const auto pu = std::find(cg.vertices.begin(), cg.vertices.end(), u) - cg.vertices.begin();
  const auto pv = std::find(cg.vertices.begin(), cg.vertices.end(), v) - cg.vertices.begin();
  return cg.gauge.pairwise(static_cast<std::size_t>(pu), static_cast<std::size_t>(pv), cfg);
}

Gauge Model::as_gauge() const {
  const Model self = *this;
  return make_custom_gauge("joint", size(), margin(),
                           [self](std::span<const double> x) { return self.evaluate(x); });
}

Model assemble_model(BlockGraph graph, std::vector<CliqueGauge> gauges, Margin margin) {
  const auto& cliques = graph.cliques();
  std::vector<std::optional<CliqueGauge>> slots(cliques.size());
  for (auto& cg : gauges) {
    auto key = cg.vertices;
    std::sort(key.begin(), key.end());
    const auto it = std::find(cliques.begin(), cliques.end(), key);
    std::string label = "{";
    for (std::size_t k = 0; k < cg.vertices.size(); ++k) {
      label += (k ? "," : "") + std::to_string(cg.vertices[k]);
    }
    label += "}";
    if (it == cliques.end()) {
      throw Error(ErrorKind::UnknownClique, "gauge given for " + label + ", which is not a clique");
    }
    auto& slot = slots[static_cast<std::size_t>(it - cliques.begin())];
    if (slot) throw Error(ErrorKind::InvalidArgument, "clique " + label + " has two gauges");
    if (cg.gauge.dimension() != cg.vertices.size()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "clique " + label + " has " + std::to_string(cg.vertices.size()) +
                      " vertices but its gauge has dimension " + std::to_string(cg.gauge.dimension()));
    }
    if (cg.gauge.margin() != margin) {
      throw Error(ErrorKind::MarginMismatch, "gauge of clique " + label + " uses " +
                                                 std::string(to_string(cg.gauge.margin())) +
                                                 " margins; the model uses " +
                                                 std::string(to_string(margin)));
    }
    slot = std::move(cg);
  }
  auto impl = std::make_shared<Model::Impl>();
  for (std::size_t c = 0; c < cliques.size(); ++c) {
    if (!slots[c]) {
      std::string label = "{";
      for (std::size_t k = 0; k < cliques[c].size(); ++k) {
        label += (k ? "," : "") + std::to_string(cliques[c][k]);
      }
      throw Error(ErrorKind::MissingCliqueGauge, "clique " + label + "} has no gauge");
    }
    std::vector<std::size_t> pos;
    for (Vertex v : slots[c]->vertices) pos.push_back(graph.index_of(v));
    impl->max_clique = std::max(impl->max_clique, pos.size());
    impl->positions.push_back(std::move(pos));
    impl->gauges.push_back(std::move(*slots[c]));
  }
  for (Vertex d : graph.separators()) impl->separator_positions.push_back(graph.index_of(d));
  impl->graph = std::move(graph);
  impl->margin = margin;
  return Model(std::move(impl));
}

double eval_joint(const Model& m, std::span<const double> x) {
  if (x.size() != m.size()) {
    throw Error(ErrorKind::DimensionMismatch, "model has " + std::to_string(m.size()) +
                                                  " vertices; point has " + std::to_string(x.size()) +
                                                  " coordinates");
  }
  if (!in_domain(m.margin(), x)) {
    throw Error(ErrorKind::DomainViolation, "point lies outside the margin domain");
  }
  return m.evaluate(x);
}

std::string_view to_string(MarginalMethod method) noexcept {
  return method == MarginalMethod::NumericElimination ? "numeric_elimination" : "chain_composition";
}

Gauge eliminate(const Gauge& g, std::vector<std::size_t> keep, const MinimizerConfig& cfg) {
  const std::size_t d = g.dimension();
  if (keep.empty()) throw Error(ErrorKind::EmptyKeptSet, "nothing to keep");
  std::vector<bool> kept(d, false);
  for (std::size_t p : keep) {
    if (p >= d) throw Error(ErrorKind::InvalidArgument, "kept position out of range");
    if (kept[p]) throw Error(ErrorKind::InvalidArgument, "kept position repeated");
    kept[p] = true;
  }
  bool identity = keep.size() == d;
  for (std::size_t k = 0; identity && k < d; ++k) identity = keep[k] == k;
  if (identity) return g;

  std::vector<std::size_t> elim;
  for (std::size_t k = 0; k < d; ++k) {
    if (!kept[k]) elim.push_back(k);
  }
  const Margin margin = g.margin();
  if (elim.empty()) {
    return make_custom_gauge(g.family_name() + "-permuted", d, margin,
                             [g, keep](std::span<const double> x) {
                               std::vector<double> full(keep.size());
                               for (std::size_t k = 0; k < keep.size(); ++k) full[keep[k]] = x[k];
                               return g.evaluate(full);
                             });
  }
  return make_custom_gauge(
      g.family_name() + "-marginal", keep.size(), margin,
      [g, keep, elim, margin, cfg](std::span<const double> x) {
        std::vector<double> full(g.dimension(), 0.0);
        for (std::size_t k = 0; k < keep.size(); ++k) full[keep[k]] = x[k];
        const double bound = g.evaluate(full);
        if (!(bound > 0.0)) return 0.0;
        std::vector<Bounds> box(elim.size(),
                                Bounds{margin == Margin::Exponential ? 0.0 : -bound, bound});
        return minimize_box(
                   [&](std::span<const double> y) {
                     for (std::size_t k = 0; k < elim.size(); ++k) full[elim[k]] = y[k];
                     return g.evaluate(full);
                   },
                   box, cfg)
            .value;
      });
}

MarginalGauge marginal_gauge(const Model& m, std::vector<Vertex> kept, const MinimizerConfig& cfg) {
  if (kept.empty()) throw Error(ErrorKind::EmptyKeptSet, "the kept vertex set is empty");
  std::vector<std::size_t> positions;
  for (Vertex v : kept) positions.push_back(m.graph().index_of(v));
  return {std::move(kept), MarginalMethod::NumericElimination,
          eliminate(m.as_gauge(), std::move(positions), cfg)};
}

Gauge compose_pair(const Gauge& left, const Gauge& right, const MinimizerConfig& cfg) {
  if (left.dimension() != 2 || right.dimension() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "composition needs bivariate gauges");
  }
  if (left.margin() != right.margin()) {
    throw Error(ErrorKind::MarginMismatch, "composed gauges use different margins");
  }
  const Margin margin = left.margin();
  return make_custom_gauge("composed", 2, margin,
                           [left, right, margin, cfg](std::span<const double> x) {
                             const double a = x[0];
                             const double b = x[1];
                             auto objective = [&](double t) {
                               return left.evaluate2(a, t) + right.evaluate2(t, b) - std::abs(t);
                             };
                             const double bound = objective(0.0);
                             if (!(bound > 0.0)) return 0.0;
                             const Bounds range{margin == Margin::Exponential ? 0.0 : -bound, bound};
                             return minimize_1d(objective, range, cfg).value;
                           });
}

namespace {

// Node spacing is uniform in u with s = (1 - cos(pi u)) / 2, which clusters
// nodes near the axes where gauges often behave like sqrt.
double table_s(double u) { return 0.5 * (1.0 - std::cos(std::numbers::pi * u)); }
double table_u(double s) {
  return std::acos(std::clamp(1.0 - 2.0 * s, -1.0, 1.0)) / std::numbers::pi;
}

struct AngularTable {
  // Per quadrant: increasing u nodes and the gauge on the L1 sphere there.
  std::vector<std::vector<double>> nodes;
  std::vector<std::vector<double>> values;
};

constexpr double kMinTableWidth = 1e-9;

}  // namespace

Gauge tabulate_gauge(const Gauge& g, int intervals, double tolerance) {
  if (g.dimension() != 2) throw Error(ErrorKind::DimensionMismatch, "only bivariate gauges are tabulated");
  if (intervals < 2) throw Error(ErrorKind::InvalidArgument, "table needs >= 2 intervals");
  if (!(tolerance > 0.0)) throw Error(ErrorKind::InvalidArgument, "table tolerance must be positive");
  const Margin margin = g.margin();
  static constexpr std::array<std::array<double, 2>, 4> kSigns{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  auto table = std::make_shared<AngularTable>();
  const int nq = margin == Margin::Exponential ? 1 : 4;
  for (int q = 0; q < nq; ++q) {
    auto at = [&](double u) {
      const double s = table_s(u);
      return g.evaluate2(kSigns[q][0] * (1.0 - s), kSigns[q][1] * s);
    };
    std::vector<double> us{0.0};
    std::vector<double> vs{at(0.0)};
    for (int k = 1; k <= intervals; ++k) {
      // Bisect [u0, u1] until the midpoint agrees with the chord.
      struct Span {
        double u0, v0, u1, v1;
      };
      const double u1 = static_cast<double>(k) / intervals;
      std::vector<Span> stack{{us.back(), vs.back(), u1, at(u1)}};
      while (!stack.empty()) {
        const Span sp = stack.back();
        stack.pop_back();
        const double um = 0.5 * (sp.u0 + sp.u1);
        const double vm = at(um);
        if (sp.u1 - sp.u0 > kMinTableWidth && std::abs(vm - 0.5 * (sp.v0 + sp.v1)) > tolerance) {
          stack.push_back({um, vm, sp.u1, sp.v1});
          stack.push_back({sp.u0, sp.v0, um, vm});
          continue;
        }
        us.push_back(um);
        vs.push_back(vm);
        us.push_back(sp.u1);
        vs.push_back(sp.v1);
      }
    }
    table->nodes.push_back(std::move(us));
    table->values.push_back(std::move(vs));
  }
  return make_custom_gauge(g.family_name() + "-table", 2, margin,
                           [table](std::span<const double> x) {
                             const double r = std::abs(x[0]) + std::abs(x[1]);
                             if (r == 0.0) return 0.0;
                             std::size_t q = 0;
                             if (table->nodes.size() == 4) {
                               q = x[0] < 0.0 ? (x[1] < 0.0 ? 2 : 1) : (x[1] < 0.0 ? 3 : 0);
                             }
                             const auto& us = table->nodes[q];
                             const auto& vs = table->values[q];
                             const double u = table_u(std::abs(x[1]) / r);
                             auto it = std::upper_bound(us.begin(), us.end(), u);
                             const auto k = static_cast<std::size_t>(
                                 std::clamp<std::ptrdiff_t>(it - us.begin() - 1, 0, std::ssize(us) - 2));
                             const double w = us[k + 1] - us[k];
                             const double frac = w > 0.0 ? (u - us[k]) / w : 0.0;
                             return r * (vs[k] + frac * (vs[k + 1] - vs[k]));
                           });
}

MarginalGauge pairwise_marginal(const Model& m, Vertex i, Vertex j, const CompositionConfig& cfg) {
  const auto edges = chain_reduction(m.graph(), i, j);
  const int length = static_cast<int>(edges.size());
  Gauge h = m.edge_gauge(edges[0].first, edges[0].second, cfg.minimizer);
  int depth = 0;
  for (int k = 1; k < length; ++k) {
    if (depth >= 1 && depth + (length - k) > cfg.exact_depth) {
      h = tabulate_gauge(h, cfg.table_intervals, cfg.table_tolerance);
      depth = 0;
    }
    const auto& e = edges[static_cast<std::size_t>(k)];
    h = compose_pair(h, m.edge_gauge(e.first, e.second, cfg.minimizer), cfg.minimizer);
    ++depth;
  }
  return {{i, j}, MarginalMethod::ChainComposition, std::move(h)};
}

std::vector<std::vector<double>> sample_level_set(const Gauge& g, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  const std::size_t d = g.dimension();
  const bool exponential = g.margin() == Margin::Exponential;
  std::vector<std::vector<double>> points;
  points.reserve(static_cast<std::size_t>(n));
  auto emit = [&](std::vector<double> w) {
    const double value = g.evaluate(w);
    for (double& c : w) c /= value;
    points.push_back(std::move(w));
  };
  if (d == 2) {
    for (int k = 0; k < n; ++k) {
      const double t = n == 1 ? 0.5 : static_cast<double>(k) / (n - 1);
      if (exponential) {
        emit({1.0 - t, t});
        continue;
      }
      // Counter-clockwise walk around the sup-norm square starting at (1, -1).
      const double arc = 8.0 * (n == 1 ? 0.0 : static_cast<double>(k) / n);
      const int side = std::min(static_cast<int>(arc / 2.0), 3);
      const double off = arc - 2.0 * side - 1.0;
      switch (side) {
        case 0: emit({1.0, off}); break;
        case 1: emit({-off, 1.0}); break;
        case 2: emit({-1.0, -off}); break;
        default: emit({off, -1.0}); break;
      }
    }
    return points;
  }
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> face(0, d - 1);
  for (int k = 0; k < n; ++k) {
    std::vector<double> w(d);
    if (exponential) {
      double total = 0.0;
      for (double& c : w) total += (c = expo(rng));
      for (double& c : w) c /= total;
    } else {
      for (double& c : w) c = unit(rng);
      w[face(rng)] = unit(rng) < 0.0 ? -1.0 : 1.0;
    }
    emit(std::move(w));
  }
  return points;
}

std::vector<std::vector<double>> sample_level_set(const Model& m, int n, std::uint64_t seed) {
  return sample_level_set(m.as_gauge(), n, seed);
}

}  // namespace gauge_graph
