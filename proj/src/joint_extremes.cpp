#include "gauge_graph/joint_extremes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "gauge_graph/coefficients.hpp"
#include "gauge_graph/error.hpp"
#include "gauge_graph/parallel.hpp"

namespace gauge_graph {

namespace {

constexpr std::size_t kMaxEnumerationVertices = 12;
// Witnesses this close to the corner are re-checked on a smaller box: a gap
// that only closes as gamma -> 1 belongs to a larger subset.
constexpr double kCornerAlarm = 1e-3;
constexpr double kRecheckCap = 1.0 - 1e-2;

std::vector<Vertex> normalized_subset(const Model& m, std::vector<Vertex> subset) {
  if (subset.empty()) throw Error(ErrorKind::EmptySubset, "the subset is empty");
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  for (Vertex v : subset) (void)m.graph().index_of(v);
  return subset;
}

struct Solve {
  std::vector<double> point;
  double value = 0.0;
};

// Minimizes the joint gauge over the free positions; fixed entries of `start` stay put.
Solve minimize_free(const Model& m, std::vector<double> start, const std::vector<std::size_t>& free,
                    const std::vector<Bounds>& box, const MinimizerConfig& cfg) {
  if (free.empty()) return {start, m.evaluate(start)};
  std::vector<double> x = start;
  const auto best = minimize_box(
      [&](std::span<const double> y) {
        for (std::size_t k = 0; k < free.size(); ++k) x[free[k]] = y[k];
        return m.evaluate(x);
      },
      box, cfg);
  for (std::size_t k = 0; k < free.size(); ++k) start[free[k]] = best.argmin[k];
  return {start, m.evaluate(start)};
}

}  // namespace

Direction is_direction(const Model& m, std::vector<Vertex> subset, const DirectionConfig& cfg) {
  subset = normalized_subset(m, std::move(subset));
  const auto& verts = m.graph().vertices();
  std::vector<double> z(verts.size(), 0.0);
  std::vector<std::size_t> free;
  for (std::size_t p = 0; p < verts.size(); ++p) {
    if (std::binary_search(subset.begin(), subset.end(), verts[p])) {
      z[p] = 1.0;
    } else {
      free.push_back(p);
    }
  }
  const bool exponential = m.margin() == Margin::Exponential;
  auto box_for = [&](double cap) {
    return std::vector<Bounds>(free.size(), Bounds{exponential ? 0.0 : -cap, cap});
  };
  Solve s = minimize_free(m, z, free, box_for(1.0 - cfg.corner_eps), cfg.minimizer);
  Direction d{subset, s.point, s.value - 1.0, s.value - 1.0 <= cfg.tolerance};
  if (d.accepted) {
    const bool near_corner = std::any_of(free.begin(), free.end(), [&](std::size_t p) {
      return std::abs(s.point[p]) >= 1.0 - kCornerAlarm;
    });
    if (near_corner) {
      Solve again = minimize_free(m, z, free, box_for(kRecheckCap), cfg.minimizer);
      if (again.value - 1.0 > cfg.tolerance) {
        d.witness = std::move(again.point);
        d.gap = again.value - 1.0;
        d.accepted = false;
      }
    }
  }
  return d;
}

std::vector<Direction> enumerate_directions(const Model& m, const DirectionConfig& cfg) {
  const auto& verts = m.graph().vertices();
  const std::size_t n = verts.size();
  if (n > kMaxEnumerationVertices) {
    throw Error(ErrorKind::DimensionTooLarge,
                "direction enumeration is limited to " + std::to_string(kMaxEnumerationVertices) +
                    " vertices; the model has " + std::to_string(n));
  }
  std::vector<std::vector<Vertex>> subsets;
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(size), true);
    do {
      std::vector<Vertex> s;
      for (std::size_t p = 0; p < n; ++p) {
        if (mask[p]) s.push_back(verts[p]);
      }
      subsets.push_back(std::move(s));
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  std::vector<Direction> results(subsets.size());
  parallel_for(subsets.size(), [&](std::size_t k) { results[k] = is_direction(m, subsets[k], cfg); });
  std::vector<Direction> accepted;
  for (auto& d : results) {
    if (d.accepted) accepted.push_back(std::move(d));
  }
  return accepted;
}

AlphaDirections directions_from_alphas(const Model& m, const MinimizerConfig& cfg,
                                       double unit_tolerance) {
  if (m.margin() != Margin::Exponential) {
    throw Error(ErrorKind::NotSupported, "alpha-based directions need Exponential margins");
  }
  std::set<std::pair<std::size_t, std::vector<Vertex>>> found;
  for (Vertex i : m.graph().vertices()) {
    std::vector<Vertex> a{i};
    for (const auto& e : alpha_vector(m, i, Sign::Plus, cfg)) {
      if (std::abs(e.alpha.value - 1.0) <= unit_tolerance) a.push_back(e.vertex);
    }
    std::sort(a.begin(), a.end());
    found.emplace(a.size(), std::move(a));
  }
  AlphaDirections out;
  for (const auto& entry : found) {
    if (entry.second.size() == m.size()) out.possibly_incomplete = true;
    out.subsets.push_back(entry.second);
  }
  return out;
}

CliqueEquivalence check_clique_equivalence(const Model& m, double tol) {
  CliqueEquivalence r;
  const std::vector<double> ones(m.size(), 1.0);
  r.joint_value = m.evaluate(ones);
  r.cliques_at_one = true;
  for (const auto& cg : m.clique_gauges()) {
    const std::vector<double> unit(cg.vertices.size(), 1.0);
    const double v = cg.gauge.evaluate(unit);
    r.clique_values.push_back(v);
    if (std::abs(v - 1.0) > tol) r.cliques_at_one = false;
  }
  r.joint_at_one = std::abs(r.joint_value - 1.0) <= tol;
  r.forward = !r.cliques_at_one || r.joint_at_one;
  r.backward = !r.joint_at_one || r.cliques_at_one;
  return r;
}

std::vector<Vertex> omitted_separators(const Model& m, const std::vector<Vertex>& subset) {
  std::set<Vertex> out;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const Path p = shortest_path(m.graph(), subset[a], subset[b]);
      for (std::size_t k = 1; k + 1 < p.vertices.size(); ++k) {
        const Vertex v = p.vertices[k];
        if (!std::binary_search(subset.begin(), subset.end(), v)) out.insert(v);
      }
    }
  }
  return {out.begin(), out.end()};
}

double separator_gap(const Model& m, std::vector<Vertex> subset, double eps,
                     const MinimizerConfig& cfg) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
  subset = normalized_subset(m, std::move(subset));
  const auto omitted = omitted_separators(m, subset);
  if (omitted.empty()) {
    throw Error(ErrorKind::SeparatorsIncluded, "the subset contains every separator between its members");
  }
  const auto& verts = m.graph().vertices();
  const bool exponential = m.margin() == Margin::Exponential;
  std::vector<double> z(verts.size(), 0.0);
  std::vector<std::size_t> free;
  std::vector<Bounds> box;
  for (std::size_t p = 0; p < verts.size(); ++p) {
    if (std::binary_search(subset.begin(), subset.end(), verts[p])) {
      z[p] = 1.0;
      continue;
    }
    const double cap =
        std::binary_search(omitted.begin(), omitted.end(), verts[p]) ? 1.0 - eps : 1.0;
    free.push_back(p);
    box.push_back({exponential ? 0.0 : -cap, cap});
  }
  return minimize_free(m, z, free, box, cfg).value - 1.0;
}

TreeADMarginal tree_ad_marginal(const Model& m, Vertex k, Vertex l) {
  if (!m.graph().is_tree()) throw Error(ErrorKind::NotATree, "every clique must be a single edge");
  if (m.margin() != Margin::Exponential) {
    throw Error(ErrorKind::MarginMismatch, "the AD closed form needs Exponential margins");
  }
  for (const auto& cg : m.clique_gauges()) {
    if (!std::holds_alternative<family::AsymmetricAD>(cg.gauge.spec())) {
      throw Error(ErrorKind::NotAllAD, "edge {" + std::to_string(cg.vertices[0]) + "," +
                                           std::to_string(cg.vertices[1]) + "} uses " +
                                           cg.gauge.family_name());
    }
  }
  TreeADMarginal t;
  for (const auto& [u, v] : chain_reduction(m.graph(), k, l)) {
    const auto& ad = std::get<family::AsymmetricAD>(m.edge_gauge(u, v).spec());
    t.theta_eff = std::max(t.theta_eff, ad.theta);
    t.gamma_eff = std::max(t.gamma_eff, ad.gamma);
  }
  return t;
}

Gauge tree_ad_gauge(const TreeADMarginal& t) {
  return make_gauge(family::AsymmetricAD{t.theta_eff, t.gamma_eff});
}

}  // namespace gauge_graph
