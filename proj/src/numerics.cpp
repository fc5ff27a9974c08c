#include "gauge_graph/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gauge_graph/error.hpp"

namespace gauge_graph {

namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr int kMaxGoldenIterations = 200;
constexpr int kMaxPolls = 20000;
// Sublevel offsets, relative to max(1, |base|), used to extrapolate the
// right edge of a minimizing set.
constexpr std::array<double, 3> kEdgeLadder = {1e-11, 1e-10, 1e-9};
// q = 10^(1/sigma); below this the rise is too flat to extrapolate.
constexpr double kMinLadderRatio = 1.047;

double checked(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::NonFiniteObjective, "objective returned a non-finite value");
  }
  return v;
}

struct Scan {
  std::vector<double> xs;
  std::vector<double> fs;
};

Scan scan_interval(const ScalarFunction& f, Bounds iv, int points) {
  Scan s;
  if (!(iv.hi > iv.lo)) {
    s.xs.push_back(iv.lo);
    s.fs.push_back(checked(f(iv.lo)));
    return s;
  }
  s.xs.resize(points);
  s.fs.resize(points);
  const double h = (iv.hi - iv.lo) / (points - 1);
  for (int k = 0; k < points; ++k) {
    s.xs[k] = (k == points - 1) ? iv.hi : iv.lo + k * h;
    s.fs[k] = checked(f(s.xs[k]));
  }
  return s;
}

struct Run {
  std::size_t first;
  std::size_t last;
  double value;
};

// Maximal runs of equal grid values that are not higher than either neighbour.
std::vector<Run> local_minimum_runs(const Scan& s) {
  std::vector<Run> runs;
  const std::size_t n = s.fs.size();
  std::size_t k = 0;
  while (k < n) {
    std::size_t end = k;
    while (end + 1 < n && s.fs[end + 1] == s.fs[k]) ++end;
    const bool left_ok = k == 0 || s.fs[k - 1] > s.fs[k];
    const bool right_ok = end + 1 == n || s.fs[end + 1] > s.fs[k];
    if (left_ok && right_ok) runs.push_back({k, end, s.fs[k]});
    k = end + 1;
  }
  return runs;
}

std::vector<Run> best_runs(const Scan& s, int count) {
  auto runs = local_minimum_runs(s);
  std::stable_sort(runs.begin(), runs.end(),
                   [](const Run& a, const Run& b) { return a.value < b.value; });
  if (runs.size() > static_cast<std::size_t>(count)) runs.resize(count);
  return runs;
}

// Golden section on [a, b]; ties move right so flat stretches resolve to
// their right side. Returns the best evaluated point (endpoints included).
ScalarMinimum golden_section(const ScalarFunction& f, double a, double b, double fa, double fb) {
  ScalarMinimum best{a, fa};
  auto consider = [&best](double x, double v) {
    if (v < best.value || (v == best.value && x > best.argmin)) best = {x, v};
  };
  consider(b, fb);
  if (!(b > a)) return best;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = checked(f(c));
  double fd = checked(f(d));
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < kMaxGoldenIterations; ++it) {
    const double scale = std::max(1.0, std::abs(a) + std::abs(b));
    if (b - a <= 8.0 * std::numeric_limits<double>::epsilon() * scale) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = checked(f(c));
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = checked(f(d));
      consider(d, fd);
    }
  }
  return best;
}

struct Candidate {
  ScalarMinimum refined;
  double run_right;
  double run_value;
};

std::vector<Candidate> refine_runs(const ScalarFunction& f, const Scan& s, int count) {
  std::vector<Candidate> out;
  const std::size_t n = s.xs.size();
  for (const Run& r : best_runs(s, count)) {
    const std::size_t lo = r.first == 0 ? 0 : r.first - 1;
    const std::size_t hi = std::min(n - 1, r.last + 1);
    auto refined = golden_section(f, s.xs[lo], s.xs[hi], s.fs[lo], s.fs[hi]);
    if (s.fs[r.last] < refined.value ||
        (s.fs[r.last] == refined.value && s.xs[r.last] > refined.argmin)) {
      refined = {s.xs[r.last], s.fs[r.last]};
    }
    out.push_back({refined, s.xs[r.last], r.value});
  }
  return out;
}

// Right end of {f <= level} reached from `start` by walking with step h.
double walk_and_bisect(const ScalarFunction& f, double start, double hi, double h, double level) {
  double inside = start;
  double outside = hi;
  bool found = false;
  for (double y = start + h;; y += h) {
    const double yy = std::min(y, hi);
    if (checked(f(yy)) > level) {
      outside = yy;
      found = true;
      break;
    }
    inside = yy;
    if (yy >= hi) break;
  }
  if (!found) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (mid <= inside || mid >= outside) break;
    if (checked(f(mid)) <= level) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

double edge_from_ladder(const ScalarFunction& f, double lo, double start, double hi, double base,
                        double h) {
  const double scale = std::max(1.0, std::abs(base));
  std::array<double, kEdgeLadder.size()> u{};
  for (std::size_t k = 0; k < kEdgeLadder.size(); ++k) {
    u[k] = walk_and_bisect(f, start, hi, h, base + kEdgeLadder[k] * scale);
  }
  if (u[0] >= hi) return hi;
  if (u[2] >= hi) return u[0];
  const double d1 = u[1] - u[0];
  const double d2 = u[2] - u[1];
  if (!(d1 > 0.0) || !(d2 > kMinLadderRatio * d1)) return u[0];
  const double extrapolated = u[0] - d1 * d1 / (d2 - d1);
  return std::clamp(extrapolated, lo, u[0]);
}

}  // namespace

void MinimizerConfig::validate() const {
  if (grid_points_per_dim < 3) {
    throw Error(ErrorKind::InvalidArgument, "grid_points_per_dim must be >= 3");
  }
  if (!(tolerance > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be > 0");
  if (refine_iterations < 0) {
    throw Error(ErrorKind::InvalidArgument, "refine_iterations must be >= 0");
  }
  if (multistart_count < 1) throw Error(ErrorKind::InvalidArgument, "multistart_count must be >= 1");
  if (max_grid_evaluations < 1) {
    throw Error(ErrorKind::InvalidArgument, "max_grid_evaluations must be >= 1");
  }
  if (!(contact_tolerance > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "contact_tolerance must be > 0");
  }
}

void SlopeFitConfig::validate() const {
  if (!(x_min > 0.0) || !(x_min < x_max)) {
    throw Error(ErrorKind::InvalidArgument, "slope fit window must satisfy 0 < x_min < x_max");
  }
  if (points < 5) throw Error(ErrorKind::InvalidArgument, "slope fit needs points >= 5");
  if (!(value_floor >= 0.0)) throw Error(ErrorKind::InvalidArgument, "value_floor must be >= 0");
}

ScalarMinimum minimize_1d(const ScalarFunction& f, Bounds iv, const MinimizerConfig& cfg) {
  cfg.validate();
  if (!(iv.hi >= iv.lo) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
    throw Error(ErrorKind::InvalidArgument, "interval must be finite with lo <= hi");
  }
  const Scan s = scan_interval(f, iv, cfg.grid_points_per_dim);
  const auto grid_best = std::min_element(s.fs.begin(), s.fs.end());
  ScalarMinimum best{s.xs[grid_best - s.fs.begin()], *grid_best};
  for (const auto& c : refine_runs(f, s, cfg.multistart_count)) {
    if (c.refined.value < best.value) best = c.refined;
  }
  return best;
}

double sublevel_right_edge(const ScalarFunction& f, double start, double hi, double base,
                           const MinimizerConfig& cfg) {
  cfg.validate();
  if (!(hi > start)) return hi;
  const double h = (hi - start) / (cfg.grid_points_per_dim - 1);
  return edge_from_ladder(f, start, start, hi, base, h);
}

ScalarMinimum rightmost_minimizer_1d(const ScalarFunction& f, Bounds iv,
                                     const MinimizerConfig& cfg) {
  cfg.validate();
  if (!(iv.hi >= iv.lo) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
    throw Error(ErrorKind::InvalidArgument, "interval must be finite with lo <= hi");
  }
  const Scan s = scan_interval(f, iv, cfg.grid_points_per_dim);
  if (s.xs.size() == 1) return {s.xs[0], s.fs[0]};

  const auto candidates = refine_runs(f, s, std::max(cfg.multistart_count, 1));
  double m = *std::min_element(s.fs.begin(), s.fs.end());
  for (const auto& c : candidates) m = std::min(m, c.refined.value);

  const Candidate* chosen = nullptr;
  double chosen_start = 0.0;
  for (const auto& c : candidates) {
    if (c.refined.value > m + cfg.tolerance) continue;
    const double scale = std::max(1.0, std::abs(c.refined.value));
    double start = c.refined.argmin;
    if (c.run_right > start && c.run_value <= c.refined.value + kEdgeLadder[0] * scale) {
      start = c.run_right;
    }
    if (chosen == nullptr || start > chosen_start) {
      chosen = &c;
      chosen_start = start;
    }
  }
  if (chosen == nullptr) {
    const auto it = std::min_element(s.fs.begin(), s.fs.end());
    return {s.xs[it - s.fs.begin()], *it};
  }
  const double h = (iv.hi - iv.lo) / (cfg.grid_points_per_dim - 1);
  const double y = edge_from_ladder(f, iv.lo, chosen_start, iv.hi, chosen->refined.value, h);
  return {y, checked(f(y))};
}

// Kinks of min/max terms produce ridges along which several coordinates
// must move together. Poll along each group of three or more tied
// coordinates, and radially: kinks of homogeneous functions are cones
// through the origin, so scaling the free coordinates keeps their mutual
// kink relations. The second radial poll leaves coordinates at a bound fixed.
void append_ridge_directions(const std::vector<double>& cur, const std::vector<double>& step0,
                             std::span<const Bounds> bounds, std::vector<std::vector<double>>& polls) {
  const std::size_t d = cur.size();
  if (d < 3) return;
  std::vector<std::size_t> order(d);
  for (std::size_t k = 0; k < d; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cur[a] < cur[b]; });
  double mag = 1.0;
  for (double c : cur) mag = std::max(mag, std::abs(c));
  const double tie = 1e-12 * mag;
  std::size_t start = 0;
  for (std::size_t k = 1; k <= d; ++k) {
    if (k < d && cur[order[k]] - cur[order[k - 1]] <= tie) continue;
    if (k - start >= 3 && k - start < d) {
      for (double s : {1.0, -1.0}) {
        std::vector<double> dir(d, 0.0);
        for (std::size_t g = start; g < k; ++g) dir[order[g]] = s;
        polls.push_back(std::move(dir));
      }
    }
    start = k;
  }
  auto radial = [&](bool skip_bounds) {
    std::vector<double> dir(d, 0.0);
    double top = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const bool at_bound = std::abs(cur[k] - bounds[k].hi) <= tie || std::abs(cur[k] - bounds[k].lo) <= tie;
      if ((skip_bounds && at_bound) || step0[k] <= 0.0) continue;
      dir[k] = cur[k] / step0[k];
      top = std::max(top, std::abs(dir[k]));
      ++used;
    }
    if (top == 0.0 || used < 2) return;
    for (double& c : dir) c /= top;
    polls.push_back(dir);
    for (double& c : dir) c = -c;
    polls.push_back(std::move(dir));
  };
  radial(false);
  radial(true);
}

BoxMinimum minimize_box(const Objective& f, std::span<const Bounds> bounds,
                        const MinimizerConfig& cfg) {
  cfg.validate();
  const std::size_t d = bounds.size();
  for (const auto& b : bounds) {
    if (!(b.hi >= b.lo) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
      throw Error(ErrorKind::InvalidArgument, "box bounds must be finite with lo <= hi");
    }
  }
  if (d == 0) {
    std::vector<double> empty;
    return {empty, checked(f(empty))};
  }
  if (d == 1) {
    std::vector<double> x(1);
    auto r = minimize_1d(
        [&](double t) {
          x[0] = t;
          return f(x);
        },
        bounds[0], cfg);
    return {{r.argmin}, r.value};
  }

  // Grid resolution under the evaluation budget.
  long n = cfg.grid_points_per_dim;
  auto total = [d](long per_dim) {
    double t = 1.0;
    for (std::size_t k = 0; k < d; ++k) t *= static_cast<double>(per_dim);
    return t;
  };
  while (n > 3 && total(n) > static_cast<double>(cfg.max_grid_evaluations)) --n;

  std::vector<double> step0(d);
  for (std::size_t k = 0; k < d; ++k) step0[k] = (bounds[k].hi - bounds[k].lo) / (n - 1);

  struct Seed {
    double value;
    std::vector<double> x;
  };
  std::vector<Seed> seeds;
  const std::size_t keep = static_cast<std::size_t>(cfg.multistart_count);
  std::vector<long> idx(d, 0);
  std::vector<double> x(d);
  for (;;) {
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = idx[k] == n - 1 ? bounds[k].hi : bounds[k].lo + idx[k] * step0[k];
    }
    const double v = checked(f(x));
    if (seeds.size() < keep || v < seeds.back().value) {
      Seed s{v, x};
      auto pos = std::upper_bound(seeds.begin(), seeds.end(), v,
                                  [](double val, const Seed& e) { return val < e.value; });
      seeds.insert(pos, std::move(s));
      if (seeds.size() > keep) seeds.pop_back();
    }
    std::size_t k = 0;
    while (k < d && ++idx[k] == n) idx[k++] = 0;
    if (k == d) break;
  }

  // Pattern: +-e_k and the four diagonal combinations for every pair.
  std::vector<std::vector<double>> pattern;
  for (std::size_t k = 0; k < d; ++k) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> dir(d, 0.0);
      dir[k] = s;
      pattern.push_back(std::move(dir));
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = k + 1; l < d; ++l) {
      for (double sk : {1.0, -1.0}) {
        for (double sl : {1.0, -1.0}) {
          std::vector<double> dir(d, 0.0);
          dir[k] = sk;
          dir[l] = sl;
          pattern.push_back(std::move(dir));
        }
      }
    }
  }

  BoxMinimum best{seeds.front().x, seeds.front().value};
  std::vector<double> trial(d);
  for (const Seed& seed : seeds) {
    std::vector<double> cur = seed.x;
    double fcur = seed.value;
    double scale = 1.0;
    int contractions = 0;
    for (int poll = 0; poll < kMaxPolls && contractions <= cfg.refine_iterations; ++poll) {
      double fbest = fcur;
      std::vector<double> xbest;
      auto polls = pattern;
      append_ridge_directions(cur, step0, bounds, polls);
      for (const auto& dir : polls) {
        bool moved = false;
        for (std::size_t k = 0; k < d; ++k) {
          trial[k] = std::clamp(cur[k] + scale * step0[k] * dir[k], bounds[k].lo, bounds[k].hi);
          moved = moved || trial[k] != cur[k];
        }
        if (!moved) continue;
        const double v = checked(f(trial));
        if (v < fbest) {
          fbest = v;
          xbest = trial;
        }
      }
      if (!xbest.empty()) {
        cur = std::move(xbest);
        fcur = fbest;
        scale = std::min(1.0, 2.0 * scale);
      } else {
        scale *= 0.5;
        ++contractions;
        double max_step = 0.0;
        for (std::size_t k = 0; k < d; ++k) max_step = std::max(max_step, scale * step0[k]);
        double mag = 1.0;
        for (double c : cur) mag = std::max(mag, std::abs(c));
        if (max_step < 4.0 * std::numeric_limits<double>::epsilon() * mag) break;
      }
    }
    if (fcur < best.value) best = {cur, fcur};
  }
  return best;
}

SlopeFit fit_loglog_slope(const ScalarFunction& f, const SlopeFitConfig& cfg) {
  cfg.validate();
  const int needed = std::max(5, cfg.points / 3);
  double x_min = cfg.x_min;
  double x_max = cfg.x_max;
  std::vector<double> lx;
  std::vector<double> lv;
  for (;;) {
    lx.clear();
    lv.clear();
    const double ratio = std::pow(x_max / x_min, 1.0 / (cfg.points - 1));
    for (int k = 0; k < cfg.points; ++k) {
      const double x = k == cfg.points - 1 ? x_max : x_min * std::pow(ratio, k);
      const double v = checked(f(x));
      if (v < -cfg.value_floor) {
        throw Error(ErrorKind::NegativeValue,
                    "f(" + std::to_string(x) + ") = " + std::to_string(v) +
                        " < 0; the contact coordinate is overestimated");
      }
      if (v > cfg.value_floor) {
        lx.push_back(std::log(x));
        lv.push_back(std::log(v));
      }
    }
    if (static_cast<int>(lx.size()) >= needed || !cfg.adaptive_window ||
        x_max * 10.0 > cfg.max_window_top * (1.0 + 1e-12)) {
      break;
    }
    x_min *= 10.0;
    x_max *= 10.0;
  }
  if (lx.size() < 5) {
    throw Error(ErrorKind::TooFewPoints,
                std::to_string(lx.size()) + " values above the floor (need 5)");
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(lv.begin(), lv.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (lv[k] - my);
    syy += (lv[k] - my) * (lv[k] - my);
  }
  SlopeFit fit;
  fit.sigma = sxy / sxx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points_used = static_cast<int>(lx.size());
  fit.x_min = x_min;
  fit.x_max = x_max;
  fit.low_quality = fit.r2 < cfg.min_r2;
  return fit;
}

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()), data_() {
  data_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) throw Error(ErrorKind::DimensionMismatch, "matrix rows must be square");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& other) const {
  if (other.n_ != n_) throw Error(ErrorKind::DimensionMismatch, "matrix sizes differ");
  SquareMatrix out(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t k = 0; k < n_; ++k) {
      const double a = (*this)(r, k);
      for (std::size_t c = 0; c < n_; ++c) out(r, c) += a * other(k, c);
    }
  }
  return out;
}

SquareMatrix SquareMatrix::submatrix(std::span<const std::size_t> indices) const {
  SquareMatrix out(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    for (std::size_t c = 0; c < indices.size(); ++c) out(r, c) = (*this)(indices[r], indices[c]);
  }
  return out;
}

SquareMatrix invert_spd(const SquareMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0 || n > 32) {
    throw Error(ErrorKind::InvalidArgument, "SPD inversion supports dimensions 1..32");
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r + 1; c < n; ++c) {
      if (std::abs(m(r, c) - m(c, r)) > 1e-12) {
        throw Error(ErrorKind::InvalidArgument, "matrix is not symmetric");
      }
    }
  }
  double diag_scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) diag_scale = std::max(diag_scale, std::abs(m(k, k)));

  // Lower Cholesky factor L with m = L L^T.
  SquareMatrix chol(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = m(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= chol(j, k) * chol(j, k);
    if (!(s > 1e-12 * diag_scale)) {
      throw Error(ErrorKind::NotPositiveDefinite,
                  "non-positive pivot at row " + std::to_string(j));
    }
    chol(j, j) = std::sqrt(s);
    for (std::size_t i = j + 1; i < n; ++i) {
      double t = m(i, j);
      for (std::size_t k = 0; k < j; ++k) t -= chol(i, k) * chol(j, k);
      chol(i, j) = t / chol(j, j);
    }
  }
  // Invert L, then m^-1 = L^-T L^-1.
  SquareMatrix inv_l(n);
  for (std::size_t j = 0; j < n; ++j) {
    inv_l(j, j) = 1.0 / chol(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double t = 0.0;
      for (std::size_t k = j; k < i; ++k) t -= chol(i, k) * inv_l(k, j);
      inv_l(i, j) = t / chol(i, i);
    }
  }
  SquareMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c <= r; ++c) {
      double t = 0.0;
      for (std::size_t k = r; k < n; ++k) t += inv_l(k, r) * inv_l(k, c);
      out(r, c) = t;
      out(c, r) = t;
    }
  }
  return out;
}

}  // namespace gauge_graph
