#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gauge_graph {

/// Settings shared by the box and scalar minimizers.
///
/// The grid seeds the search; `refine_iterations` bounds the number of step
/// contractions of the compass refinement. Scalar refinement uses golden
/// section down to floating-point resolution.
struct MinimizerConfig {
  int grid_points_per_dim = 41;
  int refine_iterations = 60;
  double tolerance = 1e-8;
  int multistart_count = 8;
  /// Upper bound on the number of seeding grid evaluations in a box search;
  /// points per dimension are reduced (never below 3) to respect it.
  long max_grid_evaluations = 20000;
  /// Allowed |min g - 1| when a contact value is asserted.
  double contact_tolerance = 1e-6;

  void validate() const;
};

/// Settings for the log-log slope fit of a regularly varying function at 0+.
struct SlopeFitConfig {
  double x_max = 1e-2;
  double x_min = 1e-5;
  int points = 25;
  double value_floor = 1e-12;
  double min_r2 = 0.99;
  /// When too few values clear the floor, slide the window up by decades
  /// until `x_max` would exceed `max_window_top`.
  bool adaptive_window = true;
  double max_window_top = 0.1;

  void validate() const;
};

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

using Objective = std::function<double(std::span<const double>)>;
using ScalarFunction = std::function<double(double)>;

struct BoxMinimum {
  std::vector<double> argmin;
  double value = 0.0;
};

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
};

/// Dense-grid seeding followed by deterministic compass refinement
/// (coordinate and pairwise-diagonal pattern) from the best seeds.
BoxMinimum minimize_box(const Objective& f, std::span<const Bounds> bounds,
                        const MinimizerConfig& cfg = {});

/// Global scalar minimization: grid scan, then golden-section refinement of
/// the best discrete local minima.
ScalarMinimum minimize_1d(const ScalarFunction& f, Bounds interval,
                          const MinimizerConfig& cfg = {});

/// Largest argument attaining the global minimum.
///
/// Candidate basins within `cfg.tolerance` of the best value are compared and
/// the rightmost is kept. Its right edge is located by bisection on three
/// nested sublevel sets {f <= m + tau}; the edge positions are extrapolated
/// to tau -> 0 assuming a power-law rise, which resolves flat contacts that
/// a single threshold cannot.
ScalarMinimum rightmost_minimizer_1d(const ScalarFunction& f, Bounds interval,
                                     const MinimizerConfig& cfg = {});

/// Right end of the connected sublevel component {f <= base + tau}
/// containing `start`, extrapolated to tau -> 0. Scans with the cfg grid
/// spacing over [start, hi].
double sublevel_right_edge(const ScalarFunction& f, double start, double hi, double base,
                           const MinimizerConfig& cfg = {});

struct SlopeFit {
  double sigma = 0.0;
  double r2 = 0.0;
  int points_used = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  bool low_quality = false;
};

/// Least-squares slope of log f(x) against log x on a geometric grid.
SlopeFit fit_loglog_slope(const ScalarFunction& f, const SlopeFitConfig& cfg = {});

/// Dense row-major square matrix; sized for gauge correlation blocks.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SquareMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * n_, n_}; }
  const std::vector<double>& data() const noexcept { return data_; }

  SquareMatrix operator*(const SquareMatrix& other) const;
  SquareMatrix submatrix(std::span<const std::size_t> indices) const;

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Inverse of a symmetric positive-definite matrix via Cholesky factorization.
/// Throws NotPositiveDefinite, or InvalidArgument for asymmetric/oversized input.
SquareMatrix invert_spd(const SquareMatrix& m);

}  // namespace gauge_graph
