#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace growthlab {

/// Log-spaced sample window over t in [t_min, t_max], stored as natural logs
/// so that windows can reach far past the double range of t itself.
struct Window {
  double log_t_min = 0.0;
  double log_t_max = 0.0;
  int samples = 64;

  static Window decades(double t_min, double t_max, int samples = 64);
  static Window log_range(double x_min, double x_max, int samples = 64);

  double t_min() const;
  double t_max() const;
  /// log10(t_max / t_min)
  double decade_span() const;
  /// samples points, uniform in log t, endpoints included.
  std::vector<double> log_grid() const;
  /// i-th of three equal sub-windows in log t, i in {0, 1, 2}.
  Window sub_window(int i) const;

  /// Asymptotic probes require >= 3 decades and >= 6 samples.
  bool valid_for_asymptotics() const;
};

/// Which of the three tail sub-windows a grid point belongs to.
int sub_window_of(const Window& w, double x);

enum class Trend {
  Bounded,    // no new highs in the last sub-window, or decelerating growth
  Diverging,  // strictly increasing with non-decelerating increments
  Unclear,
};

/// Classifies per-sub-window maxima m[0] <= ... in window order.
/// `rel_tol` absorbs rounding noise when comparing successive maxima.
Trend classify_growth(const std::array<double, 3>& m, double rel_tol = 1e-9);

/// Per-sub-window extremes of a sampled statistic; empty sub-windows are NaN.
struct SubWindowStats {
  std::array<double, 3> max{};
  std::array<double, 3> min{};
  std::array<double, 3> arg_max{};  // log t at which max is attained
  std::array<double, 3> arg_min{};
  std::array<std::size_t, 3> count{};
  bool complete() const { return count[0] > 0 && count[1] > 0 && count[2] > 0; }
};

/// Accumulates (x, value) samples into sub-window extremes.
class SubWindowAccumulator {
 public:
  explicit SubWindowAccumulator(const Window& w);
  void add(double x, double value);
  const SubWindowStats& stats() const { return stats_; }

 private:
  Window window_;
  SubWindowStats stats_;
};

}  // namespace growthlab
