#include "growthlab/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "growthlab/errors.hpp"

namespace growthlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

Window Window::decades(double t_min, double t_max, int samples) {
  if (!(t_min > 0.0) || !(t_max > t_min))
    throw ParameterError("window requires 0 < t_min < t_max");
  return log_range(std::log(t_min), std::log(t_max), samples);
}

Window Window::log_range(double x_min, double x_max, int samples) {
  if (!(x_max > x_min)) throw ParameterError("window requires log_t_min < log_t_max");
  if (samples < 2) throw ParameterError("window requires at least 2 samples");
  return Window{x_min, x_max, samples};
}

double Window::t_min() const { return std::exp(log_t_min); }
double Window::t_max() const { return std::exp(log_t_max); }

double Window::decade_span() const { return (log_t_max - log_t_min) / std::numbers::ln10; }

std::vector<double> Window::log_grid() const {
  std::vector<double> xs(static_cast<std::size_t>(samples));
  const double h = (log_t_max - log_t_min) / (samples - 1);
  for (int i = 0; i < samples; ++i) xs[static_cast<std::size_t>(i)] = log_t_min + i * h;
  xs.back() = log_t_max;
  return xs;
}

Window Window::sub_window(int i) const {
  const double h = (log_t_max - log_t_min) / 3.0;
  const int n = std::max(2, samples / 3);
  return Window{log_t_min + i * h, i == 2 ? log_t_max : log_t_min + (i + 1) * h, n};
}

bool Window::valid_for_asymptotics() const { return decade_span() >= 3.0 - 1e-9 && samples >= 6; }

int sub_window_of(const Window& w, double x) {
  const double h = (w.log_t_max - w.log_t_min) / 3.0;
  const int i = static_cast<int>(std::floor((x - w.log_t_min) / h));
  return std::clamp(i, 0, 2);
}

Trend classify_growth(const std::array<double, 3>& m, double rel_tol) {
  for (double v : m)
    if (std::isnan(v)) return Trend::Unclear;
  if (std::isinf(m[2]) && m[2] > 0) return Trend::Diverging;
  auto slack = [rel_tol](double v) { return rel_tol * std::max(1.0, std::abs(v)); };
  const double prior = std::max(m[0], m[1]);
  if (m[2] <= prior + slack(prior)) return Trend::Bounded;
  const double g1 = m[1] - m[0], g2 = m[2] - m[1];
  if (g1 > slack(m[0]) && g2 > 0.0 && g2 <= 0.5 * g1) return Trend::Bounded;
  if (g1 > slack(m[0]) && g2 > slack(m[1]) && g2 >= g1 * (1.0 - 1e-6)) return Trend::Diverging;
  return Trend::Unclear;
}

SubWindowAccumulator::SubWindowAccumulator(const Window& w) : window_(w) {
  stats_.max.fill(kNaN);
  stats_.min.fill(kNaN);
  stats_.arg_max.fill(kNaN);
  stats_.arg_min.fill(kNaN);
  stats_.count.fill(0);
}

void SubWindowAccumulator::add(double x, double value) {
  if (std::isnan(value)) return;
  const auto i = static_cast<std::size_t>(sub_window_of(window_, x));
  if (stats_.count[i] == 0 || value > stats_.max[i]) {
    stats_.max[i] = value;
    stats_.arg_max[i] = x;
  }
  if (stats_.count[i] == 0 || value < stats_.min[i]) {
    stats_.min[i] = value;
    stats_.arg_min[i] = x;
  }
  ++stats_.count[i];
}

}  // namespace growthlab
