#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/seqcore.hpp"
#include "growthlab/verdict.hpp"
#include "growthlab/window.hpp"

namespace growthlab {

enum class WeightKind {
  PowerWeight,    // t^{1/s}
  LogPower,       // max(0, log t)^s
  ExpLogSquare,   // exp(log^2 t) for t >= 1, else 0
  Associated,     // omega_M
  PowerComposed,  // omega(t^{1/a})
  Scaled,         // c omega + d
  Kappa,          // int_1^inf omega(y t) / t^2 dt
  Custom,
};

namespace detail {
class WeightImpl;
}

/// Parameters of the kappa quadrature, which integrates
/// int_0^inf omega(y e^u) e^{-u} du over unit pieces in u.
struct QuadratureParams {
  double piece_rel_tol = 1e-12;   // Gauss-Kronrod tolerance per piece
  double tail_rel_tol = 1e-10;    // stop once the estimated remainder is this small
  double piece_length = 1.0;
  int min_pieces = 8;
  int max_pieces = 4000;
  // Divergence: this many consecutive non-decaying pieces.
  int divergence_run = 12;
  double divergence_ratio = 1.0 - 1e-3;
};

/// A non-decreasing weight [0, inf) -> [0, inf).
///
/// Evaluators are pure; copies share one immutable implementation. Every
/// weight can be evaluated at a log-argument, omega(e^x), which is how probes
/// reach arguments beyond the double range of t.
class WeightFn {
 public:
  explicit WeightFn(std::shared_ptr<const detail::WeightImpl> impl) : impl_(std::move(impl)) {}

  /// omega(t) for 0 <= t <= 1e300.
  double operator()(double t) const;
  /// omega(e^x). Throws DomainError beyond log_domain_max().
  double at_log(double x) const;

  WeightKind kind() const;
  std::string describe() const;
  bool normalized() const;
  /// Largest log-argument at which the weight is faithfully represented.
  double log_domain_max() const;
  /// Underlying sequence of an Associated weight, else nullptr.
  const BlockSequence* sequence() const;

 private:
  std::shared_ptr<const detail::WeightImpl> impl_;
};

WeightFn power_weight(double s);
WeightFn log_power(double s);
WeightFn exp_log_square();
/// omega_M(t) = sup_j log(t^j / M_j). Throws DomainError unless seq is log-convex.
WeightFn associated(BlockSequence seq);
/// t -> omega(t^{1/a})
WeightFn power_compose(const WeightFn& w, double a);
/// t -> c omega(t) + d with c > 0, d >= 0.
WeightFn scaled(const WeightFn& w, double c, double d);
/// kappa_omega. Evaluates kappa(1) eagerly and throws DivergenceError when the
/// defining integral diverges.
WeightFn kappa_transform(const WeightFn& w, const QuadratureParams& q = {});
/// Wraps an arbitrary non-decreasing map given on log-arguments.
WeightFn custom_weight(std::string name, std::function<double(double)> at_log,
                       double value_at_zero = 0.0);

struct KappaResult {
  double value = 0.0;
  double remainder = 0.0;  // estimated tail beyond the last piece
  int pieces = 0;
  double last_ratio = 0.0;
};

/// kappa_omega(e^{log_y}) with diagnostics. Throws DivergenceError or
/// QuadratureError.
KappaResult kappa_at_log(const WeightFn& w, double log_y, const QuadratureParams& q = {});

/// Relations of sigma and tau on a tail window. `sigma_dominates` probes
/// sigma <= tau in the O-order sense (tau = O(sigma)); `tau_dominates` the
/// converse.
struct ComparisonReport {
  double ratio_inf = 0.0;  // tau / sigma over the last sub-window
  double ratio_sup = 0.0;
  Verdict sigma_dominates;
  Verdict tau_dominates;
  Verdict equivalence;
};

/// Requires t_min >= 1, >= 3 decades and >= 64 samples (ParameterError).
ComparisonReport compare(const WeightFn& sigma, const WeightFn& tau, const Window& w);

/// (t, omega(t)) on the window grid.
std::vector<std::pair<double, double>> sample_weight(const WeightFn& w, const Window& win);

}  // namespace growthlab
