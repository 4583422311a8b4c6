#pragma once

#include <array>
#include <string>
#include <vector>

#include "growthlab/seqcore.hpp"
#include "growthlab/verdict.hpp"
#include "growthlab/weightfn.hpp"
#include "growthlab/window.hpp"

namespace growthlab {

struct GammaScanParams {
  std::vector<double> gamma_grid;  // increasing, in (0, gamma_max]
  std::vector<double> K_grid;      // in (1, K_max]
  double margin = 1e-3;
  /// Bisection between adjacent grid points down to this width.
  double refine_tol = 1e-3;
  bool refine = true;
  bool square_shortcut = true;
  /// 0 = GROWTHLAB_THREADS, else hardware concurrency.
  unsigned threads = 0;
};

/// gamma in 0.05 steps on (0, 4]; 48 log-spaced K in [1.01, 1e3]; margin 1e-3.
GammaScanParams default_gamma_scan();

struct KWitness {
  double gamma = 0.0;
  double K = 0.0;
  double ratio = 0.0;  // tail max of omega(K^gamma t) / omega(t)
};

/// Bracket [gamma_lower, gamma_upper] for gamma(omega).
///
/// gamma_lower is the largest confirmed gamma (0 when none is), gamma_upper
/// the smallest refuted one. A gamma is confirmed when some K cell holds and
/// refuted when every evaluated K cell fails. Unset bounds are NaN. `infinite` marks the +inf
/// sentinel from the square condition; `ceiling` marks a confirmed top grid
/// point, in which case gamma_upper is +inf.
struct IndexEstimate {
  double gamma_lower = 0.0;
  double gamma_upper = 0.0;
  bool infinite = false;
  bool ceiling = false;
  std::vector<KWitness> K_witnesses;
  Window window;
  double margin = 0.0;
  std::vector<std::string> diagnostics;

  bool valid() const;
  bool contains(double gamma) const { return gamma_lower <= gamma && gamma <= gamma_upper; }
  /// alpha = 1/gamma, as a bracket.
  double alpha_lower() const { return 1.0 / gamma_upper; }
  double alpha_upper() const { return 1.0 / gamma_lower; }
};

/// One (gamma, K) cell. Holds: tail max R < K (1 - margin) and the
/// sub-window maxima have levelled off (Trend::Bounded). Fails: R >= K and
/// R stays >= K when its last growth factor is applied once more, or
/// (by_trend) the maxima still climb and that projection reaches K.
struct GammaCell {
  State state = State::Inconclusive;
  double ratio = 0.0;
  std::array<double, 3> sub_max{};  // per-sub-window maxima of the ratio
  bool by_trend = false;
  /// False when the shift leaves fewer than 3 decades inside the domain.
  bool evaluated = false;
  double effective_decades = 0.0;
};
GammaCell gamma_cell(const WeightFn& w, const Window& win, double gamma, double K, double margin);

IndexEstimate estimate_gamma_omega(const WeightFn& w, const Window& win,
                                   const GammaScanParams& params = default_gamma_scan());

struct BoundReport {
  double q0 = 1.0;
  double bound = 1.0;  // +inf for q0 = 1/2
};

/// gamma(omega) >= log 2 / (log 2 + log q0). Throws DomainError for q0 < 1/2:
/// a non-decreasing omega cannot have limsup omega(2t)/omega(t) < 1.
BoundReport lemma_bound(double q0);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = false;
  bool contains(double a) const { return !empty && a > lo && a < hi; }
};

/// Open interval (0, 1 / ((1 + log q0 / log 2) gamma)) of admissible exponents a;
/// (0, inf) for gamma = 0 and empty for gamma = +inf.
Interval interval_I_omega(double gamma, double q0 = 1.0);

/// Empirical beta = max over l of log(min_j mu_{lj}/mu_j) / log l on the
/// window. Throws DomainError when check_mg fails on the sequence.
double estimate_gamma_M_upper(const BlockSequence& seq, const std::vector<Index>& ls, Index j_lo,
                              Index j_hi);

}  // namespace growthlab
