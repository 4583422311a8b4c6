#pragma once

#include <string_view>
#include <vector>

#include "growthlab/seqcore.hpp"
#include "growthlab/verdict.hpp"
#include "growthlab/weightfn.hpp"
#include "growthlab/window.hpp"

namespace growthlab {

/// A verdict together with the headline statistic of the probe.
struct Probe {
  Verdict verdict;
  double value = 0.0;
};

// Function-level probes. Samples whose (shifted) log-argument exceeds the
// weight's log_domain_max are dropped and counted in the diagnostics; samples
// with omega(t) = 0 are excluded from ratio statistics.

/// omega(2t) = O(omega(t)); value = tail max of omega(2t)/omega(t).
Probe probe_om1(const WeightFn& w, const Window& win);

enum class RatioMode { Om2, Om3, Om5 };
std::string_view ratio_mode_name(RatioMode m);

/// Om2: omega(t) = O(t). Om3: log t = o(omega(t)). Om5: omega(t) = o(t).
/// Little-o modes hold when the sub-window maxima decrease strictly and the
/// tail maximum is below 1e-2; they fail when the tail minimum is at least
/// 1e-2 and no longer decreasing.
Verdict probe_ratio_condition(const WeightFn& w, RatioMode mode, const Window& win);

/// Midpoint convexity of x -> omega(e^x) on the window grid, tolerance
/// 1e-9 * max(1, |omega|).
Verdict probe_convexity(const WeightFn& w, const Window& win);

/// int_1^inf omega(t)/t^2 dt < inf, through the kappa quadrature at y = 1.
Verdict probe_omnq(const WeightFn& w, const QuadratureParams& q = {});

/// int_1^inf omega(yt)/t^2 dt <= C omega(y) + C; value = smallest C on the
/// window. Propagates DivergenceError.
Probe probe_omsnq(const WeightFn& w, const Window& win, const QuadratureParams& q = {});

/// Defect W(q, T) = max over sampled pairs with s + t <= T of
/// omega(s+t) - q (omega(s) + omega(t)).
///
/// Pairs per sum level S: the diagonal and 32 log-spaced splits (fS, (1-f)S)
/// with f in [1e-6, 1/2). W is read at the ends of the three sub-windows.
/// Fails when W > 0 at the first checkpoint and grows by at least a factor
/// 2 per decade across each sub-window; Holds when W stops growing.
Verdict probe_subadditivity(const WeightFn& w, double q, const Window& win);

/// Fails (almost subadditivity disproved) if a q in q_list fails; Holds if
/// all hold. Every q must exceed 1.
Verdict falsify_almost_subadditivity(const WeightFn& w, const std::vector<double>& q_list,
                                     const Window& win);

/// omega(t^2) <= C omega(t) + C; value = tail max of omega(t^2)/(omega(t)+1).
Probe probe_square_condition(const WeightFn& w, const Window& win);

// Sequence-level checks. Extremes of mu_{lk}/mu_k are exact: between the
// breakpoints of the block structure the log-ratio is affine in k, so it is
// evaluated only at block starts and ends and their preimages under k -> lk.

struct RatioExtrema {
  double log_max = 0.0;
  double log_min = 0.0;
  Index arg_max = 0;
  Index arg_min = 0;
};

/// Exact extremes of log(mu_{l k} / mu_k) over k in [lo, hi]. Throws
/// ParameterError unless 1 <= lo <= hi and IndexError when l * hi > k_max.
RatioExtrema quotient_ratio_extrema(const BlockSequence& seq, Index l, Index lo, Index hi);

/// sup_k mu_{2k}/mu_k over k <= k_hi (2 k_hi <= k_max); value = sup.
Probe check_mg(const BlockSequence& seq, Index k_hi);

/// sum 1/mu_k; value = partial sum up to k_hi. Known families are decided
/// from closed forms (Gevrey: s > 1; counterexample: uniform bound on all
/// partial sums); the quasianalytic families from per-block lower bounds.
Probe check_nq(const BlockSequence& seq, Index k_hi);

/// liminf_j mu_{Qj}/mu_j > 1 probed on j in [j_lo, j_hi]; value = min ratio.
Probe check_beta3(const BlockSequence& seq, Index Q, Index j_lo, Index j_hi);

struct GammaRelationRow {
  Index l = 0;
  double min_ratio = 0.0;  // min of mu_{lj}/mu_j over the tail window
  Index witness_j = 0;
  double beta = 0.0;       // log(min_ratio) / log(l)
};

/// Tail minima of mu_{lj}/mu_j on j in [j_lo, j_hi] for each l, the finite
/// counterpart of liminf mu_{lj}/mu_j <= l^beta.
std::vector<GammaRelationRow> probe_gamma_relation(const BlockSequence& seq,
                                                   const std::vector<Index>& ls, Index j_lo,
                                                   Index j_hi);

enum class LimitClass { ToZero, ToInfinity, Oscillating, Inconclusive };
std::string_view limit_class_name(LimitClass c);

struct MuOverKRow {
  Index k = 0;
  int j = 0;                // macro-block holding k
  double log_ratio = 0.0;   // log(mu_k / k)
};

struct MuOverKProfile {
  std::vector<MuOverKRow> rows;
  LimitClass limit = LimitClass::Inconclusive;
  Verdict verdict;
};

/// mu_k/k at the checkpoints a_j, b_j and, unless checkpoints_only, at every
/// block start and end. The limit is classified from the per-macro-block
/// envelopes over the three thirds of the macro-block range, so sequences
/// with fewer than three macro-blocks (Gevrey) stay Inconclusive.
MuOverKProfile mu_over_k_profile(const BlockSequence& seq, bool checkpoints_only);

}  // namespace growthlab
