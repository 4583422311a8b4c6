#include "growthlab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "growthlab/errors.hpp"
#include "util.hpp"

namespace growthlab {

using detail::kInf;
using detail::num;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLn2 = std::numbers::ln2;
constexpr double kEps = std::numeric_limits<double>::epsilon();

Verdict make_verdict(std::string condition, const Window& win) {
  Verdict v;
  v.condition = std::move(condition);
  v.window = win;
  return v;
}

bool require_asymptotic(Verdict& v, const Window& win) {
  if (win.valid_for_asymptotics()) return true;
  v.diagnostics.push_back("window spans " + num(win.decade_span()) +
                          " decades; asymptotic probes need >= 3 decades and >= 6 samples");
  return false;
}

// Sample counters shared by the ratio probes.
struct Tally {
  std::size_t trimmed = 0;  // shifted argument beyond the representable range
  std::size_t zero = 0;     // omega(t) = 0
  std::size_t nonfinite = 0;

  void report(Verdict& v) const {
    if (trimmed) v.diagnostics.push_back(std::to_string(trimmed) + " samples beyond the weight's range");
    if (zero) v.diagnostics.push_back(std::to_string(zero) + " samples with omega(t) = 0 skipped");
    if (nonfinite) v.diagnostics.push_back(std::to_string(nonfinite) + " non-finite ratios skipped");
  }
};

// Accumulates f(x) over the window; f returns NaN to skip.
template <class F>
SubWindowAccumulator sample_ratio(const WeightFn& w, const Window& win, double shift, Tally& tally,
                                  F f) {
  SubWindowAccumulator acc(win);
  const double dom = w.log_domain_max();
  for (double x : win.log_grid()) {
    if (std::max(x, x + shift) > dom) {
      ++tally.trimmed;
      continue;
    }
    const double v = f(x);
    if (std::isnan(v)) continue;
    acc.add(x, v);
  }
  return acc;
}

void put_stats(Verdict& v, const SubWindowStats& st, const char* key) {
  for (int i = 0; i < 3; ++i) {
    v.statistics[std::string(key) + "_max_" + std::to_string(i)] = st.max[i];
    v.statistics[std::string(key) + "_min_" + std::to_string(i)] = st.min[i];
  }
}

// Bounded sub-window maxima => Holds; diverging => Fails with witness, but
// only once the maxima have at least doubled across the window. Slowly
// climbing ratios that are bounded far out look diverging on short windows.
void decide_big_o(Verdict& v, const SubWindowStats& st, const char* ratio_key) {
  Trend trend = classify_growth(st.max);
  if (trend == Trend::Diverging && !(st.max[2] >= 2.0 * st.max[0])) trend = Trend::Unclear;
  switch (trend) {
    case Trend::Bounded:
      v.state = State::Holds;
      break;
    case Trend::Diverging:
      v.state = State::Fails;
      v.witness["log_t"] = st.arg_max[2];
      v.witness[ratio_key] = st.max[2];
      break;
    case Trend::Unclear:
      v.diagnostics.push_back("sub-window maxima neither bounded nor diverging");
      break;
  }
}

void decide_little_o(Verdict& v, const SubWindowStats& st, const char* ratio_key) {
  const bool decreasing = st.max[0] > st.max[1] && st.max[1] > st.max[2];
  if (decreasing && st.max[2] < 1e-2) {
    v.state = State::Holds;
  } else if (st.min[2] >= 1e-2 && st.min[2] >= st.min[1] * (1.0 - 1e-9)) {
    v.state = State::Fails;
    v.witness["log_t"] = st.arg_min[2];
    v.witness[ratio_key] = st.min[2];
  } else {
    v.diagnostics.push_back("ratio decays too slowly to decide on this window");
  }
}

}  // namespace

std::string_view ratio_mode_name(RatioMode m) {
  switch (m) {
    case RatioMode::Om2:
      return "om2";
    case RatioMode::Om3:
      return "om3";
    case RatioMode::Om5:
      return "om5";
  }
  return "om2";
}

std::string_view limit_class_name(LimitClass c) {
  switch (c) {
    case LimitClass::ToZero:
      return "to-zero";
    case LimitClass::ToInfinity:
      return "to-infinity";
    case LimitClass::Oscillating:
      return "oscillating";
    case LimitClass::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Probe probe_om1(const WeightFn& w, const Window& win) {
  Probe p{make_verdict("om1", win), kNaN};
  if (!require_asymptotic(p.verdict, win)) return p;
  Tally tally;
  auto acc = sample_ratio(w, win, kLn2, tally, [&](double x) {
    const double a = w.at_log(x);
    if (a == 0.0) return ++tally.zero, kNaN;
    const double r = w.at_log(x + kLn2) / a;
    if (std::isnan(r) || (std::isinf(a))) return ++tally.nonfinite, kNaN;
    return r;
  });
  tally.report(p.verdict);
  const auto& st = acc.stats();
  if (!st.complete()) {
    p.verdict.diagnostics.push_back("a sub-window has no usable samples");
    return p;
  }
  put_stats(p.verdict, st, "ratio");
  decide_big_o(p.verdict, st, "ratio");
  p.value = st.max[2];
  p.verdict.statistics["L_hat"] = p.value;
  return p;
}

Verdict probe_ratio_condition(const WeightFn& w, RatioMode mode, const Window& win) {
  Verdict v = make_verdict(std::string(ratio_mode_name(mode)), win);
  if (!require_asymptotic(v, win)) return v;
  Tally tally;
  auto acc = sample_ratio(w, win, 0.0, tally, [&](double x) {
    const double o = w.at_log(x);
    if (o == 0.0) return ++tally.zero, kNaN;
    if (mode == RatioMode::Om3) return x > 0.0 ? x / o : kNaN;
    return std::exp(std::log(o) - x);  // omega(t)/t without forming t
  });
  tally.report(v);
  const auto& st = acc.stats();
  if (!st.complete()) {
    v.diagnostics.push_back("a sub-window has no usable samples");
    return v;
  }
  put_stats(v, st, "ratio");
  if (mode == RatioMode::Om2)
    decide_big_o(v, st, "ratio");
  else
    decide_little_o(v, st, "ratio");
  return v;
}

Verdict probe_convexity(const WeightFn& w, const Window& win) {
  Verdict v = make_verdict("om4", win);
  const auto xs = win.log_grid();
  const double dom = w.log_domain_max();
  std::vector<double> ys;
  ys.reserve(xs.size());
  for (double x : xs) ys.push_back(x > dom ? kNaN : w.at_log(x));
  double worst = -kInf;
  std::size_t worst_i = 0, triples = 0;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double a = ys[i - 1], b = ys[i], c = ys[i + 1];
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) continue;
    ++triples;
    const double tol = 1e-9 * std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    const double defect = b - 0.5 * (a + c) - tol;
    if (defect > worst) {
      worst = defect;
      worst_i = i;
    }
  }
  v.statistics["triples"] = static_cast<double>(triples);
  if (triples == 0) {
    v.diagnostics.push_back("no finite sample triples");
    return v;
  }
  v.statistics["max_midpoint_excess"] = worst;
  if (worst > 0.0) {
    v.state = State::Fails;
    v.witness["log_t"] = xs[worst_i];
    v.witness["step"] = xs[worst_i + 1] - xs[worst_i];
    v.witness["midpoint_excess"] = ys[worst_i] - 0.5 * (ys[worst_i - 1] + ys[worst_i + 1]);
  } else {
    v.state = State::Holds;
  }
  return v;
}

Verdict probe_omnq(const WeightFn& w, const QuadratureParams& q) {
  Verdict v;
  v.condition = "om_nq";
  try {
    const KappaResult r = kappa_at_log(w, 0.0, q);
    v.state = State::Holds;
    v.statistics["integral"] = r.value;
    v.statistics["remainder"] = r.remainder;
    v.statistics["pieces"] = r.pieces;
    v.statistics["last_piece_ratio"] = r.last_ratio;
  } catch (const DivergenceError& e) {
    v.state = State::Fails;
    v.witness["piece_ratio"] = e.piece_ratio();
    v.diagnostics.push_back(e.what());
  } catch (const QuadratureError& e) {
    v.diagnostics.push_back(e.what());
  } catch (const DomainError& e) {
    v.diagnostics.push_back(e.what());
    if (w.sequence()) v.diagnostics.push_back("for associated weights use the sequence-level nq check");
  }
  return v;
}

Probe probe_omsnq(const WeightFn& w, const Window& win, const QuadratureParams& q) {
  Probe p{make_verdict("om_snq", win), kNaN};
  if (!require_asymptotic(p.verdict, win)) return p;
  SubWindowAccumulator acc(win);
  std::size_t trimmed = 0;
  double c_all = -kInf;
  for (double x : win.log_grid()) {
    double k = 0.0;
    try {
      k = kappa_at_log(w, x, q).value;
    } catch (const DomainError&) {
      ++trimmed;
      continue;
    }
    const double c = k / (w.at_log(x) + 1.0);
    acc.add(x, c);
    c_all = std::max(c_all, c);
  }
  if (trimmed) p.verdict.diagnostics.push_back(std::to_string(trimmed) + " samples beyond the weight's range");
  const auto& st = acc.stats();
  if (!st.complete()) {
    p.verdict.diagnostics.push_back("a sub-window has no usable samples");
    return p;
  }
  put_stats(p.verdict, st, "C");
  decide_big_o(p.verdict, st, "C");
  p.value = c_all;
  p.verdict.statistics["C"] = c_all;
  p.verdict.statistics["C_tail"] = st.max[2];
  return p;
}

namespace {

const std::vector<double>& split_fractions() {
  static const std::vector<double> fs = [] {
    std::vector<double> v{0.5};
    const double lo = std::log(1e-6), hi = std::log(0.5);
    for (int i = 0; i < 32; ++i) v.push_back(std::exp(lo + (hi - lo) * i / 32.0));
    return v;
  }();
  return fs;
}

struct DefectRun {
  std::array<double, 3> W{kNaN, kNaN, kNaN};
  std::array<double, 3> arg_s{}, arg_t{};
  std::size_t trimmed = 0;
};

DefectRun defect_run(const WeightFn& w, double q, const Window& win) {
  DefectRun run;
  const double dom = w.log_domain_max();
  double best = -kInf, bs = kNaN, bt = kNaN;
  int filled = -1;
  for (double X : win.log_grid()) {
    const int sw = sub_window_of(win, X);
    while (filled < sw - 1) {
      ++filled;
      run.W[filled] = best == -kInf ? kNaN : best;
      run.arg_s[filled] = bs;
      run.arg_t[filled] = bt;
    }
    if (X > dom) {
      ++run.trimmed;
      continue;
    }
    const double wS = w.at_log(X);
    for (double f : split_fractions()) {
      const double ls = X + std::log(f), lt = X + std::log1p(-f);
      const double sum = w.at_log(ls) + w.at_log(lt);
      double d = wS - q * sum;
      // Rounding in omega itself is not a defect.
      if (d <= 64.0 * kEps * (wS + q * sum)) d = std::min(d, 0.0);
      if (d > best) {
        best = d;
        bs = ls;
        bt = lt;
      }
    }
  }
  while (filled < 2) {
    ++filled;
    run.W[filled] = best == -kInf ? kNaN : best;
    run.arg_s[filled] = bs;
    run.arg_t[filled] = bt;
  }
  return run;
}

}  // namespace

Verdict probe_subadditivity(const WeightFn& w, double q, const Window& win) {
  if (!(q >= 0.5)) throw ParameterError("subadditivity probe requires q >= 1/2");
  Verdict v = make_verdict("subadditivity", win);
  v.statistics["q"] = q;
  if (!require_asymptotic(v, win)) return v;
  const DefectRun run = defect_run(w, q, win);
  if (run.trimmed) v.diagnostics.push_back(std::to_string(run.trimmed) + " sum levels beyond the weight's range");
  for (int i = 0; i < 3; ++i) v.statistics["W_" + std::to_string(i)] = run.W[i];
  if (std::isnan(run.W[0]) || std::isnan(run.W[2])) {
    v.diagnostics.push_back("a sub-window has no usable sum levels");
    return v;
  }
  // Effective span: sum levels beyond the range do not count.
  const double x_hi = std::min(win.log_t_max, w.log_domain_max());
  const double decades = (x_hi - win.log_t_min) / std::numbers::ln10 / 3.0;
  const double factor = std::exp2(decades);
  v.statistics["growth_factor_required"] = factor;
  const auto& W = run.W;
  if (W[0] > 0.0 && W[1] >= factor * W[0] && W[2] >= factor * W[1]) {
    v.state = State::Fails;
    v.witness["log_s"] = run.arg_s[2];
    v.witness["log_t"] = run.arg_t[2];
    v.witness["defect"] = W[2];
    v.witness["q"] = q;
  } else if (classify_growth(W) == Trend::Bounded) {
    v.state = State::Holds;
  } else {
    v.diagnostics.push_back("defect grows, but not by a factor 2 per decade");
  }
  return v;
}

Verdict falsify_almost_subadditivity(const WeightFn& w, const std::vector<double>& q_list,
                                     const Window& win) {
  if (q_list.empty()) throw ParameterError("falsifier needs at least one q");
  for (double q : q_list)
    if (!(q > 1.0)) throw ParameterError("falsifier requires every q > 1");
  Verdict v = make_verdict("almost_subadditivity", win);
  bool all_hold = true;
  const Verdict* failing = nullptr;
  std::vector<Verdict> per_q;
  per_q.reserve(q_list.size());
  for (double q : q_list) per_q.push_back(probe_subadditivity(w, q, win));
  for (std::size_t i = 0; i < per_q.size(); ++i) {
    const Verdict& pv = per_q[i];
    const std::string tag = "q" + std::to_string(i);
    v.statistics[tag] = q_list[i];
    for (int k = 0; k < 3; ++k) {
      auto it = pv.statistics.find("W_" + std::to_string(k));
      if (it != pv.statistics.end()) v.statistics[tag + "_W_" + std::to_string(k)] = it->second;
    }
    if (pv.fails() && !failing) failing = &pv;
    if (!pv.holds()) all_hold = false;
    for (const auto& d : pv.diagnostics) v.diagnostics.push_back("q=" + num(q_list[i]) + ": " + d);
  }
  if (failing) {
    v.state = State::Fails;
    v.witness = failing->witness;
  } else if (all_hold) {
    v.state = State::Holds;
  }
  return v;
}

Probe probe_square_condition(const WeightFn& w, const Window& win) {
  Probe p{make_verdict("om7", win), kNaN};
  if (!require_asymptotic(p.verdict, win)) return p;
  Tally tally;
  SubWindowAccumulator acc(win);
  const double dom = w.log_domain_max();
  for (double x : win.log_grid()) {
    if (2.0 * x > dom || x > dom) {
      ++tally.trimmed;
      continue;
    }
    const double o = w.at_log(x);
    if (o == 0.0) {
      ++tally.zero;
      continue;
    }
    const double r = w.at_log(2.0 * x) / (o + 1.0);
    if (!std::isfinite(o) || std::isnan(r)) {
      ++tally.nonfinite;
      continue;
    }
    acc.add(x, r);
  }
  tally.report(p.verdict);
  const auto& st = acc.stats();
  if (!st.complete()) {
    p.verdict.diagnostics.push_back("a sub-window has no usable samples");
    return p;
  }
  put_stats(p.verdict, st, "C");
  decide_big_o(p.verdict, st, "C");
  p.value = st.max[2];
  p.verdict.statistics["C"] = p.value;
  return p;
}

RatioExtrema quotient_ratio_extrema(const BlockSequence& seq, Index l, Index lo, Index hi) {
  if (l < 1) throw ParameterError("ratio multiplier must be >= 1");
  if (lo < 1 || hi < lo) throw ParameterError("ratio window requires 1 <= lo <= hi");
  if (seq.empty() || hi > seq.k_max() / l)
    throw IndexError("ratio window reaches l*k = " + index_to_string(l * hi) + " beyond k_max = " +
                     index_to_string(seq.k_max()));
  std::set<Index> cand{lo, hi};
  auto add = [&](Index k) {
    if (k >= lo && k <= hi) cand.insert(k);
  };
  for (const Block& b : seq.blocks()) {
    add(b.start - 1);
    add(b.start);
    const Index c = (b.start + l - 1) / l;  // first k with l k >= start
    add(c);
    add(c - 1);
  }
  RatioExtrema r{-kInf, kInf, 0, 0};
  for (Index k : cand) {
    const double f = seq.log_mu(l * k) - seq.log_mu(k);
    if (f > r.log_max) {
      r.log_max = f;
      r.arg_max = k;
    }
    if (f < r.log_min) {
      r.log_min = f;
      r.arg_min = k;
    }
  }
  return r;
}

namespace {

// Splits [lo, hi] into three ranges equal in log k.
std::array<std::pair<Index, Index>, 3> log_thirds(Index lo, Index hi) {
  const double a = std::log(index_to_double(lo)), b = std::log(index_to_double(hi));
  std::array<std::pair<Index, Index>, 3> out;
  Index start = lo;
  for (int i = 0; i < 3; ++i) {
    Index end = hi;
    if (i < 2) {
      end = static_cast<Index>(std::floor(std::exp(a + (b - a) * (i + 1) / 3.0)));
      end = std::clamp(end, start, hi);
    }
    out[i] = {start, end};
    start = std::min(end + 1, hi);
  }
  return out;
}

Verdict empty_sequence_verdict(std::string condition) {
  Verdict v;
  v.condition = std::move(condition);
  v.diagnostics.push_back("sequence has no quotients beyond mu_0");
  return v;
}

}  // namespace

Probe check_mg(const BlockSequence& seq, Index k_hi) {
  if (seq.empty()) return Probe{empty_sequence_verdict("mg"), kNaN};
  if (k_hi < 1) throw ParameterError("mg check requires k_hi >= 1");
  Probe p;
  p.verdict.condition = "mg";
  p.verdict.exact = true;
  std::array<double, 3> m{};
  double sup = -kInf;
  Index arg = 0;
  const auto thirds = log_thirds(1, k_hi);
  for (int i = 0; i < 3; ++i) {
    const auto e = quotient_ratio_extrema(seq, 2, thirds[i].first, thirds[i].second);
    m[i] = e.log_max;
    p.verdict.statistics["log_sup_" + std::to_string(i)] = e.log_max;
    if (e.log_max > sup) {
      sup = e.log_max;
      arg = e.arg_max;
    }
  }
  p.value = std::exp(sup);
  p.verdict.statistics["sup_ratio"] = p.value;
  p.verdict.witness_index["k_sup"] = arg;
  p.verdict.statistics["k_hi"] = index_to_double(k_hi);
  if (seq.family() == Family::Gevrey) {
    p.verdict.state = State::Holds;  // mu_{2k}/mu_k = 2^s identically
    return p;
  }
  p.verdict.exact = false;
  switch (classify_growth(m, 1e-6)) {
    case Trend::Bounded:
      p.verdict.state = State::Holds;
      break;
    case Trend::Diverging:
      p.verdict.state = State::Fails;
      p.verdict.witness_index["k"] = arg;
      p.verdict.witness["ratio"] = p.value;
      break;
    case Trend::Unclear:
      p.verdict.diagnostics.push_back("sup of mu_{2k}/mu_k still moving on the checked range");
      break;
  }
  return p;
}

Probe check_nq(const BlockSequence& seq, Index k_hi) {
  if (seq.empty()) return Probe{empty_sequence_verdict("nq"), kNaN};
  Probe p;
  p.verdict.condition = "nq";
  p.value = seq.reciprocal_sum(k_hi);
  p.verdict.statistics["partial_sum"] = p.value;
  p.verdict.statistics["k_hi"] = index_to_double(k_hi);
  const auto& par = seq.params();
  switch (par.family) {
    case Family::Gevrey:
      p.verdict.exact = true;
      if (par.s > 1.0) {
        p.verdict.state = State::Holds;
      } else {
        p.verdict.state = State::Fails;  // harmonic-type series
        p.verdict.witness_index["k"] = k_hi;
        p.verdict.witness["partial_sum"] = p.value;
      }
      return p;
    case Family::NQCounterexample: {
      const double bound = par.A / (2.0 * (par.A - 2.0)) + 0.5 / (std::numbers::sqrt2 - 1.0);
      p.verdict.statistics["bound"] = bound;
      if (p.value <= bound) {
        p.verdict.state = State::Holds;
        p.verdict.exact = true;
      } else {
        p.verdict.diagnostics.push_back("partial sum exceeds the uniform bound");
      }
      return p;
    }
    default:
      break;
  }
  // Quasianalytic families: per-macro-block lower bounds with divergent sum.
  double min_margin = kInf;
  int checked = 0;
  for (const Checkpoint& cp : seq.checkpoints()) {
    double s = 0.0, lb = 0.0;
    if (par.family == Family::QACaseA) {
      if (cp.b > k_hi) break;
      s = seq.reciprocal_sum_range(cp.a + 1, cp.b);
      lb = 1.0 / par.A;
    } else {
      const Index a_next = cp.b << cp.c;
      if (a_next > k_hi) break;
      if (cp.j < 2) continue;
      s = seq.reciprocal_sum_range(cp.b + 1, a_next);
      lb = 1.0 / ((std::numbers::sqrt2 - 1.0) * cp.j * std::log(cp.j + 1.0));
    }
    ++checked;
    min_margin = std::min(min_margin, s / lb);
    p.verdict.statistics["block_sum_" + std::to_string(cp.j)] = s;
    p.verdict.statistics["block_bound_" + std::to_string(cp.j)] = lb;
  }
  p.verdict.statistics["blocks_checked"] = checked;
  if (checked >= 2 && min_margin >= 1.0 - 1e-12) {
    p.verdict.state = State::Fails;
    p.verdict.witness_index["k"] = k_hi;
    p.verdict.witness["partial_sum"] = p.value;
    p.verdict.witness["min_block_margin"] = min_margin;
    p.verdict.diagnostics.push_back("per-block sums dominate a divergent series");
  } else {
    p.verdict.diagnostics.push_back("per-block lower bounds not established on the range");
  }
  return p;
}

Probe check_beta3(const BlockSequence& seq, Index Q, Index j_lo, Index j_hi) {
  if (seq.empty()) return Probe{empty_sequence_verdict("beta3"), kNaN};
  if (Q < 2) throw ParameterError("beta3 requires Q >= 2");
  Probe p;
  p.verdict.condition = "beta3";
  p.verdict.statistics["Q"] = index_to_double(Q);
  std::array<double, 3> m{};
  std::array<Index, 3> at{};
  const auto thirds = log_thirds(j_lo, j_hi);
  for (int i = 0; i < 3; ++i) {
    const auto e = quotient_ratio_extrema(seq, Q, thirds[i].first, thirds[i].second);
    m[i] = e.log_min;
    at[i] = e.arg_min;
    p.verdict.statistics["log_inf_" + std::to_string(i)] = e.log_min;
  }
  const int imin = static_cast<int>(std::min_element(m.begin(), m.end()) - m.begin());
  const double inf = m[imin];
  p.value = std::exp(inf);
  p.verdict.statistics["inf_ratio"] = p.value;
  p.verdict.witness_index["j_inf"] = at[imin];
  if (m[2] <= 1e-12) {
    p.verdict.state = State::Fails;
    p.verdict.witness_index["j"] = at[2];
    p.verdict.witness["ratio"] = std::exp(m[2]);
  } else if (inf > 1e-12 && m[2] >= m[1] * (1.0 - 1e-9)) {
    p.verdict.state = State::Holds;
  } else {
    p.verdict.diagnostics.push_back("tail minima still decreasing towards 1");
  }
  return p;
}

std::vector<GammaRelationRow> probe_gamma_relation(const BlockSequence& seq,
                                                   const std::vector<Index>& ls, Index j_lo,
                                                   Index j_hi) {
  std::vector<GammaRelationRow> rows;
  for (Index l : ls) {
    if (l < 2) throw ParameterError("gamma relation requires l >= 2");
    const Index hi = std::min(j_hi, seq.k_max() / l);
    if (hi < j_lo) throw IndexError("window for l = " + index_to_string(l) + " exceeds k_max");
    const auto e = quotient_ratio_extrema(seq, l, j_lo, hi);
    GammaRelationRow r;
    r.l = l;
    r.min_ratio = std::exp(e.log_min);
    r.witness_j = e.arg_min;
    r.beta = e.log_min / std::log(index_to_double(l));
    rows.push_back(r);
  }
  return rows;
}

MuOverKProfile mu_over_k_profile(const BlockSequence& seq, bool checkpoints_only) {
  MuOverKProfile prof;
  prof.verdict.condition = "mu_over_k_limit";
  if (seq.empty()) {
    prof.verdict.diagnostics.push_back("sequence has no quotients beyond mu_0");
    return prof;
  }
  const auto cps = seq.checkpoints();
  auto macro_of = [&](Index k) {
    int j = 0;
    for (const Checkpoint& cp : cps)
      if (k > cp.a) j = cp.j;
    return j;
  };
  std::set<Index> ks;
  for (const Checkpoint& cp : cps) {
    ks.insert(cp.a);
    ks.insert(cp.b);
  }
  ks.insert(seq.k_max());
  if (!checkpoints_only)
    for (const Block& b : seq.blocks()) {
      ks.insert(b.start);
      ks.insert(b.end - 1);
    }
  for (Index k : ks)
    prof.rows.push_back({k, macro_of(k), seq.log_mu(k) - std::log(index_to_double(k))});

  const int n = static_cast<int>(cps.size());
  if (n < 3) {
    prof.verdict.diagnostics.push_back("need at least three macro-blocks to classify");
    return prof;
  }
  std::vector<double> U(n + 1, -kInf), L(n + 1, kInf);
  for (const auto& r : prof.rows) {
    if (r.j < 1) continue;
    U[r.j] = std::max(U[r.j], r.log_ratio);
    L[r.j] = std::min(L[r.j], r.log_ratio);
  }
  std::array<double, 3> hi{-kInf, -kInf, -kInf}, lo{kInf, kInf, kInf};
  for (int j = 1; j <= n; ++j) {
    const int t = std::min(2, (j - 1) * 3 / n);
    hi[t] = std::max(hi[t], U[j]);
    lo[t] = std::min(lo[t], L[j]);
  }
  for (int i = 0; i < 3; ++i) {
    prof.verdict.statistics["log_upper_" + std::to_string(i)] = hi[i];
    prof.verdict.statistics["log_lower_" + std::to_string(i)] = lo[i];
  }
  const bool hi_up = hi[0] < hi[1] && hi[1] < hi[2];
  const bool hi_down = hi[0] > hi[1] && hi[1] > hi[2];
  const bool lo_up = lo[0] < lo[1] && lo[1] < lo[2];
  const bool lo_down = lo[0] > lo[1] && lo[1] > lo[2];
  if (hi_down && hi[2] < 0.0)
    prof.limit = LimitClass::ToZero;
  else if (lo_up && lo[2] > 0.0)
    prof.limit = LimitClass::ToInfinity;
  else if (hi_up && lo_down && hi[2] > 0.0 && lo[2] < 0.0)
    prof.limit = LimitClass::Oscillating;
  prof.verdict.statistics["class"] = static_cast<double>(prof.limit);
  if (prof.limit != LimitClass::Inconclusive)
    prof.verdict.state = State::Holds;
  else
    prof.verdict.diagnostics.push_back("envelopes of mu_k/k show no monotone trend");
  return prof;
}

}  // namespace growthlab
