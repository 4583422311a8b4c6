#include "growthlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "growthlab/conditions.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/indices.hpp"
#include "growthlab/seqcore.hpp"
#include "growthlab/weightfn.hpp"
#include "parallel.hpp"
#include "util.hpp"

namespace growthlab {

using detail::kInf;
using detail::num;

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kIdentityTol = 1e-9;

class Recorder {
 public:
  explicit Recorder(ScenarioReport& r) : r_(r) {}

  void le(std::string desc, double observed, double bound, double tol = 0.0) {
    push(std::move(desc), "<= " + num(bound, 8), observed, bound - observed, observed <= bound + tol);
  }
  void ge(std::string desc, double observed, double bound, double tol = 0.0) {
    push(std::move(desc), ">= " + num(bound, 8), observed, observed - bound, observed >= bound - tol);
  }
  void gt(std::string desc, double observed, double bound) {
    push(std::move(desc), "> " + num(bound, 8), observed, observed - bound, observed > bound);
  }
  void eq(std::string desc, double observed, double target, double tol) {
    const double res = std::isinf(target) && observed == target ? 0.0 : std::abs(observed - target);
    push(std::move(desc), "= " + num(target, 8) + " (tol " + num(tol, 2) + ")", observed, res, res < tol);
  }
  /// max |residual| of an identity family, target 0.
  void identity(std::string desc, double max_residual) {
    push(std::move(desc), "residual < " + num(kIdentityTol, 2), max_residual, max_residual,
         max_residual < kIdentityTol);
  }
  void state(std::string desc, const Verdict& v, State expected, double headline) {
    push(std::move(desc) + " [" + v.condition + "]", std::string(state_name(expected)), headline, 0.0,
         v.state == expected && (expected != State::Fails || v.has_witness()));
    r_.assertions.back().expected += ", observed " + std::string(state_name(v.state));
  }
  void flag(std::string desc, std::string expected, bool ok, double observed = 0.0) {
    push(std::move(desc), std::move(expected), observed, 0.0, ok);
  }

 private:
  void push(std::string desc, std::string expected, double observed, double residual, bool pass) {
    r_.assertions.push_back(Assertion{std::move(desc), std::move(expected), observed, residual, pass});
  }
  ScenarioReport& r_;
};

ConstructionParams nq_params(double A, int j_max, double d_rule_A = 0.0) {
  ConstructionParams p;
  p.family = Family::NQCounterexample;
  p.A = A;
  p.j_max = j_max;
  p.d_rule_A = d_rule_A;
  return p;
}

double log_index(Index k) { return std::log(index_to_double(k)); }

/// Partial sums at every block start and end; returns (max, non-decreasing).
std::pair<double, bool> partial_sum_envelope(const BlockSequence& seq) {
  double prev = 0.0, hi = 0.0;
  bool monotone = true;
  for (const auto& b : seq.blocks())
    for (Index k : {b.start, b.end - 1}) {
      const double s = seq.reciprocal_sum(k);
      if (s < prev) monotone = false;
      prev = s;
      hi = std::max(hi, s);
    }
  return {hi, monotone};
}

// --- claims-a-e -----------------------------------------------------------

void claims_a_e(const ScenarioConfig& c, ScenarioReport& r) {
  r.inputs["A"] = num(c.A, 15);
  r.inputs["j_max"] = std::to_string(c.j_max);
  const BlockSequence seq = build_nq_counterexample(nq_params(c.A, c.j_max));
  Recorder rec(r);
  const double A = c.A, logA = std::log(A);
  const auto cps = seq.checkpoints();

  const auto lc = seq.log_convexity_violation();
  rec.flag("mu non-decreasing (log-convex)", "no violation", !lc.has_value(),
           lc ? index_to_double(*lc) : 0.0);
  rec.ge("log mu_1 >= 0 (normalized)", seq.log_mu(1), 0.0);

  double r_b = 0, r_step = 0, r_cum = 0, r_next = 0, slack_a = -kInf;
  for (const auto& cp : cps) {
    r_b = std::max(r_b, std::abs(seq.log_mu(cp.b) - (cp.d * logA + seq.log_mu(cp.a))));
    for (int i = 0; i < cp.c; ++i) {
      const double lo = seq.log_mu(cp.b << i), hi = seq.log_mu(cp.b << (i + 1));
      r_step = std::max(r_step, std::abs(hi - lo - 0.5 * kLn2));
      r_cum = std::max(r_cum, std::abs(hi - seq.log_mu(cp.b) - 0.5 * (i + 1) * kLn2));
    }
    r_next = std::max(r_next, std::abs(seq.log_mu(cp.b << cp.c) - seq.log_mu(cp.b) - 0.5 * cp.j * kLn2));
    slack_a = std::max(slack_a, log_index(cp.a) - seq.log_mu(cp.a) + cp.j * kLn2);
  }
  rec.identity("mu_{b_j} = A^{d_j} mu_{a_j}", r_b);
  rec.identity("mu_{2^{i+1} b_j} / mu_{2^i b_j} = sqrt 2 for 0 <= i < j", r_step);
  rec.identity("mu_{2^{i+1} b_j} / mu_{b_j} = 2^{(i+1)/2}", r_cum);
  rec.identity("mu_{a_{j+1}} = 2^{j/2} mu_{b_j}", r_next);
  rec.le("max_j log(a_j / mu_{a_j}) + j log 2 <= 0", slack_a, 0.0, 1e-12);

  const double bound_b = A / (2 * (A - 2)) + 0.5 / (std::numbers::sqrt2 - 1);
  const auto [sum_max, monotone] = partial_sum_envelope(seq);
  rec.flag("partial sums of 1/mu_k non-decreasing", "true", monotone);
  rec.le("sup of partial sums of 1/mu_k <= A/(2(A-2)) + 1/(2(sqrt2-1))", sum_max, bound_b);
  const Probe nq = check_nq(seq, seq.k_max());
  rec.state("sum 1/mu_k converges", nq.verdict, State::Holds, nq.value);

  const Probe mg = check_mg(seq, seq.k_max() / 2);
  rec.le("sup_k mu_{2k}/mu_k <= sqrt2 A", mg.value, std::numbers::sqrt2 * A, 1e-9);
  const RatioExtrema e2 = quotient_ratio_extrema(seq, 2, 1, seq.k_max() / 2);
  rec.ge("a witness k attains mu_{2k}/mu_k >= A", std::exp(e2.log_max), A, 1e-12);

  const Probe b3 = check_beta3(seq, 4, 1, seq.k_max() / 4);
  rec.ge("inf_j mu_{4j}/mu_j >= 2^{1/4}", b3.value, std::pow(2.0, 0.25), 1e-9);

  double r_e = 0;
  for (const auto& cp : cps)
    for (int n = 1; n <= cp.j; ++n)
      r_e = std::max(r_e, std::abs(seq.log_mu(cp.b << n) - seq.log_mu(cp.b) - 0.5 * n * kLn2));
  rec.identity("mu_{2^n b_j} / mu_{b_j} = 2^{n/2} for n <= j", r_e);
  const double beta_bound = 0.5 + 0.5 * kLn2 / std::log(3.0);
  // l b_j must stay inside the last macro-block, so l <= 2^{j_max}.
  const int l_max = static_cast<int>(std::min<Index>(16, pow2(std::min(c.j_max, 4))));
  std::vector<Index> ls;
  for (int l = 2; l <= l_max; ++l) ls.push_back(l);
  const Index j_lo = cps[std::min<std::size_t>(2, cps.size() - 1)].a;
  const double beta = estimate_gamma_M_upper(seq, ls, j_lo, seq.k_max() / l_max);
  rec.le("empirical beta (max over l = 2.." + std::to_string(l_max) + ") <= 1/2 + log2/(2 log3) + 0.01", beta,
         beta_bound + 0.01);
}

// --- step-v-nonequiv ------------------------------------------------------

void step_v(const ScenarioConfig& c, ScenarioReport& r) {
  r.inputs["A"] = num(c.A, 15);
  r.inputs["A_prime"] = num(c.A_prime, 15);
  r.inputs["j_max"] = std::to_string(c.j_max);
  if (!(c.A_prime > c.A)) throw ParameterError("A_prime must exceed A");
  if (c.j_max < 3) throw ParameterError("step-v-nonequiv needs j_max >= 3 for a checkpoint trend");
  const BlockSequence M = build_nq_counterexample(nq_params(c.A, c.j_max));
  const BlockSequence N = build_nq_counterexample(nq_params(c.A_prime, c.j_max, c.A));
  Recorder rec(r);
  const auto cps = M.checkpoints();
  const double log_q = std::log(c.A_prime / c.A);

  bool same = N.checkpoints().size() == cps.size();
  for (std::size_t i = 0; same && i < cps.size(); ++i)
    same = N.checkpoints()[i].a == cps[i].a && N.checkpoints()[i].b == cps[i].b;
  rec.flag("both sequences share a_j, b_j", "true", same);

  double res = 0;
  int d_sum = 0;
  for (const auto& cp : cps) {
    d_sum += cp.d;
    const Index a_next = cp.b << cp.c;
    res = std::max(res, std::abs(N.log_mu(a_next) - M.log_mu(a_next) - d_sum * log_q));
  }
  rec.identity("mu'_{a_{j+1}} / mu_{a_{j+1}} = (A'/A)^{d_1 + ... + d_j}", res);

  // (M'_k / M_k)^{1/k} at k = a_2 .. a_{j_max}.
  std::vector<double> root;
  for (std::size_t i = 1; i < cps.size(); ++i)
    root.push_back((N.log_M(cps[i].a) - M.log_M(cps[i].a)) / index_to_double(cps[i].a));
  bool increasing = root.size() >= 2;
  double min_gap = kInf;
  for (std::size_t i = 1; i < root.size(); ++i) {
    increasing = increasing && root[i] > root[i - 1];
    min_gap = std::min(min_gap, root[i] - root[i - 1]);
  }
  rec.flag("log (M'_k/M_k)^{1/k} strictly increasing at k = a_2..a_jmax", "true", increasing, min_gap);
  if (!root.empty()) rec.gt("log (M'_k/M_k)^{1/k} at the last checkpoint", root.back(), root.front());

  // M'_k <= B (M_{ck})^{1/c} bounds log M'_k - log M_{ck}/c; growth of that
  // gap per index rules out B C^k as well.
  for (int cf : {1, 2, 4}) {
    std::vector<double> g;
    for (std::size_t i = 1; i < cps.size(); ++i)
      if (cps[i].a * cf <= M.k_max())
        g.push_back((N.log_M(cps[i].a) - M.log_M(cps[i].a * cf) / cf) / index_to_double(cps[i].a));
    bool grows = g.size() >= 2;
    for (std::size_t i = 1; i < g.size(); ++i) grows = grows && g[i] > g[i - 1];
    const std::string cs = std::to_string(cf);
    rec.flag("(log M'_k - log M_{" + cs + "k}/" + cs + ") / k strictly increasing at checkpoints",
             "true", grows, g.empty() ? 0.0 : g.back());
  }

  const WeightFn wM = associated(M), wN = associated(N);
  const double x_hi = std::min(std::log(1e30), std::min(wM.log_domain_max(), wN.log_domain_max()));
  const Window win = Window::log_range(std::log(1e2), x_hi, 256);
  const ComparisonReport cmp = compare(wM, wN, win);
  rec.state("omega_M and omega_M' equivalent", cmp.equivalence, State::Fails, cmp.ratio_sup);
}

// --- main-thm-family ------------------------------------------------------

GammaScanParams scan_params(const ScenarioConfig& c) {
  GammaScanParams p = default_gamma_scan();
  p.threads = c.threads;
  return p;
}

void main_thm_family(const ScenarioConfig& c, ScenarioReport& r) {
  r.inputs["s"] = num(c.s, 15);
  std::string as;
  for (double a : c.a_values) as += (as.empty() ? "" : ",") + num(a, 15);
  r.inputs["a"] = as;
  r.inputs["q"] = num(c.q, 15);
  const WeightFn w = power_weight(c.s);
  Recorder rec(r);
  const IndexEstimate g = estimate_gamma_omega(w, c.scan_window, scan_params(c));
  rec.ge("gamma(omega) lower bound within 5% of s", g.gamma_lower, 0.95 * c.s);
  rec.le("gamma(omega) upper bound within 5% of s", g.gamma_upper, 1.05 * c.s);
  const Probe sq = probe_square_condition(w, c.scan_window);
  rec.state("omega(t^2) <= C omega(t) + C (gamma finite)", sq.verdict, State::Fails, sq.value);

  std::vector<WeightFn> taus;
  for (double a : c.a_values) {
    const std::string tag = "a=" + num(a);
    rec.flag(tag + ": a in (0, 1/gamma(omega))", "true", interval_I_omega(c.s).contains(a), a);
    const WeightFn tau = power_compose(w, a);
    taus.push_back(tau);

    double res = 0;
    const WeightFn closed = power_weight(c.s * a);
    for (double x : c.scan_window.log_grid()) {
      const double u = tau.at_log(x), v = closed.at_log(x);
      res = std::max(res, std::abs(u - v) / std::max(1.0, std::abs(v)));
    }
    rec.le(tag + ": omega(t^{1/a}) = t^{1/(sa)} pointwise (relative)", res, 1e-12);

    const IndexEstimate e = estimate_gamma_omega(tau, c.scan_window, scan_params(c));
    rec.le(tag + ": gamma(tau_a) lower bound <= a s + 0.1", e.gamma_lower, a * c.s + 0.1);
    rec.ge(tag + ": gamma(tau_a) upper bound >= a s - 0.1", e.gamma_upper, a * c.s - 0.1);
    rec.le(tag + ": gamma(tau_a) lower bound < 1", e.gamma_lower, 1.0);

    const Verdict f = falsify_almost_subadditivity(tau, {c.q}, c.falsifier_window);
    rec.state(tag + ": tau_a almost subadditive", f, State::Fails, f.witness.count("defect") ? f.witness.at("defect") : 0.0);
  }
  for (std::size_t i = 0; i < taus.size(); ++i)
    for (std::size_t k = i + 1; k < taus.size(); ++k) {
      const ComparisonReport cmp = compare(taus[i], taus[k], c.scan_window);
      rec.state("tau_" + num(c.a_values[i]) + " ~ tau_" + num(c.a_values[k]), cmp.equivalence, State::Fails,
                cmp.ratio_sup);
    }
}

// --- qa-cases -------------------------------------------------------------

ConstructionParams qa_params(Family f, double A, int j_max, double A0 = 0.0) {
  ConstructionParams p;
  p.family = f;
  p.A = A;
  p.A0 = A0;
  p.j_max = j_max;
  return p;
}

void qa_cases(const ScenarioConfig& c, ScenarioReport& r) {
  const int J = c.qa_j_max;
  r.inputs["j_max"] = std::to_string(J);
  r.inputs["case a"] = "A=1.5, A0=1.5";
  r.inputs["case b"] = "A=3";
  r.inputs["case c"] = "A=3";
  Recorder rec(r);
  struct Case {
    const char* tag;
    ConstructionParams p;
    LimitClass limit;
  };
  const Case cases[] = {
      {"case a", qa_params(Family::QACaseA, 1.5, J, 1.5), LimitClass::ToZero},
      {"case b", qa_params(Family::QACaseB, 3.0, J), LimitClass::ToInfinity},
      {"case c", qa_params(Family::QACaseC, 3.0, J), LimitClass::Oscillating},
  };
  for (const auto& cs : cases) {
    const std::string tag = cs.tag;
    const BlockSequence seq = build_qa_sequence(cs.p);
    const auto cps = seq.checkpoints();
    rec.eq(tag + ": construction yields j_max macro-blocks", static_cast<double>(cps.size()), J, 0.5);
    rec.flag(tag + ": mu non-decreasing", "no violation", !seq.log_convexity_violation().has_value());

    if (cs.p.family == Family::QACaseA) {
      const double A = cs.p.A, q = 2.0 / A;
      double feas = kInf, blk = kInf;
      for (const auto& cp : cps) {
        feas = std::min(feas, std::exp(log_index(cp.a) - cp.log_mu_a) * (std::pow(q, cp.d) - 1) / (q - 1));
        blk = std::min(blk, seq.reciprocal_sum_range(cp.a + 1, cp.b));
      }
      rec.ge(tag + ": min_j (a_j/mu_{a_j}) ((2/A)^{d_j} - 1)/((2/A) - 1) >= 1", feas, 1.0, 1e-12);
      rec.ge(tag + ": min_j sum over (a_j, b_j] of 1/mu_k >= 1/A", blk, 1.0 / A);
      rec.gt(tag + ": partial sum up to b_jmax > 1/2 + (j_max-1)/A", seq.reciprocal_sum(cps.back().b),
             0.5 + (J - 1) / A);
    } else if (cs.p.family == Family::QACaseB) {
      double margin = kInf;
      for (const auto& cp : cps) {
        if (cp.j < 2) continue;
        const double lb = 1.0 / ((std::numbers::sqrt2 - 1) * cp.j * std::log(cp.j + 1.0));
        margin = std::min(margin, seq.reciprocal_sum_range(cp.b + 1, cp.b << cp.c) / lb);
      }
      rec.ge(tag + ": min_{j>=2} block sum over (b_j, a_{j+1}] / (1/((sqrt2-1) j log(j+1)))", margin, 1.0);
    } else {
      double hi = kInf, lo = -kInf;
      for (const auto& cp : cps) {
        hi = std::min(hi, cp.log_mu_b - log_index(cp.b) - std::log(double(cp.j)));
        const Index a_next = cp.b << cp.c;
        lo = std::max(lo, seq.log_mu(a_next) - log_index(a_next) + std::log(double(cp.j)));
      }
      rec.gt(tag + ": min_j log(mu_{b_j}/(j b_j)) > 0", hi, 0.0);
      rec.le(tag + ": max_j log(j mu_{a_{j+1}}/a_{j+1}) <= 0", lo, 0.0, 1e-12);
    }

    const Probe nq = check_nq(seq, seq.k_max());
    rec.state(tag + ": sum 1/mu_k converges", nq.verdict, State::Fails, nq.value);
    const MuOverKProfile prof = mu_over_k_profile(seq, false);
    rec.flag(tag + ": mu_k/k limit class", std::string(limit_class_name(cs.limit)), prof.limit == cs.limit);
    const WeightFn w = associated(seq);
    const Verdict f = falsify_almost_subadditivity(w, {c.q}, c.falsifier_window);
    rec.state(tag + ": omega_M almost subadditive", f, State::Fails,
              f.witness.count("defect") ? f.witness.at("defect") : 0.0);
  }
}

// --- lemma-bounds ---------------------------------------------------------

void lemma_bounds(const ScenarioConfig& c, ScenarioReport& r) {
  r.inputs["q0"] = "0.5,1,1.17,2";
  r.inputs["q"] = num(c.q, 15);
  Recorder rec(r);
  rec.eq("bound for q0 = 1/2", lemma_bound(0.5).bound, kInf, 1e-15);
  rec.eq("bound for q0 = 1", lemma_bound(1.0).bound, 1.0, 1e-15);
  rec.eq("bound for q0 = 1.17", lemma_bound(1.17).bound, kLn2 / (kLn2 + std::log(1.17)), 1e-15);
  rec.eq("bound for q0 = 2", lemma_bound(2.0).bound, 0.5, 1e-15);
  bool rejected = false;
  try {
    lemma_bound(0.4);
  } catch (const DomainError&) {
    rejected = true;
  }
  rec.flag("q0 = 0.4 rejected", "DomainError", rejected);

  for (double s : {1.0, 2.0, 0.5}) {
    const std::string tag = "power weight s=" + num(s);
    const WeightFn w = power_weight(s);
    const Verdict f = falsify_almost_subadditivity(w, {c.q}, c.falsifier_window);
    if (s >= 1.0) {
      rec.state(tag + ": no falsification", f, State::Holds, 0.0);
      const Verdict p = probe_subadditivity(w, 1.0, c.falsifier_window);
      double W = -kInf;
      for (int i = 0; i < 3; ++i) W = std::max(W, p.statistics.at("W_" + std::to_string(i)));
      const double scale = w.at_log(c.falsifier_window.log_t_max);
      rec.le(tag + ": max sampled (omega(s+t) - omega(s) - omega(t)) / omega(t_max)", W / scale, 0.0, 1e-12);
      const IndexEstimate g = estimate_gamma_omega(w, c.scan_window, scan_params(c));
      rec.ge(tag + ": gamma lower bound >= 1 - grid step", g.gamma_lower, 0.95);
    } else {
      rec.state(tag + ": falsified", f, State::Fails, f.witness.count("defect") ? f.witness.at("defect") : 0.0);
    }
  }
}

// --- kappa-remark ---------------------------------------------------------

void kappa_remark(const ScenarioConfig& c, ScenarioReport& r) {
  r.inputs["s"] = num(c.s, 15);
  if (!(c.s > 1.0)) throw ParameterError("kappa-remark needs s > 1");
  Recorder rec(r);
  const WeightFn w = power_weight(c.s);
  const WeightFn k = kappa_transform(w);
  const double factor = c.s / (c.s - 1.0);
  double worst = 0.0;
  for (double x : Window::decades(1.0, 1e6, 61).log_grid()) {
    const double want = factor * std::exp(x / c.s);
    worst = std::max(worst, std::abs(k.at_log(x) - want) / want);
  }
  rec.le("kappa(y) = s/(s-1) y^{1/s} on y in [1, 1e6] (relative)", worst, 1e-6);

  bool diverged = false;
  try {
    kappa_transform(power_weight(1.0));
  } catch (const DivergenceError&) {
    diverged = true;
  }
  rec.flag("kappa of t diverges", "DivergenceError", diverged);

  const Window win = Window::decades(1e2, 1e14, 64);
  const ComparisonReport cmp = compare(w, k, win);
  rec.state("omega ~ kappa_omega", cmp.equivalence, State::Holds, cmp.ratio_sup);
  const Verdict sub = probe_subadditivity(k, 1.0, win);
  double W = -kInf;
  for (int i = 0; i < 3; ++i) W = std::max(W, sub.statistics.at("W_" + std::to_string(i)));
  rec.le("max sampled (kappa(s+t) - kappa(s) - kappa(t)) / kappa(t_max)", W / k.at_log(win.log_t_max), 0.0,
         1e-9);
  const Verdict cv = probe_convexity(k, win);
  rec.state("t -> kappa(e^t) convex", cv, State::Holds, cv.statistics.count("max_midpoint_excess")
                                                            ? cv.statistics.at("max_midpoint_excess")
                                                            : 0.0);
}

using Runner = void (*)(const ScenarioConfig&, ScenarioReport&);

struct Entry {
  std::string_view id;
  Runner run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {"claims-a-e", claims_a_e},     {"step-v-nonequiv", step_v}, {"main-thm-family", main_thm_family},
      {"qa-cases", qa_cases},         {"lemma-bounds", lemma_bounds}, {"kappa-remark", kappa_remark},
  };
  return r;
}

}  // namespace

bool ScenarioReport::passed() const {
  if (skipped || assertions.empty()) return false;
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

const std::vector<std::string_view>& scenario_ids() {
  static const std::vector<std::string_view> ids = [] {
    std::vector<std::string_view> v;
    for (const auto& e : registry()) v.push_back(e.id);
    return v;
  }();
  return ids;
}

ScenarioReport run_scenario(std::string_view id, const ScenarioConfig& config) {
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const Entry& e) { return e.id == id; });
  if (it == reg.end()) {
    std::string known;
    for (const auto& e : reg) known += (known.empty() ? "" : ", ") + std::string(e.id);
    throw ParameterError("unknown scenario '" + std::string(id) + "' (known: " + known + ")");
  }
  ScenarioReport r;
  r.id = std::string(id);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    it->run(config, r);
  } catch (const ConstructionError& e) {
    r.skipped = true;
    r.skip_reason = e.what();
  } catch (const ParameterError& e) {
    r.skipped = true;
    r.skip_reason = e.what();
  }
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

FullReport full_report(const ScenarioConfig& config) {
  FullReport out;
  const auto& ids = scenario_ids();
  out.reports.resize(ids.size());
  detail::parallel_for(ids.size(), config.threads,
                       [&](std::size_t i) { out.reports[i] = run_scenario(ids[i], config); });
  for (const auto& r : out.reports) {
    if (r.skipped)
      ++out.skipped;
    else if (r.passed())
      ++out.passed;
    else
      ++out.failed;
  }
  return out;
}

int exit_code(const FullReport& r) {
  if (r.failed > 0) return 1;
  return r.skipped > 0 ? 2 : 0;
}

namespace {

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace

std::string format_text(const ScenarioReport& r, bool timing) {
  std::ostringstream os;
  os << "scenario " << r.id << ": ";
  if (r.skipped) {
    os << "SKIPPED (" << r.skip_reason << ")\n";
    return os.str();
  }
  const auto npass = std::count_if(r.assertions.begin(), r.assertions.end(), [](const Assertion& a) { return a.pass; });
  os << (r.passed() ? "PASS" : "FAIL") << " (" << npass << "/" << r.assertions.size() << ")";
  if (timing) os << " in " << num(r.runtime_seconds, 3) << "s";
  os << "\n";
  for (const auto& [k, v] : r.inputs) os << "  " << k << " = " << v << "\n";
  std::size_t wd = 11, we = 8;
  for (const auto& a : r.assertions) {
    wd = std::max(wd, a.description.size());
    we = std::max(we, a.expected.size());
  }
  os << "  " << pad("", 5) << pad("description", wd + 2) << pad("expected", we + 2) << pad("observed", 16)
     << "residual\n";
  for (const auto& a : r.assertions)
    os << "  " << pad(a.pass ? "ok" : "FAIL", 5) << pad(a.description, wd + 2) << pad(a.expected, we + 2)
       << pad(num(a.observed, 10), 16) << num(a.residual, 3) << "\n";
  return os.str();
}

std::string format_text(const FullReport& r, bool timing) {
  std::string out;
  for (const auto& s : r.reports) out += format_text(s, timing) + "\n";
  out += "summary: " + std::to_string(r.passed) + " passed, " + std::to_string(r.failed) + " failed, " +
         std::to_string(r.skipped) + " skipped\n";
  return out;
}

}  // namespace growthlab
