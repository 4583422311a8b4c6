#include "growthlab/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "growthlab/conditions.hpp"
#include "growthlab/errors.hpp"
#include "parallel.hpp"
#include "util.hpp"

namespace growthlab {

using detail::kInf;
using detail::num;

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

GammaScanParams default_gamma_scan() {
  GammaScanParams p;
  for (int i = 1; i <= 80; ++i) p.gamma_grid.push_back(0.05 * i);
  const double lo = std::log(1.01), hi = std::log(1e3);
  for (int i = 0; i < 48; ++i) p.K_grid.push_back(std::exp(lo + (hi - lo) * i / 47.0));
  return p;
}

bool IndexEstimate::valid() const {
  return !std::isnan(gamma_lower) && !std::isnan(gamma_upper) && gamma_lower <= gamma_upper;
}

GammaCell gamma_cell(const WeightFn& w, const Window& win, double gamma, double K, double margin) {
  GammaCell cell;
  const double shift = gamma * std::log(K);
  const double x_hi = std::min(win.log_t_max, w.log_domain_max() - shift);
  cell.effective_decades = (x_hi - win.log_t_min) / std::numbers::ln10;
  if (cell.effective_decades < 3.0 - 1e-9) return cell;
  const int n = std::max(6, static_cast<int>(std::lround(win.samples * (x_hi - win.log_t_min) /
                                                         (win.log_t_max - win.log_t_min))));
  const Window eff = Window::log_range(win.log_t_min, x_hi, n);
  SubWindowAccumulator acc(eff);
  for (double x : eff.log_grid()) {
    if (x + shift > w.log_domain_max()) continue;
    const double o = w.at_log(x);
    if (o == 0.0 || std::isinf(o)) continue;
    acc.add(x, w.at_log(x + shift) / o);
  }
  const auto& st = acc.stats();
  if (!st.complete()) return cell;
  cell.evaluated = true;
  cell.ratio = st.max[2];
  cell.sub_max = st.max;
  const Trend trend = classify_growth(st.max);
  // Next sub-window maximum under a constant per-sub-window growth factor.
  double next = st.max[2];
  if (std::isfinite(st.max[2]) && st.max[1] > 0.0) next = st.max[2] * (st.max[2] / st.max[1]);
  if (st.max[2] < K * (1.0 - margin) && trend == Trend::Bounded) {
    cell.state = State::Holds;
  } else if (st.max[2] >= K && next >= K) {
    cell.state = State::Fails;
  } else if (trend != Trend::Bounded && st.max[0] < st.max[1] && st.max[1] < st.max[2] && next >= K) {
    cell.state = State::Fails;
    cell.by_trend = true;
  }
  return cell;
}

namespace {

struct GammaRow {
  bool confirmed = false;
  bool refuted = false;
  KWitness witness;
};

void validate(const GammaScanParams& p) {
  if (p.gamma_grid.empty() || p.K_grid.empty()) throw ParameterError("gamma and K grids must be non-empty");
  for (std::size_t i = 0; i < p.gamma_grid.size(); ++i) {
    if (!(p.gamma_grid[i] > 0.0)) throw ParameterError("gamma grid must lie in (0, gamma_max]");
    if (i > 0 && !(p.gamma_grid[i] > p.gamma_grid[i - 1]))
      throw ParameterError("gamma grid must be increasing");
  }
  for (double K : p.K_grid)
    if (!(K > 1.0) || !std::isfinite(K)) throw ParameterError("K grid must lie in (1, K_max]");
  if (!(p.margin > 0.0 && p.margin < 0.1)) throw ParameterError("margin must lie in (0, 0.1)");
  if (!(p.refine_tol > 0.0)) throw ParameterError("refine_tol must be positive");
}

}  // namespace

IndexEstimate estimate_gamma_omega(const WeightFn& w, const Window& win, const GammaScanParams& params) {
  validate(params);
  IndexEstimate est;
  est.window = win;
  est.margin = params.margin;
  if (!win.valid_for_asymptotics()) {
    est.gamma_lower = est.gamma_upper = kNaN;
    est.diagnostics.push_back("window too small for an asymptotic scan");
    return est;
  }
  if (params.square_shortcut) {
    const Probe sq = probe_square_condition(w, win);
    if (sq.verdict.holds()) {
      est.gamma_lower = est.gamma_upper = kInf;
      est.infinite = true;
      est.diagnostics.push_back("square condition holds with C = " + num(sq.value) + "; gamma = +inf");
      return est;
    }
  }

  std::map<double, GammaRow> cache;
  auto row = [&](double g) -> const GammaRow& {
    auto it = cache.find(g);
    if (it != cache.end()) return it->second;
    std::vector<GammaCell> cells(params.K_grid.size());
    detail::parallel_for(cells.size(), params.threads, [&](std::size_t i) {
      cells[i] = gamma_cell(w, win, g, params.K_grid[i], params.margin);
    });
    GammaRow r;
    // Cells cut off by the domain carry no evidence either way.
    bool any = false, all_fail = true;
    double best = kInf;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!cells[i].evaluated) continue;
      any = true;
      if (cells[i].state != State::Fails) all_fail = false;
      if (cells[i].state == State::Holds) {
        r.confirmed = true;
        const double slack = cells[i].ratio / params.K_grid[i];
        if (slack < best) {
          best = slack;
          r.witness = KWitness{g, params.K_grid[i], cells[i].ratio};
        }
      }
    }
    r.refuted = any && all_fail;
    return cache.emplace(g, r).first->second;
  };

  const auto& G = params.gamma_grid;
  const int n = static_cast<int>(G.size());
  // Largest confirmed grid index; -1 stands for the trivial anchor gamma = 0.
  int lo = -1, hi = n;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (row(G[mid]).confirmed ? lo : hi) = mid;
  }
  // Smallest refuted grid index above lo; n stands for "none".
  int a = lo, b = n;
  while (b - a > 1) {
    const int mid = (a + b) / 2;
    (row(G[mid]).refuted ? b : a) = mid;
  }

  double lower = lo >= 0 ? G[lo] : 0.0;
  if (params.refine && lo < n - 1) {
    double l = lower, h = G[lo + 1];
    while (h - l > params.refine_tol) {
      const double m = 0.5 * (l + h);
      (row(m).confirmed ? l : h) = m;
    }
    lower = l;
  }
  double upper = kNaN;
  if (b < n) {
    upper = G[b];
    if (params.refine) {
      double l = std::max(lower, b > 0 ? G[b - 1] : 0.0), h = upper;
      while (h - l > params.refine_tol) {
        const double m = 0.5 * (l + h);
        (row(m).refuted ? h : l) = m;
      }
      upper = h;
    }
  } else if (lo == n - 1) {
    upper = kInf;
    est.ceiling = true;
    est.diagnostics.push_back("top of the gamma grid confirmed");
  } else {
    est.diagnostics.push_back("no gamma on the grid refuted; upper bound unset");
  }
  if (lo < 0) est.diagnostics.push_back("no gamma > 0 confirmed");
  est.gamma_lower = lower;
  est.gamma_upper = upper;
  for (const auto& [g, r] : cache)
    if (r.confirmed) est.K_witnesses.push_back(r.witness);
  return est;
}

BoundReport lemma_bound(double q0) {
  if (!(q0 >= 0.5) || !std::isfinite(q0))
    throw DomainError("q0 must be >= 1/2: for q0 < 1/2 one would get limsup omega(2t)/omega(t) < 1, "
                      "impossible for a non-decreasing weight");
  BoundReport r;
  r.q0 = q0;
  r.bound = q0 == 0.5 ? kInf : std::numbers::ln2 / (std::numbers::ln2 + std::log(q0));
  return r;
}

Interval interval_I_omega(double gamma, double q0) {
  if (!(gamma >= 0.0)) throw ParameterError("gamma must be >= 0 or +inf");
  if (!(q0 >= 0.5)) throw DomainError("q0 must be >= 1/2");
  Interval iv;
  if (std::isinf(gamma)) {
    iv.empty = true;
    return iv;
  }
  if (gamma == 0.0) {
    iv.hi = kInf;
    return iv;
  }
  iv.hi = 1.0 / ((1.0 + std::log(q0) / std::numbers::ln2) * gamma);
  return iv;
}

double estimate_gamma_M_upper(const BlockSequence& seq, const std::vector<Index>& ls, Index j_lo,
                              Index j_hi) {
  if (ls.empty()) throw ParameterError("need at least one l");
  const Probe mg = check_mg(seq, seq.k_max() / 2);
  if (mg.verdict.fails())
    throw DomainError("sequence fails mg; the quotient estimate does not bound gamma(omega_M)");
  double beta = -kInf;
  for (const auto& r : probe_gamma_relation(seq, ls, j_lo, j_hi)) beta = std::max(beta, r.beta);
  return beta;
}

}  // namespace growthlab
