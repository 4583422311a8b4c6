#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "growthlab/errors.hpp"
#include "growthlab/indices.hpp"
#include "growthlab/seqcore.hpp"
#include "growthlab/weightfn.hpp"

using namespace growthlab;

namespace {

const Window kScan = Window::decades(1e3, 1e9, 64);

BlockSequence nq3() {
  ConstructionParams p;
  p.family = Family::NQCounterexample;
  p.A = 3.0;
  p.j_max = 8;
  return build_nq_counterexample(p);
}

bool within_rel(const IndexEstimate& e, double g, double rel) {
  return e.valid() && e.gamma_lower >= g * (1 - rel) && e.gamma_upper <= g * (1 + rel) && e.contains(g);
}

}  // namespace

TEST_CASE("power weights have index s") {
  for (double s : {0.5, 1.0, 2.0, 3.0}) {
    CAPTURE(s);
    const auto e = estimate_gamma_omega(power_weight(s), kScan);
    CHECK(within_rel(e, s, 0.05));
    CHECK(e.gamma_upper - e.gamma_lower <= 0.01);
    CHECK_FALSE(e.infinite);
    CHECK(e.alpha_lower() == doctest::Approx(1.0 / e.gamma_upper));
  }
}

TEST_CASE("associated Gevrey weights have index s") {
  for (double s : {0.5, 1.0, 2.0}) {
    CAPTURE(s);
    const auto e = estimate_gamma_omega(associated(build_gevrey(s, Index{1} << 60)), kScan);
    CHECK(within_rel(e, s, 0.05));
  }
}

TEST_CASE("sentinels") {
  const auto lp = estimate_gamma_omega(log_power(2.0), kScan);
  CHECK(lp.infinite);
  CHECK(std::isinf(lp.gamma_upper));
  const auto el = estimate_gamma_omega(exp_log_square(), kScan);
  CHECK(el.valid());
  CHECK(el.gamma_upper <= 0.05);
  CHECK(el.gamma_lower >= 0.0);
  // A weight growing more slowly than every power confirms the top of the grid.
  GammaScanParams p = default_gamma_scan();
  p.square_shortcut = false;
  const auto top = estimate_gamma_omega(log_power(2.0), kScan, p);
  CHECK(top.ceiling);
  CHECK(top.gamma_lower == doctest::Approx(p.gamma_grid.back()));
}

TEST_CASE("power law for composed weights") {
  const WeightFn w = power_weight(2.0);
  for (double a : {0.25, 0.4, 1.5}) {
    CAPTURE(a);
    const auto e = estimate_gamma_omega(power_compose(w, a), kScan);
    CHECK(e.valid());
    CHECK(e.gamma_lower - 0.1 <= a * 2.0);
    CHECK(a * 2.0 <= e.gamma_upper + 0.1);
  }
  // Composition with an associated weight scales its bracket too.
  const WeightFn om = associated(build_gevrey(1.0, Index{1} << 60));
  const auto base = estimate_gamma_omega(om, kScan);
  const auto half = estimate_gamma_omega(power_compose(om, 0.5), kScan);
  CHECK(half.gamma_lower <= 0.5 * base.gamma_upper + 0.01);
  CHECK(half.gamma_upper >= 0.5 * base.gamma_lower - 0.01);
}

TEST_CASE("index is invariant under scaling and shifts") {
  const auto a = estimate_gamma_omega(power_weight(2.0), kScan);
  const auto b = estimate_gamma_omega(scaled(power_weight(2.0), 3.0, 7.0), kScan);
  CHECK(b.contains(2.0));
  CHECK(std::max(a.gamma_lower, b.gamma_lower) <= std::min(a.gamma_upper, b.gamma_upper));
}

TEST_CASE("cell ratios are monotone in gamma") {
  const WeightFn w = associated(nq3());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ug(0.05, 2.0), uK(1.01, 1e3);
  const Window win = Window::decades(1e2, 1e20, 128);
  for (int i = 0; i < 40; ++i) {
    double g1 = ug(rng), g2 = ug(rng);
    if (g1 > g2) std::swap(g1, g2);
    const double K = uK(rng);
    const auto c1 = gamma_cell(w, win, g1, K, 1e-3);
    const auto c2 = gamma_cell(w, win, g2, K, 1e-3);
    if (!c1.evaluated || !c2.evaluated) continue;
    CHECK(c2.ratio >= c1.ratio * (1 - 1e-12));
    // A failing cell stays failing for every larger gamma.
    if (c1.state == State::Fails) CHECK(c2.state != State::Holds);
  }
}

TEST_CASE("counterexample index stays below 0.9") {
  const WeightFn w = associated(nq3());
  for (const Window& win : {Window::decades(1e2, 1e30, 256), Window::decades(1e2, 1e20, 256)}) {
    CAPTURE(win.decade_span());
    const auto e = estimate_gamma_omega(w, win);
    CHECK(e.valid());
    CHECK(e.gamma_lower > 0.0);
    CHECK(e.gamma_upper <= 0.9);
    CHECK(e.gamma_upper < 1.0);
  }
  // 2 omega + 5 has the same index.
  const Window win = Window::decades(1e2, 1e30, 256);
  const auto a = estimate_gamma_omega(w, win);
  const auto b = estimate_gamma_omega(scaled(w, 2.0, 5.0), win);
  CHECK(std::max(a.gamma_lower, b.gamma_lower) <= std::min(a.gamma_upper, b.gamma_upper));
}

TEST_CASE("lemma bound table") {
  CHECK(std::isinf(lemma_bound(0.5).bound));
  CHECK(lemma_bound(1.0).bound == 1.0);
  CHECK(lemma_bound(2.0).bound == 0.5);
  CHECK(lemma_bound(1.17).bound == doctest::Approx(std::log(2.0) / (std::log(2.0) + std::log(1.17))));
  CHECK_THROWS_AS(lemma_bound(0.4), DomainError);
  // Decreasing in q0.
  double prev = HUGE_VAL;
  for (double q = 0.5; q <= 4.0; q += 0.25) {
    const double b = lemma_bound(q).bound;
    CHECK(b <= prev);
    prev = b;
  }
}

TEST_CASE("parameter interval") {
  const Interval i = interval_I_omega(0.5);
  CHECK(i.lo == 0.0);
  CHECK(i.hi == doctest::Approx(2.0));
  CHECK(i.contains(1.9));
  CHECK_FALSE(i.contains(2.0));
  CHECK_FALSE(i.contains(0.0));
  CHECK(std::isinf(interval_I_omega(0.0).hi));
  CHECK(interval_I_omega(HUGE_VAL).empty);
  CHECK(interval_I_omega(0.5, 2.0).hi == doctest::Approx(1.0));
  CHECK(std::isinf(interval_I_omega(0.5, 0.5).hi));
}

TEST_CASE("sequence index") {
  for (double s : {0.5, 1.5, 2.0}) {
    CAPTURE(s);
    const double b = estimate_gamma_M_upper(build_gevrey(s, Index{1} << 40), {2, 3, 4, 8}, 1 << 10, Index{1} << 36);
    CHECK(b == doctest::Approx(s).epsilon(1e-9));
  }
  const auto seq = nq3();
  const double beta = estimate_gamma_M_upper(seq, {2, 4, 8, 16}, seq.checkpoints()[2].a, seq.k_max() / 16);
  CHECK(beta <= 0.5 + std::log(2.0) / (2 * std::log(3.0)) + 0.01);
  CHECK(beta > 0.0);
}

TEST_CASE("scan parameters") {
  const auto p = default_gamma_scan();
  CHECK(p.gamma_grid.front() == doctest::Approx(0.05));
  CHECK(p.gamma_grid.back() == doctest::Approx(4.0));
  CHECK(p.K_grid.size() == 48);
  CHECK(p.margin == 1e-3);
  GammaScanParams bad = p;
  bad.K_grid = {0.5};
  CHECK_THROWS_AS(estimate_gamma_omega(power_weight(1.0), kScan, bad), ParameterError);
}
