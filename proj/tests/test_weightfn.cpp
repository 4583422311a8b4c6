#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "growthlab/errors.hpp"
#include "growthlab/seqcore.hpp"
#include "growthlab/weightfn.hpp"
#include "oracles.hpp"

using namespace growthlab;

namespace {

ConstructionParams family_params(Family f, double A, int j_max, double A0 = 0.0) {
  ConstructionParams p;
  p.family = f;
  p.A = A;
  p.A0 = A0;
  p.j_max = j_max;
  return p;
}

struct Case {
  const char* name;
  BlockSequence seq;
  std::vector<long double> log_mu;  // reference quotients, log_mu[0] = 0
};

// Reference quotients come from the per-index recursions where one exists,
// otherwise from pointwise queries summed index by index.
std::vector<Case> constructed_families(std::int64_t J) {
  std::vector<Case> out;
  out.push_back({"gevrey s=1", build_gevrey(1.0, J), oracle::gevrey(1.0, J)});
  out.push_back({"gevrey s=2", build_gevrey(2.0, J), oracle::gevrey(2.0, J)});
  {
    auto seq = build_nq_counterexample(family_params(Family::NQCounterexample, 3.0, 8));
    auto n = oracle::nq(3.0, 8, J);
    out.push_back({"nq A=3", std::move(seq), std::move(n.log_mu)});
  }
  const std::pair<const char*, ConstructionParams> qa[] = {
      {"qa case a", family_params(Family::QACaseA, 1.5, 8, 1.5)},
      {"qa case b", family_params(Family::QACaseB, 3.0, 8)},
      {"qa case c", family_params(Family::QACaseC, 3.0, 8)},
  };
  for (const auto& [name, p] : qa) {
    auto seq = build_qa_sequence(p);
    const std::int64_t n = std::min<std::int64_t>(J, (std::int64_t)seq.k_max());
    std::vector<long double> lm(n + 1, 0.0L);
    for (std::int64_t k = 1; k <= n; ++k) lm[k] = seq.log_mu(k);
    out.push_back({name, std::move(seq), std::move(lm)});
  }
  return out;
}

}  // namespace

TEST_CASE("associated weight equals the finite sup (200 random t per family)") {
  const std::int64_t J = std::int64_t{1} << 20;
  std::mt19937_64 rng(7);
  for (auto& c : constructed_families(J)) {
    CAPTURE(c.name);
    const auto logM = oracle::log_M(c.log_mu);
    const std::size_t top = c.log_mu.size() - 1;
    const WeightFn w = associated(c.seq);
    // Below log mu_top the sup is attained at some j <= top.
    std::uniform_real_distribution<double> ux(0.0, (double)c.log_mu[top]);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double x = ux(rng);
      const long double ref = oracle::omega_sup(logM, x, top);
      const double got = w.at_log(x);
      const double rel = std::abs(got - (double)ref) / std::max(1.0L, std::abs(ref));
      worst = std::max(worst, rel);
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("associated weight of the Gevrey sequence") {
  const WeightFn w = associated(build_gevrey(1.0, 1 << 16));
  CHECK(w(std::numbers::e) == doctest::Approx(2.0 - std::numbers::ln2).epsilon(1e-14));
  CHECK(w(0.5) == 0.0);
  CHECK(w(1.0) == 0.0);
  CHECK(w.normalized());
  CHECK(w.kind() == WeightKind::Associated);
  REQUIRE(w.sequence() != nullptr);
  CHECK(std::isfinite(w.log_domain_max()));
  CHECK_THROWS_AS(w.at_log(w.log_domain_max() + 1.0), DomainError);
  // omega_M is non-decreasing and convex in log t.
  double prev = 0.0, prev_slope = 0.0;
  for (double x = 0.0; x <= 10.0; x += 0.05) {
    const double v = w.at_log(x);
    CHECK(v >= prev);
    const double slope = (w.at_log(x + 0.05) - v) / 0.05;
    CHECK(slope >= prev_slope - 1e-9);
    prev = v;
    prev_slope = slope;
  }
}

TEST_CASE("associated rejects sequences that are not log-convex") {
  ConstructionParams p;
  p.k_max = 4;
  Block up{BlockKind::Constant, 1, 3, std::log(3.0), 0.0, 0.0};
  Block down{BlockKind::Constant, 3, 5, std::log(2.0), 0.0, 0.0};
  auto seq = BlockSequence::from_parts(p, {up, down}, {});
  REQUIRE(seq.log_convexity_violation().has_value());
  CHECK_THROWS_AS(associated(seq), DomainError);
}

TEST_CASE("elementary weights") {
  const WeightFn p2 = power_weight(2.0);
  CHECK(p2(9.0) == doctest::Approx(3.0));
  CHECK(p2.at_log(600.0) == doctest::Approx(std::exp(300.0)));
  const WeightFn lp = log_power(2.0);
  CHECK(lp(0.5) == 0.0);
  CHECK(lp(std::exp(3.0)) == doctest::Approx(9.0));
  const WeightFn el = exp_log_square();
  CHECK(el(0.5) == 0.0);
  CHECK(el(std::exp(2.0)) == doctest::Approx(std::exp(4.0)));
  CHECK_THROWS_AS(power_weight(0.0), ParameterError);
  CHECK_THROWS_AS(power_weight(-1.0), ParameterError);
  CHECK_THROWS_AS(log_power(1.0), ParameterError);
  CHECK_THROWS_AS(p2(-1.0), ParameterError);
  CHECK_THROWS_AS(p2(1e301), DomainError);
}

TEST_CASE("composition identities") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-5.0, 60.0);
  const WeightFn base = power_weight(1.0);
  const WeightFn comp = power_compose(base, 2.0);
  const WeightFn p2 = power_weight(2.0);
  const WeightFn sc = scaled(p2, 2.0, 5.0);
  const WeightFn nested = power_compose(power_compose(power_weight(0.5), 2.0), 3.0);
  const WeightFn p3 = power_weight(3.0);
  for (int i = 0; i < 200; ++i) {
    const double x = ux(rng);
    CHECK(comp.at_log(x) == doctest::Approx(p2.at_log(x)).epsilon(1e-13));
    CHECK(sc.at_log(x) == doctest::Approx(2.0 * p2.at_log(x) + 5.0).epsilon(1e-13));
    CHECK(nested.at_log(x) == doctest::Approx(p3.at_log(x)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(power_compose(base, 0.0), ParameterError);
  CHECK_THROWS_AS(scaled(base, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(scaled(base, 1.0, -1.0), ParameterError);
  // A composed associated weight shrinks its domain by the exponent.
  const WeightFn om = associated(build_gevrey(1.0, 1 << 12));
  CHECK(power_compose(om, 0.5).log_domain_max() == doctest::Approx(0.5 * om.log_domain_max()));
}

TEST_CASE("kappa transform of power weights") {
  const WeightFn k2 = kappa_transform(power_weight(2.0));
  double worst = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double y = std::pow(10.0, i / 10.0);
    worst = std::max(worst, std::abs(k2(y) / (2.0 * std::sqrt(y)) - 1.0));
  }
  CHECK(worst <= 1e-6);
  // s/(s-1) y^{1/s} in general.
  const WeightFn k3 = kappa_transform(power_weight(3.0));
  CHECK(k3(1e4) == doctest::Approx(1.5 * std::cbrt(1e4)).epsilon(1e-6));
  CHECK_THROWS_AS(kappa_transform(power_weight(1.0)), DivergenceError);
  CHECK_THROWS_AS(kappa_transform(power_weight(0.5)), DivergenceError);
  try {
    kappa_transform(power_weight(1.0));
  } catch (const DivergenceError& e) {
    CHECK(e.piece_ratio() >= 0.999);
  }
  const KappaResult r = kappa_at_log(power_weight(2.0), 0.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.remainder <= 1e-9);
  CHECK(r.pieces >= 8);
}

TEST_CASE("kappa of a bounded-growth weight is concave in t") {
  const WeightFn k = kappa_transform(log_power(2.0));
  // kappa(y) = int_1^inf omega(yt)/t^2 dt; check midpoint concavity in t.
  for (double t = 1.0; t < 1e6; t *= 3.7) {
    const double a = k(t), b = k(2 * t), m = k(1.5 * t);
    CHECK(m >= 0.5 * (a + b) - 1e-9 * b);
    CHECK(b >= a);
  }
}

TEST_CASE("comparison of weights") {
  const Window win = Window::decades(1e2, 1e14, 128);
  const WeightFn p2 = power_weight(2.0);
  auto same = compare(p2, scaled(p2, 3.0, 7.0), win);
  CHECK(same.equivalence.holds());
  CHECK(same.ratio_sup == doctest::Approx(3.0).epsilon(1e-3));
  auto diff = compare(p2, power_weight(1.0), win);
  CHECK(diff.equivalence.fails());
  CHECK(diff.equivalence.has_witness());
  CHECK(diff.sigma_dominates.holds() != diff.tau_dominates.holds());
  CHECK_THROWS_AS(compare(p2, p2, Window::decades(0.1, 1e9, 128)), ParameterError);
  CHECK_THROWS_AS(compare(p2, p2, Window::decades(1e2, 1e4, 128)), ParameterError);
}

TEST_CASE("custom weights and sampling") {
  const WeightFn c = custom_weight("log", [](double x) { return std::max(0.0, x); });
  CHECK(c(std::exp(4.0)) == doctest::Approx(4.0));
  CHECK(c.kind() == WeightKind::Custom);
  const auto pts = sample_weight(power_weight(1.0), Window::decades(1.0, 1e3, 4));
  REQUIRE(pts.size() == 4);
  CHECK(pts.front().first == doctest::Approx(1.0));
  CHECK(pts.back().second == doctest::Approx(1e3));
}
