#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "growthlab/errors.hpp"
#include "growthlab/seqcore.hpp"
#include "oracles.hpp"

using namespace growthlab;

namespace {

ConstructionParams nq_params(double A, int j_max) {
  ConstructionParams p;
  p.family = Family::NQCounterexample;
  p.A = A;
  p.j_max = j_max;
  return p;
}

ConstructionParams qa_params(Family f, double A, int j_max, double A0 = 0.0) {
  ConstructionParams p;
  p.family = f;
  p.A = A;
  p.A0 = A0;
  p.j_max = j_max;
  return p;
}

const double kLn2 = std::numbers::ln2;

}  // namespace

TEST_CASE("gevrey quotients") {
  auto g1 = build_gevrey(1.0, 100);
  CHECK(std::exp(g1.log_mu(5)) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(g1.log_M(4) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  CHECK(g1.log_mu(0) == 0.0);
  CHECK(g1.log_M(0) == 0.0);
  CHECK(std::exp(build_gevrey(2.0, 10).log_mu(3)) == doctest::Approx(9.0));
  CHECK(std::exp(build_gevrey(0.5, 10).log_mu(4)) == doctest::Approx(2.0));
  CHECK(build_gevrey(2.0, 10).log_mu(10) == doctest::Approx(2.0 * std::log(10.0)));
  CHECK(build_gevrey(2.0, 10).reciprocal_sum(3) == doctest::Approx(1.0 + 0.25 + 1.0 / 9.0));
  CHECK(checkpoint_table(g1).empty());

  auto cp = counting_prefix(g1, std::numbers::e);
  CHECK(cp.n == 2);
  CHECK(cp.logsum == doctest::Approx(std::log(2.0)));
  CHECK(counting_prefix(g1, 0.5).n == 0);
  CHECK(counting_prefix(g1, 0.5).logsum == 0.0);

  CHECK_THROWS_AS(build_gevrey(0.0, 10), ParameterError);
  CHECK_THROWS_AS(build_gevrey(-1.0, 10), ParameterError);
  CHECK_THROWS_AS(build_gevrey(1.0, 1), ParameterError);
  CHECK_THROWS_AS(g1.log_mu(101), IndexError);
  CHECK_THROWS_AS(g1.log_mu(-1), IndexError);
  CHECK_THROWS_AS(g1.log_M(101), IndexError);
}

TEST_CASE("gevrey sums match brute force at large k") {
  const double s = 1.5;
  const std::int64_t n = 300000;
  auto g = build_gevrey(s, n);
  auto lm = oracle::gevrey(s, n);
  auto lM = oracle::log_M(lm);
  for (std::int64_t k : {1, 2, 17, 1000, 65535, 65537, 123457, 300000}) {
    CHECK(g.log_M(k) == doctest::Approx((double)lM[k]).epsilon(1e-12));
    CHECK(g.reciprocal_sum(k) == doctest::Approx((double)oracle::recip_sum(lm, 1, k)).epsilon(1e-10));
  }
}

TEST_CASE("nq counterexample checkpoints for A = 3") {
  auto seq = build_nq_counterexample(nq_params(3.0, 8));
  auto cps = checkpoint_table(seq);
  REQUIRE(cps.size() == 8);
  const int d_expected[] = {3, 4, 5, 6, 7, 8, 9, 10};
  for (int j = 0; j < 8; ++j) {
    CHECK(cps[j].j == j + 1);
    CHECK(cps[j].d == d_expected[j]);
    CHECK(cps[j].c == j + 1);
  }
  CHECK(cps[0].a == 1);
  CHECK(cps[0].b == 8);
  CHECK(cps[1].a == 16);
  CHECK(cps[1].b == 256);
  CHECK(cps[2].a == 1024);
  CHECK(seq.k_max() == pow2(88));
  CHECK(cps[0].log_mu_a == doctest::Approx(std::log(2.0)));
  CHECK(cps[0].log_mu_b == doctest::Approx(std::log(54.0)));
  CHECK(seq.log_mu(8) == doctest::Approx(std::log(54.0)).epsilon(1e-15));
  CHECK(seq.log_mu(16) == doctest::Approx(std::log(std::numbers::sqrt2 * 2.0 * 27.0)).epsilon(1e-15));
  CHECK(std::exp(seq.log_mu(1)) == doctest::Approx(2.0));
  CHECK(counting_prefix(seq, 54.0).n == 8);
  CHECK(counting_prefix(seq, 1.5).n == 0);
  // a_1 / mu_{a_1} = 1/2
  CHECK(std::exp(std::log(1.0) - cps[0].log_mu_a) == doctest::Approx(0.5));
}

TEST_CASE("nq parameter domain") {
  CHECK_THROWS_AS(build_nq_counterexample(nq_params(2.0, 4)), ParameterError);
  CHECK_THROWS_AS(build_nq_counterexample(nq_params(1.5, 4)), ParameterError);
  CHECK_THROWS_AS(build_nq_counterexample(nq_params(3.0, -1)), ParameterError);
  auto empty = build_nq_counterexample(nq_params(3.0, 0));
  CHECK(empty.empty());
  CHECK(empty.k_max() == 0);
  CHECK(empty.log_mu(0) == 0.0);
  CHECK(empty.log_M(0) == 0.0);
  CHECK(build_nq_counterexample(nq_params(2.1, 3)).checkpoints().size() == 3);
}

TEST_CASE("nq sequence equals per-index recursion") {
  for (double A : {2.1, 3.0, 4.0, 7.5}) {
    CAPTURE(A);
    auto seq = build_nq_counterexample(nq_params(A, 3));
    auto ref = oracle::nq(A, 3, std::int64_t{1} << 21);
    for (std::size_t j = 0; j < ref.b.size(); ++j) {
      CHECK(seq.checkpoints()[j].a == ref.a[j]);
      CHECK(seq.checkpoints()[j].b == ref.b[j]);
      CHECK(seq.checkpoints()[j].d == ref.d[j]);
    }
    const std::int64_t n = std::min<std::int64_t>((std::int64_t)ref.log_mu.size() - 1,
                                                  (std::int64_t)seq.k_max());
    auto lM = oracle::log_M(ref.log_mu);
    long double rs = 0.0L;
    for (std::int64_t k = 0; k <= n; ++k) {
      if (k > 0) rs += std::exp(-ref.log_mu[k]);
      const double got = seq.log_mu(k);
      if (std::abs(got - (double)ref.log_mu[k]) > 1e-9 * std::max(1.0, std::abs(got))) {
        FAIL_CHECK("log mu mismatch at k = " << k);
        break;
      }
      if (k % 997 == 0 || k == n) {
        CHECK(seq.log_M(k) == doctest::Approx((double)lM[k]).epsilon(1e-12));
        if (k > 0) CHECK(seq.reciprocal_sum(k) == doctest::Approx((double)rs).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("nq recursion identities hold in log domain") {
  const double A = 3.0;
  auto seq = build_nq_counterexample(nq_params(A, 8));
  const double l2 = kLn2;
  for (const auto& cp : seq.checkpoints()) {
    CAPTURE(cp.j);
    CHECK(std::abs(seq.log_mu(cp.b) - (cp.d * std::log(A) + seq.log_mu(cp.a))) < 1e-9);
    for (int i = 0; i < cp.j; ++i) {
      const double r = seq.log_mu(cp.b << (i + 1)) - seq.log_mu(cp.b << i);
      CHECK(std::abs(r - 0.5 * l2) < 1e-9);
      CHECK(std::abs(seq.log_mu(cp.b << (i + 1)) - seq.log_mu(cp.b) - 0.5 * (i + 1) * l2) < 1e-9);
    }
    const Index a_next = cp.b << cp.j;
    CHECK(std::abs(seq.log_mu(a_next) - seq.log_mu(cp.b) - 0.5 * cp.j * l2) < 1e-9);
    // a_j / mu_{a_j} <= 2^{-j}
    CHECK(std::log(index_to_double(cp.a)) - cp.log_mu_a <= -cp.j * l2 + 1e-12);
  }
}

TEST_CASE("sequences are log-convex and normalized") {
  std::vector<BlockSequence> seqs = {
      build_gevrey(0.7, 1000),
      build_nq_counterexample(nq_params(3.0, 8)),
      build_nq_counterexample(nq_params(2.5, 5)),
      build_qa_sequence(qa_params(Family::QACaseA, 1.5, 8, 1.5)),
      build_qa_sequence(qa_params(Family::QACaseB, 3.0, 8)),
      build_qa_sequence(qa_params(Family::QACaseC, 3.0, 8)),
  };
  for (const auto& s : seqs) {
    CHECK_FALSE(s.log_convexity_violation().has_value());
    for (std::size_t i = 1; i < s.blocks().size(); ++i)
      CHECK(s.blocks()[i].log_mu_first() >= s.blocks()[i - 1].log_mu_last());
  }
  CHECK(seqs[3].log_mu(1) == 0.0);
  CHECK(seqs[4].log_mu(1) == 0.0);
  CHECK(seqs[1].log_mu(1) == doctest::Approx(kLn2));
}

TEST_CASE("block aggregates equal brute force (randomized)") {
  std::mt19937_64 rng(20261014);
  std::uniform_real_distribution<double> uL(-3.0, 40.0), ur(0.0, 1e-2), ue(0.2, 3.0);
  std::uniform_int_distribution<int> ulen(1, 10000), ukind(0, 2), ustart(1, 5000);
  for (int trial = 0; trial < 300; ++trial) {
    Block b;
    b.kind = static_cast<BlockKind>(ukind(rng));
    b.start = ustart(rng);
    b.end = b.start + ulen(rng);
    if (b.kind == BlockKind::Formula) {
      b.exponent = ue(rng);
      b.log_mu_start = b.exponent * std::log(index_to_double(b.start));
    } else {
      b.log_mu_start = uL(rng);
      b.log_ratio = b.kind == BlockKind::Geometric ? ur(rng) : 0.0;
    }
    long double sl = 0.0L, sr = 0.0L;
    const Index n = b.count();
    for (Index i = 0; i < n; ++i) {
      long double lm = b.kind == BlockKind::Formula
                           ? b.exponent * std::log((long double)(b.start + i))
                           : b.log_mu_start + (long double)i * b.log_ratio;
      sl += lm;
      sr += std::exp(-lm);
    }
    CHECK(b.sum_log_mu(0, n) == doctest::Approx((double)sl).epsilon(1e-12).scale(1.0));
    CHECK(b.sum_recip(0, n) == doctest::Approx((double)sr).epsilon(1e-10));
    // Counting agrees with pointwise comparison.
    const double x = b.log_mu_at(b.start + n / 2);
    const Index m = b.count_at_most(x);
    CHECK(m >= n / 2 + 1);
    if (m < n) CHECK(b.log_mu_at(b.start + m) > x);
    CHECK(b.log_mu_at(b.start + m - 1) <= x);
  }
}

TEST_CASE("claim b bound on reciprocal sums") {
  const double A = 3.0;
  auto seq = build_nq_counterexample(nq_params(A, 8));
  const double bound = A / (2 * (A - 2)) + 0.5 / (std::numbers::sqrt2 - 1);
  CHECK(bound == doctest::Approx(2.70711).epsilon(1e-5));
  double prev = 0.0;
  for (const auto& b : seq.blocks()) {
    for (Index k : {b.start, b.end - 1}) {
      const double s = seq.reciprocal_sum(k);
      CHECK(s >= prev);
      CHECK(s <= bound);
      prev = s;
    }
  }
  CHECK(seq.reciprocal_sum(seq.checkpoints()[3].a) <= bound);
}

TEST_CASE("quasianalytic constructions") {
  SUBCASE("case a") {
    const double A = 1.5;
    auto seq = build_qa_sequence(qa_params(Family::QACaseA, A, 8, 1.5));
    const auto cps = seq.checkpoints();
    REQUIRE(cps.size() == 8);
    for (const auto& cp : cps) {
      CHECK(cp.d == cp.j);
      CHECK(seq.reciprocal_sum_range(cp.a + 1, cp.b) >= 1.0 / A);
      const double q = 2.0 / A;
      CHECK(std::exp(std::log(index_to_double(cp.a)) - cp.log_mu_a) * (std::pow(q, cp.d) - 1) / (q - 1) >=
            1.0 - 1e-12);
    }
    CHECK(seq.reciprocal_sum(cps[4].b) >= 0.5 + 4.0 / A);
    CHECK_THROWS_AS(build_qa_sequence(qa_params(Family::QACaseA, 1.7, 4, 1.5)), ParameterError);
    CHECK_THROWS_AS(build_qa_sequence(qa_params(Family::QACaseA, 1.5, 4, 2.0)), ParameterError);
  }
  SUBCASE("case b") {
    auto seq = build_qa_sequence(qa_params(Family::QACaseB, 3.0, 8));
    const auto cps = seq.checkpoints();
    REQUIRE(cps.size() == 8);
    for (const auto& cp : cps) {
      CAPTURE(cp.j);
      CHECK(cp.c >= cp.j);
      const double x = std::exp(cp.log_mu_b - std::log(index_to_double(cp.b)));
      const double L = std::log(cp.j + 1.0);
      CHECK(x >= std::pow(std::numbers::sqrt2, cp.c - 1) * L * (1 - 1e-12));
      if (cp.j >= 2) CHECK(std::pow(std::numbers::sqrt2, cp.c - 1) >= x / (cp.j * L) + 1 - 1e-12);
    }
    CHECK_THROWS_AS(build_qa_sequence(qa_params(Family::QACaseB, 2.0, 4)), ParameterError);
  }
  SUBCASE("case c") {
    auto seq = build_qa_sequence(qa_params(Family::QACaseC, 3.0, 8));
    const auto cps = seq.checkpoints();
    REQUIRE(cps.size() == 8);
    for (const auto& cp : cps) {
      CAPTURE(cp.j);
      CHECK(cp.log_mu_b - std::log(index_to_double(cp.b)) > std::log(double(cp.j)));
      const Index a_next = cp.b << cp.c;
      CHECK(seq.log_mu(a_next) - std::log(index_to_double(a_next)) <= -std::log(double(cp.j)) + 1e-12);
    }
  }
  CHECK_THROWS_AS(build_qa_sequence(qa_params(Family::NQCounterexample, 3.0, 4)), ParameterError);
}

TEST_CASE("index helpers") {
  CHECK(index_to_string(0) == "0");
  CHECK(index_to_string(-42) == "-42");
  CHECK(index_to_string(pow2(100)) == "1267650600228229401496703205376");
  CHECK(parse_index("1267650600228229401496703205376") == pow2(100));
  CHECK(parse_index(index_to_string(pow2(125))) == pow2(125));
  CHECK_THROWS_AS(parse_index("12a"), ParameterError);
  CHECK_THROWS_AS(parse_index("1" + std::string(60, '0')), ParameterError);
  CHECK(parse_family("nq") == Family::NQCounterexample);
  CHECK(family_name(Family::QACaseC) == "qa-c");
  CHECK_THROWS_AS(parse_family("bogus"), ParameterError);
}
