#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>

#include "growthlab/conditions.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/indices.hpp"
#include "growthlab/serialize.hpp"

using namespace growthlab;

namespace {

std::vector<BlockSequence> all_families() {
  std::vector<BlockSequence> out;
  out.push_back(build_gevrey(1.5, Index{1} << 50));
  ConstructionParams p;
  p.family = Family::NQCounterexample;
  p.A = 3.0;
  p.j_max = 8;
  out.push_back(build_sequence(p));
  p.A = 4.0;
  p.d_rule_A = 3.0;
  out.push_back(build_sequence(p));
  p.d_rule_A = 0.0;
  p.family = Family::QACaseA;
  p.A = 1.5;
  p.A0 = 1.5;
  out.push_back(build_sequence(p));
  p.A0 = 0.0;
  p.A = 3.0;
  p.family = Family::QACaseB;
  out.push_back(build_sequence(p));
  p.family = Family::QACaseC;
  out.push_back(build_sequence(p));
  return out;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string("growthlab_test_") + name);
}

}  // namespace

TEST_CASE("real formatting round-trips bit for bit") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::bit_cast<double>(rng());
    if (std::isnan(v)) continue;
    CHECK(same_bits(parse_real(format_real(v)), v));
  }
  CHECK(format_real(HUGE_VAL) == "inf");
  CHECK(std::isinf(parse_real("-inf")));
  CHECK(std::isnan(parse_real("nan")));
  CHECK_THROWS_AS(parse_real(""), ParameterError);
  CHECK_THROWS_AS(parse_real("1.5x"), ParameterError);
  CHECK_THROWS_AS(parse_real("1e999"), ParameterError);
}

TEST_CASE("sequences round-trip through JSON") {
  for (const auto& seq : all_families()) {
    CAPTURE(std::string(family_name(seq.family())));
    const Json j = to_json(seq);
    const BlockSequence back = sequence_from_json(Json::parse(j.dump()));
    CHECK(back.k_max() == seq.k_max());
    CHECK(back.family() == seq.family());
    CHECK(same_bits(back.params().A, seq.params().A));
    CHECK(same_bits(back.params().d_rule_A, seq.params().d_rule_A));
    REQUIRE(back.blocks().size() == seq.blocks().size());
    for (std::size_t i = 0; i < seq.blocks().size(); ++i) {
      const Block &a = seq.blocks()[i], &b = back.blocks()[i];
      CHECK(a.kind == b.kind);
      CHECK(a.start == b.start);
      CHECK(a.end == b.end);
      CHECK(same_bits(a.log_mu_start, b.log_mu_start));
      CHECK(same_bits(a.log_ratio, b.log_ratio));
      CHECK(same_bits(a.exponent, b.exponent));
    }
    REQUIRE(back.checkpoints().size() == seq.checkpoints().size());
    for (std::size_t i = 0; i < seq.checkpoints().size(); ++i) {
      CHECK(back.checkpoints()[i].a == seq.checkpoints()[i].a);
      CHECK(same_bits(back.checkpoints()[i].log_mu_b, seq.checkpoints()[i].log_mu_b));
    }
    CHECK(same_bits(back.log_M(back.k_max()), seq.log_M(seq.k_max())));
    CHECK(same_bits(back.reciprocal_sum(back.k_max()), seq.reciprocal_sum(seq.k_max())));
    CHECK(to_json(back) == j);
  }
}

TEST_CASE("saved sequences give identical verdicts") {
  ConstructionParams p;
  p.family = Family::NQCounterexample;
  p.A = 3.0;
  p.j_max = 8;
  const auto seq = build_sequence(p);
  const auto path = temp_file("nq.json");
  save_sequence(seq, path);
  const auto loaded = load_sequence(path);
  std::filesystem::remove(path);
  const Index hi = seq.checkpoints().back().a;
  CHECK(to_json(check_mg(seq, hi).verdict) == to_json(check_mg(loaded, hi).verdict));
  CHECK(to_json(check_nq(seq, seq.k_max()).verdict) == to_json(check_nq(loaded, loaded.k_max()).verdict));
  const Window win = Window::decades(1e2, 1e14, 64);
  CHECK(to_json(falsify_almost_subadditivity(associated(seq), {1.05}, win)) ==
        to_json(falsify_almost_subadditivity(associated(loaded), {1.05}, win)));
  CHECK(to_json(estimate_gamma_omega(associated(seq), win)).dump() ==
        to_json(estimate_gamma_omega(associated(loaded), win)).dump());
}

TEST_CASE("malformed sequence documents are rejected") {
  ConstructionParams p;
  p.family = Family::QACaseB;
  p.A = 3.0;
  p.j_max = 4;
  const Json good = to_json(build_sequence(p));
  Json j = good;
  j["schema"] = "v0";
  CHECK_THROWS_AS(sequence_from_json(j), ParameterError);
  j = good;
  j["type"] = "report";
  CHECK_THROWS_AS(sequence_from_json(j), ParameterError);
  j = good;
  j["params"].erase("A");
  CHECK_THROWS_AS(sequence_from_json(j), ParameterError);
  j = good;
  j["blocks"][0]["kind"] = "spline";
  CHECK_THROWS_AS(sequence_from_json(j), ParameterError);
  j = good;
  j["blocks"][1]["start"] = "99999";
  CHECK_THROWS_AS(sequence_from_json(j), Error);
  j = good;
  j["k_max"] = "12";
  CHECK_THROWS_AS(sequence_from_json(j), ParameterError);
  j = good;
  j["family"] = "bogus";
  CHECK_THROWS_AS(sequence_from_json(j), ParameterError);

  const auto path = temp_file("broken.json");
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_sequence(path), ParameterError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_sequence(temp_file("missing.json")), ParameterError);
}

TEST_CASE("report documents") {
  const auto e = estimate_gamma_omega(log_power(2.0), Window::decades(1e3, 1e9, 64));
  const Json j = to_json(e);
  CHECK(j["schema"] == "v1");
  CHECK(j["sentinel"] == "+inf");
  CHECK(j["gamma_upper"] == "inf");
  Verdict v;
  v.condition = "x";
  v.statistics["n"] = std::nan("");
  v.witness_index["k"] = Index{1} << 100;
  const Json vj = to_json(v);
  CHECK(vj["statistics"]["n"].is_null());
  CHECK(vj["witness"]["k"] == "1267650600228229401496703205376");
  CHECK(vj["window"].is_null());
}
