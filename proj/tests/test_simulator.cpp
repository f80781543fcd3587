#include "doctest.h"

#include "needle/simulator.hpp"
#include "needle/needle.hpp"

#include <cmath>
#include <set>

using namespace needle;

namespace {

RunConfig config_for(std::int64_t n, std::int64_t k, std::uint64_t seed = 1) {
  RunConfig c;
  c.instance = NeedleInstance(n, k);
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("rng: streams are reproducible and distinct") {
  auto a = Xoshiro256::for_trial(42, 0);
  auto b = Xoshiro256::for_trial(42, 0);
  auto c = Xoshiro256::for_trial(42, 1);
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs = differs || x != c();
  }
  CHECK(differs);
  auto r = Xoshiro256::for_trial(7, 3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.below(5);
    REQUIRE(v < 5);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("packed bits keep the ones-count") {
  PackedBits bits(130);
  bits.set_first(70);
  CHECK(bits.ones() == 70);
  CHECK(bits.get(69));
  CHECK_FALSE(bits.get(70));
  bits.flip(129);
  bits.flip(0);
  CHECK(bits.ones() == 70);
  CHECK(bits.get(129));
  auto rng = Xoshiro256::for_trial(1, 0);
  bits.fill_uniform(rng);
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < 130; ++i) count += bits.get(i) ? 1 : 0;
  CHECK(count == bits.ones());
}

TEST_CASE("symmetric fitness") {
  CHECK(symmetric_fitness({4, 1}, parse_bits("0001")) == 1);
  CHECK(symmetric_fitness({4, 1}, parse_bits("1110")) == 1);
  CHECK(symmetric_fitness({4, 1}, parse_bits("1100")) == 0);
  CHECK(symmetric_fitness({4, 0}, parse_bits("0000")) == 1);
  CHECK(variant_fitness({4, 1}, Variant::kStandard, 1) == 0);
  CHECK(variant_fitness({4, 1}, Variant::kSymmetric, 1) == 1);
}

TEST_CASE("variant names") {
  CHECK(parse_variant("standard") == Variant::kStandard);
  CHECK(parse_variant(variant_name(Variant::kSymmetric)) == Variant::kSymmetric);
  CHECK_FALSE(parse_variant("both").has_value());
}

TEST_CASE("trivial runs") {
  auto c = config_for(1, 0);
  c.fixed_ones = 0;
  CHECK(rls_run(c, 0).iterations == 1);
  c.fixed_ones = 1;
  CHECK(rls_run(c, 0).iterations == 0);
  CHECK(rls_run(config_for(4, 4), 0).iterations == 0);
  auto bad = config_for(4, 1);
  bad.fixed_ones = 5;
  CHECK_THROWS_AS(rls_run(bad, 0), std::invalid_argument);
}

TEST_CASE("capped runs are censored") {
  auto c = config_for(30, 0);
  c.fixed_ones = 0;
  c.trial_cap = 10;
  const auto r = rls_run(c, 0);
  CHECK(r.censored);
  CHECK(r.iterations == 10);
  const auto batch = monte_carlo(c, 5, 1);
  CHECK(batch.censored == 5);
  CHECK(std::isnan(batch.mean));
}

TEST_CASE("batch summary") {
  auto c = config_for(6, 1, 11);
  const auto one = monte_carlo(c, 1, 1);
  CHECK(one.variance == 0);
  CHECK(one.std_error == 0);
  CHECK(one.min == one.max);

  const std::vector<TrialResult> results{{2, false}, {4, false}, {9, false}, {100, true}};
  const auto s = summarize(c, results);
  CHECK(s.trials == 4);
  CHECK(s.censored == 1);
  CHECK(s.mean == doctest::Approx(5.0));
  CHECK(s.variance == doctest::Approx(13.0));
  CHECK(s.std_error == doctest::Approx(std::sqrt(13.0 / 3.0)));
  CHECK(s.min == 2);
  CHECK(s.max == 9);
  CHECK(s.ci_low == doctest::Approx(5.0 - s.ci_z * s.std_error));
  CHECK(s.ci_high == doctest::Approx(5.0 + s.ci_z * s.std_error));
}

TEST_CASE("property: batches are deterministic and thread-count independent") {
  const auto c = config_for(10, 2, 2024);
  const auto a = monte_carlo(c, 3000, 1);
  const auto b = monte_carlo(c, 3000, 1);
  const auto d = monte_carlo(c, 3000, 4);
  CHECK(batch_to_json(a) == batch_to_json(b));
  CHECK(batch_to_json(a) == batch_to_json(d));
  const auto other = monte_carlo(config_for(10, 2, 2025), 3000, 1);
  CHECK(other.mean != a.mean);
}

TEST_CASE("property: the symmetric variant never needs more iterations") {
  for (std::uint64_t t = 0; t < 500; ++t) {
    auto standard = config_for(12, 2, 77);
    auto symmetric = standard;
    symmetric.variant = Variant::kSymmetric;
    REQUIRE(rls_run(symmetric, t).iterations <= rls_run(standard, t).iterations);
  }
}

TEST_CASE("property: means agree with the exact runtime from uniform and all-zero starts") {
  for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{8, 1}, {10, 2}, {12, 3}}) {
    for (bool fixed : {false, true}) {
      auto c = config_for(n, k, 31337);
      if (fixed) c.fixed_ones = 0;
      const auto batch = monte_carlo(c, 100'000);
      const NeedleInstance inst(n, k);
      const double exact = static_cast<double>(fixed ? expected_runtime_from(inst, 0) : expected_runtime(inst));
      INFO("n=" << n << " k=" << k << " fixed=" << fixed);
      REQUIRE(batch.censored == 0);
      CHECK(std::abs(batch.mean - exact) <= 4 * batch.std_error);
    }
  }
}

TEST_CASE("property: symmetric mean does not exceed the standard mean") {
  for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{8, 1}, {10, 2}, {12, 3}}) {
    auto standard = config_for(n, k, 5);
    auto symmetric = standard;
    symmetric.variant = Variant::kSymmetric;
    CHECK(monte_carlo(symmetric, 20'000).mean <= monte_carlo(standard, 20'000).mean);
  }
}

TEST_CASE("batch JSON round trip") {
  auto c = config_for(8, 1, 5);
  c.variant = Variant::kSymmetric;
  c.fixed_ones = 2;
  const auto batch = monte_carlo(c, 200, 1);
  const auto text = batch_to_json(batch);
  CHECK(batch_to_json(batch_from_json(text)) == text);
  CHECK(text.find("\"rng_name\"") != std::string::npos);
  CHECK_THROWS_AS(batch_from_json("{}"), std::invalid_argument);
}

TEST_CASE("plateau transitions pass the chi-square test for n = 2..8") {
  for (std::int64_t n = 2; n <= 8; ++n) {
    const auto chi = chi_square_against_needle_chain(plateau_transition_counts(n, 100'000, 17));
    INFO("n=" << n);
    CHECK_FALSE(chi.impossible_move);
    CHECK(chi.p_value > 1e-3);
  }
}

TEST_CASE("plateau transitions match the ones-count chain") {
  const auto counts = plateau_transition_counts(8, 200000, 3);
  CHECK(counts.steps == 200000);
  CHECK(counts.by_state[0][0] == 0);
  CHECK(counts.by_state[8][0] + counts.by_state[8][1] == 0);
  const auto chi = chi_square_against_needle_chain(counts);
  CHECK_FALSE(chi.impossible_move);
  CHECK(chi.p_value > 1e-3);

  TransitionCounts rigged = counts;
  rigged.by_state[3][0] += 5000;
  CHECK(chi_square_against_needle_chain(rigged).p_value < 1e-6);
  rigged = counts;
  rigged.by_state[0][0] = 1;
  CHECK(chi_square_against_needle_chain(rigged).impossible_move);
}
