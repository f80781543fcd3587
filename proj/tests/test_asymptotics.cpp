#include "doctest.h"

#include "needle/asymptotics.hpp"
#include "needle/needle.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace needle;
using Real100 = boost::multiprecision::mpfr_float_100;

namespace {

// 6 r (lambda^r - 1)/(lambda - 1) + n (1 + ln r)/2 with the geometric part
// summed term by term in exact arithmetic, the log in 100-digit floats.
Real100 dk_reference(std::int64_t n, const ExactRational& lambda, std::int64_t r) {
  ExactRational geometric = 0;
  ExactRational power = 1;
  for (std::int64_t j = 0; j < r; ++j) {
    geometric += power;
    power *= lambda;
  }
  const Real100 exact_part(ExactRational(6 * r) * geometric);
  return exact_part + Real100(n) * (1 + log(Real100(r))) / 2;
}

}  // namespace

TEST_CASE("small-k estimate") {
  CHECK(estimate_small_k_exact(20, 0).exact() == 1048576);
  CHECK(estimate_small_k_exact(20, 2).exact() == ExactRational(1048576, 190));
  CHECK(estimate_small_k(20, 2) == Real(ExactRational(1048576, 190)));
  CHECK_THROWS(estimate_small_k_exact(20, 21));
}

TEST_CASE("drift bound: examples") {
  const auto b49 = doerr_krejca_bound(100, 49);
  REQUIRE(b49.params.valid);
  CHECK(b49.params.r == 1);
  CHECK(b49.params.lambda_exact == 3);
  CHECK(b49.value == 56);

  const auto b40 = doerr_krejca_bound(100, 40);
  REQUIRE(b40.params.valid);
  CHECK(b40.params.r == 10);
  CHECK(b40.params.lambda_exact == ExactRational(177, 113));
  const Real100 reference = dk_reference(100, ExactRational(177, 113), 10);
  CHECK(abs(Real100(b40.value) - reference) / reference < Real100("1e-40"));
  CHECK(format_real(b40.value) == "9478.04323106");
}

TEST_CASE("drift bound: invalid inputs carry a reason") {
  CHECK_FALSE(doerr_krejca_bound(101, 40).params.valid);
  CHECK(doerr_krejca_bound(101, 40).params.reason == "odd n");
  CHECK(doerr_krejca_bound(100, 50).params.reason == "r<1");
  CHECK(doerr_krejca_bound(100, 101).params.reason == "k outside [0..n]");
  CHECK(doerr_krejca_bound(2, 0).params.valid);
  // 3rn - 2n - 6r(r-1) is concave in r and equals n at r = 1 and r = n/2
  for (std::int64_t n = 2; n <= 400; n += 2) {
    for (std::int64_t k = 0; k < n / 2; ++k) REQUIRE(doerr_krejca_bound(n, k).params.valid);
  }
}

TEST_CASE("property: drift bound agrees with the reference over a grid") {
  for (std::int64_t n = 2; n <= 120; n += 2) {
    for (std::int64_t k = 0; k < n / 2; ++k) {
      const auto b = doerr_krejca_bound(n, k);
      if (!b.params.valid) continue;
      REQUIRE(b.value > 0);
      REQUIRE(isfinite(b.value));
      const Real100 reference = dk_reference(n, b.params.lambda_exact, b.params.r);
      REQUIRE(abs(Real100(b.value) - reference) / reference < Real100("1e-40"));
    }
  }
}

TEST_CASE("near-half estimate") {
  const auto inside = estimate_near_half(100, 48);
  CHECK(inside.low == 100);
  CHECK(inside.high == 100);
  const auto outside = estimate_near_half(100, 30);
  CHECK(outside.low == estimate_small_k(100, 30));
  CHECK(outside.high == 20 * estimate_small_k(100, 30));
  CHECK_THROWS(estimate_near_half(100, 51));
}

TEST_CASE("regime classification examples") {
  CHECK(classify_regime(1000, 5).regime == Regime::kSublinearK);
  CHECK(classify_regime(100, 30).regime == Regime::kLinearK);
  CHECK(classify_regime(100, 48).regime == Regime::kNearHalfSqrt);
  CHECK(classify_regime(100, 50).regime == Regime::kNearHalfSqrt);
  CHECK(classify_regime(100, 60).regime == Regime::kNearHalfSqrt);
  CHECK(classify_regime(10000, 4950).regime == Regime::kNearHalfSqrt);
  CHECK(classify_regime(10000, 4700).regime == Regime::kNearHalfWide);
  CHECK(classify_regime(100, 72).regime == Regime::kAboveHalfLarge);
  CHECK(classify_regime(100, 65).regime == Regime::kUnclassified);
  CHECK_FALSE(classify_regime(100, 65).estimate.has_value());
  CHECK(classify_regime(100, 72).estimate->low == 0);
  CHECK(classify_regime(100, 72).estimate->high == above_half_bound(100, 72));
  CHECK_THROWS(classify_regime(100, 101));
}

TEST_CASE("regime names round trip") {
  for (Regime r : {Regime::kSublinearK, Regime::kLinearK, Regime::kNearHalfWide, Regime::kNearHalfSqrt,
                   Regime::kAboveHalfLarge, Regime::kUnclassified}) {
    CHECK(parse_regime(regime_name(r)) == r);
  }
  CHECK_FALSE(parse_regime("LINEAR").has_value());
}

TEST_CASE("above-half bound") {
  // n = 16, k = 15: Pr[X <= 1] = 17/65536, E[T(0)] = 1
  CHECK(above_half_bound_exact(16, 15) == ExactRational(17, 65536));
  CHECK(above_half_bound_exact(16, 16) == 0);
  CHECK(expected_runtime({36, 30}) <= above_half_bound_exact(36, 30));
  CHECK_THROWS(above_half_bound_exact(16, 7));
  for (std::int64_t n = 2; n <= 40; ++n) {
    for (std::int64_t k = (n + 1) / 2; k <= n; ++k) {
      REQUIRE(expected_runtime({n, k}) <= above_half_bound_exact(n, k));
    }
  }
}

TEST_CASE("format_real uses a fixed locale-independent rendering") {
  CHECK(format_real(Real(56)) == "56");
  CHECK(format_real(Real(ExactRational(1, 4)), 3) == "0.25");
}
