#include "doctest.h"

#include "needle/exact.hpp"
#include "oracles.hpp"

#include <random>

using namespace needle;

TEST_CASE("binomial: boundary and out-of-range values") {
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(5, 5) == 1);
  CHECK(binomial(5, 6) == 0);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(0, 0) == 1);
  CHECK_THROWS_AS(binomial(-1, 0), std::invalid_argument);
}

TEST_CASE("binomial: matches Pascal's triangle up to n = 200") {
  const auto pascal = oracle::pascal_triangle(200);
  CHECK(pascal[10][5] == 252);
  CHECK(binomial(10, 5) == 252);
  for (std::int64_t n = 0; n <= 200; ++n) {
    const BinomialRow row(n);
    for (std::int64_t k = 0; k <= n; ++k) {
      const auto& want = pascal[n][k];
      REQUIRE(binomial(n, k) == want);
      REQUIRE(row.at(k) == want);
      REQUIRE(binomial(n, k) == binomial(n, n - k));
    }
  }
}

TEST_CASE("binomial: Pascal identity") {
  for (std::int64_t n = 2; n <= 200; ++n) {
    for (std::int64_t k = 1; k <= n - 1; ++k) {
      REQUIRE(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    }
  }
}

TEST_CASE("binomial_cum") {
  CHECK(binomial_cum(4, 4) == 16);
  CHECK(binomial_cum(4, 9) == 16);
  CHECK(binomial_cum(4, -1) == 0);
  // 1 + 10 + 45 + 120 + 210 from the Pascal oracle
  const auto pascal = oracle::pascal_triangle(10);
  ExactInteger sum = 0;
  for (int m = 0; m <= 4; ++m) sum += pascal[10][m];
  CHECK(sum == 386);
  CHECK(binomial_cum(10, 4) == 386);

  for (std::int64_t n = 0; n <= 200; ++n) {
    REQUIRE(binomial_cum(n, n) == pow2(n));
    const BinomialRow row(n);
    for (std::int64_t j = 0; j <= n; ++j) {
      REQUIRE(binomial_cum(n, j) - binomial_cum(n, j - 1) == binomial(n, j));
      REQUIRE(row.cumulative(j) == binomial_cum(n, j));
    }
  }
}

TEST_CASE("pow2 is exact far beyond 64 bits") {
  CHECK(pow2(0) == 1);
  CHECK(pow2(200).str() == "1606938044258990275541962092341162602522202993782792835301376");
}

TEST_CASE("rationals stay in lowest terms") {
  const ExactRational q(ExactInteger(6), ExactInteger(-4));
  CHECK(numerator(q) == -3);
  CHECK(denominator(q) == 2);
  CHECK(to_fraction_string(q) == "-3/2");
  CHECK(to_fraction_string(ExactRational(5)) == "5/1");
  CHECK(to_short_string(ExactRational(5)) == "5");
  CHECK(ExactRational(2, 4) == ExactRational(1, 2));
  CHECK_THROWS(make_rational(1, 0));
}

TEST_CASE("property: (a/b)(b/a) == 1 for random nonzero rationals") {
  std::mt19937_64 gen(12345);
  std::uniform_int_distribution<std::int64_t> dist(-1'000'000'000'000, 1'000'000'000'000);
  for (int trial = 0; trial < 2000; ++trial) {
    std::int64_t a = dist(gen);
    std::int64_t b = dist(gen);
    if (a == 0 || b == 0) continue;
    const ExactRational q(a, b);
    REQUIRE(q * (ExactRational(1) / q) == 1);
    REQUIRE(parse_rational(to_fraction_string(q)) == q);
  }
}

TEST_CASE("to_decimal rounds half to even") {
  CHECK(to_decimal(ExactRational(5, 2), 0) == "2");
  CHECK(to_decimal(ExactRational(7, 2), 0) == "4");
  CHECK(to_decimal(ExactRational(1, 8), 2) == "0.12");  // 0.125 -> even neighbour
  CHECK(to_decimal(ExactRational(3, 8), 2) == "0.38");  // 0.375 -> even neighbour
  CHECK(to_decimal(ExactRational(1, 3), 4) == "0.3333");
  CHECK(to_decimal(ExactRational(2, 3), 4) == "0.6667");
  CHECK(to_decimal(ExactRational(-5, 2), 1) == "-2.5");
  CHECK(to_decimal(ExactRational(-1, 1000), 2) == "0.00");
  CHECK(to_decimal(ExactRational(9, 8), 12) == "1.125000000000");
  CHECK(to_decimal(ExactRational(1, 200), 2) == "0.00");
  CHECK(to_decimal(ExactRational(3, 200), 2) == "0.02");
}

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("3/4") == ExactRational(3, 4));
  CHECK(parse_rational(" -6/8 ") == ExactRational(-3, 4));
  CHECK(parse_rational("17") == 17);
  CHECK(parse_rational("0.125") == ExactRational(1, 8));
  CHECK(parse_rational("0.09") == ExactRational(9, 100));
  CHECK(parse_rational("010") == 10);
  CHECK(parse_rational("-.5") == ExactRational(-1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/2/3"), std::invalid_argument);
}
