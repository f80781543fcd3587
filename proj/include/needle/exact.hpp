#ifndef NEEDLE_EXACT_HPP
#define NEEDLE_EXACT_HPP

// Exact integer and rational arithmetic plus the binomial coefficients
// every closed form in this library is built from.
//
// ExactInteger / ExactRational are GMP-backed Boost.Multiprecision types.
// mpq_rational canonicalizes on every operation, so values are always in
// lowest terms with a positive denominator and == is value equality.

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace needle {

using ExactInteger = boost::multiprecision::mpz_int;
using ExactRational = boost::multiprecision::mpq_rational;

/// C(n, k); zero outside 0 <= k <= n.
ExactInteger binomial(std::int64_t n, std::int64_t k);

/// C(n, <=j) = sum_{m=0}^{j} C(n, m). Zero for j < 0, 2^n for j >= n.
ExactInteger binomial_cum(std::int64_t n, std::int64_t j);

/// 2^n.
ExactInteger pow2(std::int64_t n);

/// One row of Pascal's triangle with its prefix sums, for sweeps that touch
/// many C(n, k) / C(n, <=k) of the same n.
class BinomialRow {
 public:
  explicit BinomialRow(std::int64_t n);

  std::int64_t n() const { return n_; }
  const ExactInteger& at(std::int64_t k) const;       // C(n, k), k in [0..n]
  ExactInteger coefficient(std::int64_t k) const;      // C(n, k), any k
  ExactInteger cumulative(std::int64_t j) const;       // C(n, <=j), any j

 private:
  std::int64_t n_;
  std::vector<ExactInteger> row_;
  std::vector<ExactInteger> prefix_;
};

ExactRational make_rational(const ExactInteger& num, const ExactInteger& den);

/// Canonical "numerator/denominator"; integers render as "numerator/1".
std::string to_fraction_string(const ExactRational& q);

/// Compact form: integers without the "/1" suffix.
std::string to_short_string(const ExactRational& q);

/// Fixed-point decimal with `digits` fractional digits, rounded half to even.
/// Trailing zeros are kept so output width is reproducible.
std::string to_decimal(const ExactRational& q, int digits);

/// Parses "a/b", "a" or a plain decimal literal such as "0.125" exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
ExactRational parse_rational(std::string_view text);

}  // namespace needle

#endif  // NEEDLE_EXACT_HPP
