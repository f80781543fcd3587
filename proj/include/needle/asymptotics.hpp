#ifndef NEEDLE_ASYMPTOTICS_HPP
#define NEEDLE_ASYMPTOTICS_HPP

// Floating-point evaluation of the asymptotic runtime estimates, the earlier
// drift-based upper bound 6r(lambda^r - 1)/(lambda - 1) + n(1 + ln r)/2, and
// a classifier mapping a concrete (n, k) onto the asymptotic regimes.
//
// Real carries a 166-bit significand (MPFR, 50 decimal digits); lambda^r
// and 2^n overflow doubles long before the inputs here become large.

#include "needle/exact.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace needle {

using Real = boost::multiprecision::mpfr_float_50;

Real to_real(const ExactRational& q);
Real to_real(const ExactInteger& z);

/// Shortest round-trippable-ish scientific rendering with `digits` significant digits.
std::string format_real(const Real& x, int digits = 12);

/// 2^n and C(n, k) kept as integers so downstream ratios can stay exact.
struct SmallKEstimate {
  ExactInteger numerator;    // 2^n
  ExactInteger denominator;  // C(n, k)
  ExactRational exact() const { return ExactRational(numerator, denominator); }
};

SmallKEstimate estimate_small_k_exact(std::int64_t n, std::int64_t k);

/// 2^n / C(n, k).
Real estimate_small_k(std::int64_t n, std::int64_t k);

struct DKBoundParams {
  std::int64_t r = 0;
  Real lambda = 0;
  ExactRational lambda_exact = 0;
  bool valid = false;
  std::string reason;  // empty when valid
};

struct DKBound {
  Real value = 0;  // meaningful only when params.valid
  DKBoundParams params;
};

/// The earlier upper bound; invalid for odd n, r < 1, or a nonpositive lambda denominator.
DKBound doerr_krejca_bound(std::int64_t n, std::int64_t k);

struct Interval {
  Real low = 0;
  Real high = 0;
};

/// Tunable finite cutoffs for the asymptotic regimes.
struct RegimeThresholds {
  double c1 = 1.0;  // |n/2 - k| <= c1 sqrt(n): square-root window around n/2
  double c2 = 0.1;  // n/2 - k >= c2 n: linearly bounded away from n/2
  double c3 = 0.9;  // k <= n^c3: sublinear radius
};

/// For k <= n/2: [n, n] inside the sqrt(n) window, otherwise
/// [2^n/C(n,k), g 2^n/C(n,k)] with g = n/2 - k.
Interval estimate_near_half(std::int64_t n, std::int64_t k, const RegimeThresholds& thresholds = {});

enum class Regime {
  kSublinearK,
  kLinearK,
  kNearHalfWide,
  kNearHalfSqrt,
  kAboveHalfLarge,
  kUnclassified,
};

std::string_view regime_name(Regime regime);
std::optional<Regime> parse_regime(std::string_view name);

struct RegimeEstimate {
  Regime regime = Regime::kUnclassified;
  std::optional<Interval> estimate;  // empty when unclassified
  std::string theorem_tag;
};

RegimeEstimate classify_regime(std::int64_t n, std::int64_t k, const RegimeThresholds& thresholds = {});

/// w E[T(0)] with w = Pr[X <= n-k]: a finite-n upper bound on E[T] for k >= n/2.
ExactRational above_half_bound_exact(std::int64_t n, std::int64_t k);
Real above_half_bound(std::int64_t n, std::int64_t k);

}  // namespace needle

#endif  // NEEDLE_ASYMPTOTICS_HPP
