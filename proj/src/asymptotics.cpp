#include "needle/asymptotics.hpp"

#include "needle/needle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace needle {

Real to_real(const ExactRational& q) { return Real(q); }
Real to_real(const ExactInteger& z) { return Real(z); }

std::string format_real(const Real& x, int digits) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(digits);
  out << x;
  return out.str();
}

SmallKEstimate estimate_small_k_exact(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("estimate_small_k: need 0 <= k <= n");
  return {pow2(n), binomial(n, k)};
}

Real estimate_small_k(std::int64_t n, std::int64_t k) {
  return to_real(estimate_small_k_exact(n, k).exact());
}

DKBound doerr_krejca_bound(std::int64_t n, std::int64_t k) {
  DKBound out;
  auto& params = out.params;
  if (n < 1 || k < 0 || k > n) {
    params.reason = "k outside [0..n]";
    return out;
  }
  if (n % 2 != 0) {
    params.reason = "odd n";
    return out;
  }
  const std::int64_t r = n / 2 - k;
  params.r = r;
  if (r < 1) {
    params.reason = "r<1";
    return out;
  }
  const std::int64_t denom = 3 * r * n - 2 * n - 6 * r * (r - 1);
  if (denom <= 0) {
    params.reason = "lambda denominator<=0";
    return out;
  }
  const ExactInteger numer = ExactInteger(2 * n) + ExactInteger(12) * r * (r - 1);
  params.lambda_exact = ExactRational(1) + ExactRational(numer, ExactInteger(denom));
  params.lambda = to_real(params.lambda_exact);
  params.valid = true;

  const Real lambda = params.lambda;
  const Real geometric = (pow(lambda, static_cast<long>(r)) - 1) / (lambda - 1);
  out.value = 6 * Real(r) * geometric + Real(n) * (1 + log(Real(r))) / 2;
  return out;
}

namespace {

// (n - 2k)^2 <= 4 c1^2 n, i.e. |n/2 - k| <= c1 sqrt(n), without rounding the square root.
bool within_sqrt_window(std::int64_t n, std::int64_t k, double c1) {
  const double d = static_cast<double>(n - 2 * k);
  return d * d <= 4.0 * c1 * c1 * static_cast<double>(n);
}

}  // namespace

Interval estimate_near_half(std::int64_t n, std::int64_t k, const RegimeThresholds& thresholds) {
  if (n < 1 || k < 0 || 2 * k > n) throw std::invalid_argument("estimate_near_half: need 0 <= k <= n/2");
  if (within_sqrt_window(n, k, thresholds.c1)) {
    return {Real(n), Real(n)};
  }
  const Real base = estimate_small_k(n, k);
  const Real g = Real(n - 2 * k) / 2;
  return {base, g * base};
}

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::kSublinearK: return "SUBLINEAR_K";
    case Regime::kLinearK: return "LINEAR_K";
    case Regime::kNearHalfWide: return "NEAR_HALF_WIDE";
    case Regime::kNearHalfSqrt: return "NEAR_HALF_SQRT";
    case Regime::kAboveHalfLarge: return "ABOVE_HALF_LARGE";
    case Regime::kUnclassified: return "UNCLASSIFIED";
  }
  return "UNCLASSIFIED";
}

std::optional<Regime> parse_regime(std::string_view name) {
  for (Regime r : {Regime::kSublinearK, Regime::kLinearK, Regime::kNearHalfWide, Regime::kNearHalfSqrt,
                   Regime::kAboveHalfLarge, Regime::kUnclassified}) {
    if (regime_name(r) == name) return r;
  }
  return std::nullopt;
}

RegimeEstimate classify_regime(std::int64_t n, std::int64_t k, const RegimeThresholds& thresholds) {
  if (n < 1 || k < 0 || k > n) throw std::invalid_argument("classify_regime: need 0 <= k <= n");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double g = nd / 2.0 - kd;

  RegimeEstimate out;
  if (kd >= nd / 2.0 + std::sqrt(nd * std::log(nd))) {
    out.regime = Regime::kAboveHalfLarge;
    out.estimate = Interval{Real(0), above_half_bound(n, k)};
    out.theorem_tag = "E[T] = o(1) for k >= n/2 + sqrt(n ln n); E[T] <= Pr[X<=n-k] E[T(0)]";
    return out;
  }
  if (within_sqrt_window(n, k, thresholds.c1)) {
    out.regime = Regime::kNearHalfSqrt;
    out.estimate = Interval{Real(n), Real(n)};
    out.theorem_tag = "E[T] = Theta(n) for k = n/2 - O(sqrt n)";
    return out;
  }
  if (g > 0 && g < thresholds.c2 * nd) {
    out.regime = Regime::kNearHalfWide;
    out.estimate = estimate_near_half(n, k, thresholds);
    out.theorem_tag = "Omega(2^n/C(n,k)) <= E[T] <= O(g 2^n/C(n,k)) for n/2 - k = g, sqrt n << g << n";
    return out;
  }
  if (g >= thresholds.c2 * nd) {
    const Real base = estimate_small_k(n, k);
    out.estimate = Interval{base, base};
    if (kd <= std::pow(nd, thresholds.c3) && kd <= thresholds.c2 * nd) {
      out.regime = Regime::kSublinearK;
      out.theorem_tag = "E[T] ~ 2^n/C(n,k) for k = o(n)";
    } else {
      out.regime = Regime::kLinearK;
      out.theorem_tag = "E[T] = Theta(2^n/C(n,k)) for k = (1/2 - eps) n";
    }
    return out;
  }
  out.regime = Regime::kUnclassified;
  out.theorem_tag = "no estimate for n/2 + c1 sqrt(n) < k < n/2 + sqrt(n ln n)";
  return out;
}

ExactRational above_half_bound_exact(std::int64_t n, std::int64_t k) {
  if (n < 1 || k < 0 || k > n || 2 * k < n) throw std::invalid_argument("above_half_bound: need n/2 <= k <= n");
  const NeedleInstance instance(n, k);
  const ExactRational w(binomial_cum(n, n - k), pow2(n));
  return w * expected_runtime_from(instance, 0);
}

Real above_half_bound(std::int64_t n, std::int64_t k) { return to_real(above_half_bound_exact(n, k)); }

}  // namespace needle
