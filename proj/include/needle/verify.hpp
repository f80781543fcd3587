#ifndef NEEDLE_VERIFY_HPP
#define NEEDLE_VERIFY_HPP

// Self-check of the exact formulas against the elimination oracle and the
// structural inequalities they must satisfy. Properties are enumerated in
// ascending (n, k, i) order, so the first counterexample found is the
// lexicographically smallest one.

#include "needle/needle.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace needle {

struct PropertyResult {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::optional<std::string> first_counterexample;
};

struct VerifyReport {
  std::int64_t max_n = 0;
  std::vector<PropertyResult> properties;

  bool passed() const;
  /// Counterexample of the first failing property, if any.
  std::optional<std::string> first_counterexample() const;
};

/// The formulas under test. Swapping one out lets the harness itself be tested.
struct VerifyHooks {
  std::function<ExactRational(const NeedleInstance&, std::int64_t)> runtime_from = expected_runtime_from;
  std::function<ExactRational(std::int64_t, std::int64_t)> up_time = hitting_time_plus_closed;
};

/// Largest n the dense elimination oracle is run for.
inline constexpr std::int64_t kMaxVerifyN = 20;

/// Requires 1 <= max_n <= kMaxVerifyN.
VerifyReport run_verification(std::int64_t max_n, const VerifyHooks& hooks = {});

/// E[T(i)] computed with C(n, <=j) replaced by C(n, <=j-1): a deliberately broken formula.
ExactRational runtime_from_off_by_one(const NeedleInstance& instance, std::int64_t i);

}  // namespace needle

#endif  // NEEDLE_VERIFY_HPP
