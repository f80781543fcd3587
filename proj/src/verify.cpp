#include "needle/verify.hpp"

#include <sstream>
#include <stdexcept>

namespace needle {

bool VerifyReport::passed() const {
  for (const auto& p : properties) {
    if (p.failures != 0) return false;
  }
  return true;
}

std::optional<std::string> VerifyReport::first_counterexample() const {
  for (const auto& p : properties) {
    if (p.failures != 0) return p.name + ": " + p.first_counterexample.value_or("?");
  }
  return std::nullopt;
}

namespace {

class Recorder {
 public:
  explicit Recorder(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::function<std::string()>& describe) {
    ++result_.checked;
    if (ok) return;
    ++result_.failures;
    if (!result_.first_counterexample) result_.first_counterexample = describe();
  }

  PropertyResult take() { return std::move(result_); }

 private:
  PropertyResult result_;
};

std::string where(std::int64_t n, std::int64_t k, std::int64_t i) {
  std::ostringstream out;
  out << "(n=" << n << ", k=" << k << ", i=" << i << ")";
  return out.str();
}

std::string mismatch(const std::string& at, const ExactRational& got, const ExactRational& want) {
  return at + " got " + to_short_string(got) + ", expected " + to_short_string(want);
}

}  // namespace

VerifyReport run_verification(std::int64_t max_n, const VerifyHooks& hooks) {
  if (max_n < 1 || max_n > kMaxVerifyN) {
    throw std::invalid_argument("verify: max_n must lie in [1.." + std::to_string(kMaxVerifyN) + "]");
  }
  VerifyReport report;
  report.max_n = max_n;

  Recorder oracle("runtime_from == first-step oracle");
  Recorder random_start("expected_runtime == binomial mix of oracle");
  Recorder closed("closed-form E[T_i^+] == sum-product form");
  Recorder recurrence("recurrence E[T_i^+] == sum-product form");
  Recorder increasing("E[T_i^+] strictly increasing");
  Recorder concave("E[T(i)] discretely concave");
  Recorder start_monotone("E[T(i)] nonincreasing in i");
  Recorder sandwich("u E[T(a)] <= E[T] <= w E[T(a)]");
  Recorder cond_mean("E[X | X <= n/2] == n / (4 Pr[X <= n/2])");

  for (std::int64_t n = 1; n <= max_n; ++n) {
    const BirthDeathChain chain = needle_chain(n);
    const BinomialRow row(n);
    const auto table = hitting_times_all(chain);

    for (std::int64_t i = 0; i < n; ++i) {
      const ExactRational reference = hitting_time_up(chain, i);
      const ExactRational got = hooks.up_time(n, i);
      closed.check(got == reference, [&] { return mismatch(where(n, -1, i), got, reference); });
      const ExactRational& fast = table.up_times[static_cast<std::size_t>(i)];
      recurrence.check(fast == reference, [&] { return mismatch(where(n, -1, i), fast, reference); });
      if (i + 1 < n) {
        const ExactRational next = hooks.up_time(n, i + 1);
        increasing.check(got < next, [&] { return where(n, -1, i) + " E[T_i^+] >= E[T_{i+1}^+]"; });
      }
    }

    for (std::int64_t k = 0; k <= n; ++k) {
      const NeedleInstance instance(n, k);
      std::set<std::int64_t> target;
      for (std::int64_t s = n - k; s <= n; ++s) target.insert(s);
      const auto h = hitting_time_oracle_all(chain, target);

      std::vector<ExactRational> values;
      values.reserve(static_cast<std::size_t>(n + 1));
      ExactRational mixed = 0;
      for (std::int64_t i = 0; i <= n; ++i) {
        values.push_back(hooks.runtime_from(instance, i));
        const ExactRational& want = h[static_cast<std::size_t>(i)];
        oracle.check(values.back() == want, [&] { return mismatch(where(n, k, i), values.back(), want); });
        mixed += row.at(i) * want;
      }
      mixed /= pow2(n);
      const ExactRational et = expected_runtime(instance);
      random_start.check(et == mixed, [&] { return mismatch(where(n, k, -1), et, mixed); });

      for (std::int64_t i = 0; i < n; ++i) {
        const auto& a = values[static_cast<std::size_t>(i)];
        const auto& b = values[static_cast<std::size_t>(i + 1)];
        start_monotone.check(b <= a, [&] { return where(n, k, i) + " E[T(i+1)] > E[T(i)]"; });
      }
      for (std::int64_t i = 1; i <= n - k - 1; ++i) {
        const auto& prev = values[static_cast<std::size_t>(i - 1)];
        const auto& mid = values[static_cast<std::size_t>(i)];
        const auto& next = values[static_cast<std::size_t>(i + 1)];
        concave.check(prev + next <= 2 * mid, [&] { return where(n, k, i) + " E[T(i-1)] + E[T(i+1)] > 2 E[T(i)]"; });
      }
      if (2 * k <= n) {
        const auto stats = start_distribution_stats(instance);
        sandwich.check(stats.lower <= et && et <= stats.upper, [&] {
          return where(n, k, stats.a) + " E[T] = " + to_short_string(et) + " outside [" +
                 to_short_string(stats.lower) + ", " + to_short_string(stats.upper) + "]";
        });
      }
    }

    if (n % 2 == 0) {
      const auto c = conditional_mean_identity(n);
      cond_mean.check(c.enumerated_mean == c.identity_mean && c.enumerated_probability == c.closed_probability,
                      [&] { return mismatch(where(n, -1, -1), c.enumerated_mean, c.identity_mean); });
    }
  }

  for (Recorder* r : {&oracle, &random_start, &closed, &recurrence, &increasing, &concave, &start_monotone,
                      &sandwich, &cond_mean}) {
    report.properties.push_back(r->take());
  }
  return report;
}

ExactRational runtime_from_off_by_one(const NeedleInstance& instance, std::int64_t i) {
  ExactRational sum = 0;
  for (std::int64_t j = i; j <= instance.threshold() - 1; ++j) {
    sum += ExactRational(binomial_cum(instance.n, j - 1), binomial(instance.n - 1, j));
  }
  return sum;
}

}  // namespace needle
