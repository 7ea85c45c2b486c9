#pragma once

#include <cstdint>
#include <functional>

namespace tmlab {

inline constexpr double kZ95 = 1.959964;
inline constexpr double kZ999 = 3.290527;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double p) const { return lo <= p && p <= hi; }
};

// Wilson score interval for hits successes out of trials.
Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kZ95);

// A Monte Carlo proportion with its interval and seed provenance.
struct ProportionEstimate {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t master_seed = 0;

  static ProportionEstimate from_counts(std::uint64_t hits, std::uint64_t trials, std::uint64_t master_seed);
  // Binomial standard deviation of p_hat under the true proportion p.
  double sigma_at(double p) const;
};

// Number of indices i in [0, trials) with predicate(i) true, evaluated on up
// to workers threads (0 = hardware concurrency). The predicate must depend on
// i only, which makes the count independent of the worker count.
std::uint64_t parallel_count(std::uint64_t trials, unsigned workers,
                             const std::function<bool(std::uint64_t)>& predicate);

}  // namespace tmlab
