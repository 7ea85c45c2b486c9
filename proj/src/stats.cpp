#include "tmlab/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tmlab {

Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // Clamp so the interval always brackets p_hat despite rounding at 0 and 1.
  return {std::clamp(std::min(center - half, p), 0.0, 1.0), std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

ProportionEstimate ProportionEstimate::from_counts(std::uint64_t hits, std::uint64_t trials,
                                                   std::uint64_t master_seed) {
  ProportionEstimate e;
  e.trials = trials;
  e.hits = hits;
  e.p_hat = trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
  const auto ci = wilson_interval(hits, trials);
  e.ci_lo = ci.lo;
  e.ci_hi = ci.hi;
  e.master_seed = master_seed;
  return e;
}

double ProportionEstimate::sigma_at(double p) const {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::uint64_t parallel_count(std::uint64_t trials, unsigned workers,
                             const std::function<bool(std::uint64_t)>& predicate) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(trials, 1)));

  if (workers == 1) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i) hits += predicate(i) ? 1 : 0;
    return hits;
  }

  constexpr std::uint64_t kChunk = 256;
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> total{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      std::uint64_t hits = 0;
      try {
        for (;;) {
          const auto begin = next.fetch_add(kChunk);
          if (begin >= trials) break;
          const auto end = std::min(trials, begin + kChunk);
          for (auto i = begin; i < end; ++i) hits += predicate(i) ? 1 : 0;
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(trials);
      }
      total.fetch_add(hits);
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return total.load();
}

}  // namespace tmlab
