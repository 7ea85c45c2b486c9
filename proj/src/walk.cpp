#include "tmlab/walk.hpp"

#include <algorithm>
#include <vector>

#include "tmlab/sampler.hpp"

namespace tmlab {

namespace {

// Exact: counts of surviving paths per position, fall-off mass accumulated
// as a numerator over 2^k.
Rational cdf_by_path_counts(std::uint64_t k) {
  std::vector<BigInt> alive(k + 2, 0);
  std::vector<BigInt> next(k + 2, 0);
  alive[0] = 1;
  BigInt fallen = 0;  // numerator over 2^k
  for (std::uint64_t t = 1; t <= k; ++t) {
    fallen += alive[0] << static_cast<unsigned>(k - t);
    const auto reach = std::min<std::uint64_t>(t, k);
    std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(reach + 1), BigInt(0));
    for (std::uint64_t p = 0; p < reach; ++p) {
      if (alive[p] == 0) continue;
      next[p + 1] += alive[p];
      if (p > 0) next[p - 1] += alive[p];
    }
    std::swap(alive, next);
  }
  return Rational(fallen, BigInt(1) << static_cast<unsigned>(k));
}

double cdf_by_probabilities(std::uint64_t k) {
  std::vector<double> alive(k + 2, 0.0);
  std::vector<double> next(k + 2, 0.0);
  alive[0] = 1.0;
  double fallen = 0.0;
  for (std::uint64_t t = 1; t <= k; ++t) {
    fallen += 0.5 * alive[0];
    // Positions beyond k - t + 1 can no longer reach -1 in time.
    const auto reach = std::min<std::uint64_t>(t, k - t + 2);
    std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(reach + 1), 0.0);
    for (std::uint64_t p = 0; p < reach; ++p) {
      const double half = 0.5 * alive[p];
      next[p + 1] += half;
      if (p > 0) next[p - 1] += half;
    }
    std::swap(alive, next);
  }
  return std::min(fallen, 1.0);
}

}  // namespace

WalkProbability falloff_cdf_exact(std::uint64_t k) {
  WalkProbability out;
  if (k <= kExactWalkHorizon) {
    out.exact = cdf_by_path_counts(k);
    out.value = static_cast<double>(*out.exact);
  } else {
    out.value = cdf_by_probabilities(k);
  }
  return out;
}

BigInt catalan(std::uint64_t m) {
  BigInt c = 1;
  for (std::uint64_t i = 0; i < m; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

Rational first_passage(std::uint64_t m) {
  return Rational(catalan(m), BigInt(1) << static_cast<unsigned>(2 * m + 1));
}

namespace {

bool walk1d_falls(Xoshiro256ss& rng, std::uint64_t steps) {
  std::int64_t pos = 0;
  std::uint64_t bits = 0;
  int left = 0;
  for (std::uint64_t t = 0; t < steps; ++t) {
    if (left == 0) {
      bits = rng();
      left = 64;
    }
    pos += (bits & 1) ? 1 : -1;
    bits >>= 1;
    --left;
    if (pos < 0) return true;
  }
  return false;
}

bool walk2d_falls(Xoshiro256ss& rng, std::uint64_t steps) {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::uint64_t bits = 0;
  int left = 0;
  for (std::uint64_t t = 0; t < steps; ++t) {
    if (left == 0) {
      bits = rng();
      left = 32;
    }
    switch (bits & 3) {
      case 0: ++x; break;
      case 1: --x; break;
      case 2: ++y; break;
      default: --y; break;
    }
    bits >>= 2;
    --left;
    if (x < 0 || y < 0) return true;
  }
  return false;
}

}  // namespace

ProportionEstimate falloff_mc(const WalkSpec& spec, unsigned workers) {
  if (spec.dimension != 1) throw DomainError("falloff_mc expects a one-dimensional walk");
  if (spec.trials == 0) throw DomainError("falloff_mc needs at least one trial");
  const auto hits = parallel_count(spec.trials, workers, [&](std::uint64_t i) {
    auto rng = trial_stream(spec.master_seed, i);
    return walk1d_falls(rng, spec.steps);
  });
  return ProportionEstimate::from_counts(hits, spec.trials, spec.master_seed);
}

ProportionEstimate falloff2d_mc(const WalkSpec& spec, unsigned workers) {
  if (spec.dimension != 2) throw DomainError("falloff2d_mc expects a two-dimensional walk");
  if (spec.trials == 0) throw DomainError("falloff2d_mc needs at least one trial");
  const auto hits = parallel_count(spec.trials, workers, [&](std::uint64_t i) {
    auto rng = trial_stream(spec.master_seed, i);
    return walk2d_falls(rng, spec.steps);
  });
  return ProportionEstimate::from_counts(hits, spec.trials, spec.master_seed);
}

}  // namespace tmlab
