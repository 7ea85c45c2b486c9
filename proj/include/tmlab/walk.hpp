#pragma once

#include <cstdint>
#include <optional>

#include "tmlab/stats.hpp"
#include "tmlab/tm_core.hpp"

namespace tmlab {

// Symmetric random walks started on the leftmost cell of a one-way tape, or
// on the corner (0, 0) of the quarter-plane x >= 0, y >= 0.
struct WalkSpec {
  int dimension = 1;
  std::uint64_t steps = 0;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
};

// Horizons up to this bound are computed exactly; beyond it in double
// precision, with accumulated error below k * 2^-50.
inline constexpr std::uint64_t kExactWalkHorizon = 256;

struct WalkProbability {
  std::optional<Rational> exact;
  double value = 0.0;
};

// P(the 1D walk has stepped from cell 0 to cell -1 within k steps), by
// dynamic programming over (step, position) with -1 absorbing.
WalkProbability falloff_cdf_exact(std::uint64_t k);

BigInt catalan(std::uint64_t m);

// P(first fall-off happens at step 2m + 1) = Catalan(m) / 2^(2m+1).
Rational first_passage(std::uint64_t m);

// Monte Carlo fraction of walks that fall off within spec.steps steps. Trial
// i draws from the stream derived from (master_seed, i).
ProportionEstimate falloff_mc(const WalkSpec& spec, unsigned workers = 1);
ProportionEstimate falloff2d_mc(const WalkSpec& spec, unsigned workers = 1);

}  // namespace tmlab
