#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>

#include "tmlab/tm_core.hpp"

namespace tmlab {

// Reference splitmix64 (Steele, Lea, Flood). Used for seed derivation only.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256** 1.0 (Blackman, Vigna). The 256-bit state is filled from a
// 64-bit seed with four splitmix64 outputs.
class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256ss(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

// Uniform integer in [0, bound) without modulo bias: draws below the largest
// multiple of bound are kept, the rest are rejected.
inline std::uint64_t uniform_below(Xoshiro256ss& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

// Output number trial_index + 1 of splitmix64 seeded at master_seed, computed
// in O(1) by jumping the additive state.
constexpr std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
  return SplitMix64::mix(master_seed + (trial_index + 1) * SplitMix64::kGamma);
}

inline Xoshiro256ss trial_stream(std::uint64_t master_seed, std::uint64_t trial_index) {
  return Xoshiro256ss(derive_trial_seed(master_seed, trial_index));
}

// Transitions of an n-state, a-symbol program are numbered
//   digit = (target_rank * a + write) * 2 + move
// with target_rank 0..n-1 for q1..qn and n for halt, move 0 = L, 1 = R.
std::uint64_t transition_radix(std::uint32_t n, int a);
Transition transition_from_digit(std::uint64_t digit, std::uint32_t n, int a);
std::uint64_t transition_digit(const Transition& t, std::uint32_t n, int a);

// Every entry drawn independently and uniformly from the 2a(n+1) transitions.
Program sample_program(std::uint32_t n, int a, Xoshiro256ss& rng);

class TooManyPrograms : public std::runtime_error {
 public:
  explicit TooManyPrograms(BigInt count);
  const BigInt& count() const { return count_; }

 private:
  BigInt count_;
};

inline constexpr std::uint64_t kDefaultEnumerationGuard = 100'000'000;

// Mixed-radix position of a program: entry (q1, 0) is the most significant
// digit and (qn, a-1) the least.
BigInt program_index(const Program& program);
Program program_at_index(std::uint32_t n, int a, const BigInt& index);

// Visits every program in P_n once, in increasing index order. Throws
// TooManyPrograms before visiting anything when the count exceeds guard.
void enumerate_programs(std::uint32_t n, int a, const std::function<void(const Program&)>& visit,
                        std::uint64_t guard = kDefaultEnumerationGuard);

// Parses a decimal or 0x-prefixed hexadecimal 64-bit seed.
std::uint64_t parse_seed(std::string_view text);

}  // namespace tmlab
