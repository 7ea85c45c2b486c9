#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>
#include <unordered_set>

#include "tmlab/sampler.hpp"

using namespace tmlab;

// Reference values below come from an independent Python implementation of
// splitmix64 and xoshiro256**.

TEST_CASE("splitmix64 reference outputs") {
  SplitMix64 sm(0);
  CHECK(sm.next() == 0xE220A8397B1DCDAFULL);
  CHECK(sm.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(sm.next() == 0x06C45D188009454FULL);
  CHECK(derive_trial_seed(0, 0) == 0xE220A8397B1DCDAFULL);
  CHECK(derive_trial_seed(0, 2) == 0x06C45D188009454FULL);
  CHECK(derive_trial_seed(7, 4) == 0x73D33B666A1E21DAULL);
}

TEST_CASE("xoshiro256** reference outputs") {
  Xoshiro256ss rng(0);
  CHECK(rng() == 0x99EC5F36CB75F2B4ULL);
  CHECK(rng() == 0xBF6E1F784956452AULL);
  CHECK(rng() == 0x1A5F849D4933E6E0ULL);
}

TEST_CASE("derive_trial_seed: no collisions over 10^6 consecutive indices") {
  std::vector<std::uint64_t> seeds(1'000'000);
  for (std::uint64_t i = 0; i < seeds.size(); ++i) seeds[i] = derive_trial_seed(42, i);
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("uniform_below stays in range and reaches every value") {
  Xoshiro256ss rng(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = uniform_below(rng, 24);
    REQUIRE(v < 24);
    seen.insert(v);
  }
  CHECK(seen.size() == 24);
  CHECK(uniform_below(rng, 1) == 0);
}

TEST_CASE("transition digits round-trip in the documented order") {
  // (target q1..qn then H) x (write 0..a-1) x (move L then R)
  CHECK(transition_from_digit(0, 2, 2) == Transition{1, 0, Move::Left});
  CHECK(transition_from_digit(1, 2, 2) == Transition{1, 0, Move::Right});
  CHECK(transition_from_digit(2, 2, 2) == Transition{1, 1, Move::Left});
  CHECK(transition_from_digit(4, 2, 2) == Transition{2, 0, Move::Left});
  CHECK(transition_from_digit(11, 2, 2) == Transition{kHalt, 1, Move::Right});
  for (int a = 2; a <= 4; ++a) {
    for (std::uint32_t n = 1; n <= 5; ++n) {
      for (std::uint64_t d = 0; d < transition_radix(n, a); ++d) {
        REQUIRE(transition_digit(transition_from_digit(d, n, a), n, a) == d);
      }
    }
  }
}

TEST_CASE("sample_program determinism") {
  auto r1 = trial_stream(99, 7);
  auto r2 = trial_stream(99, 7);
  CHECK(sample_program(3, 2, r1) == sample_program(3, 2, r2));

  // Same per-trial programs whatever thread produced them.
  std::vector<BigInt> sequential(64), threaded(64);
  for (std::uint64_t i = 0; i < 64; ++i) {
    auto rng = trial_stream(99, i);
    sequential[i] = program_index(sample_program(5, 2, rng));
  }
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < 4; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t i = 63 - w;; i -= 4) {  // reverse order per worker
          auto rng = trial_stream(99, i);
          threaded[i] = program_index(sample_program(5, 2, rng));
          if (i < 4) break;
        }
      });
    }
  }
  CHECK(sequential == threaded);
}

TEST_CASE("sampled programs are valid and inside the enumeration domain") {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto rng = trial_stream(3, i);
    const auto p = sample_program(3, 2, rng);
    const auto index = program_index(p);
    REQUIRE(index >= 0);
    REQUIRE(index < count_programs(3, 2));
    REQUIRE(program_at_index(3, 2, index) == p);
    REQUIRE(parse_program(serialize(p)) == p);
  }
}

TEST_CASE("n=1 sampling is uniform: chi-square over 64 programs") {
  constexpr int kSamples = 64'000;
  std::array<int, 64> counts{};
  for (std::uint64_t i = 0; i < kSamples; ++i) {
    auto rng = trial_stream(2024, i);
    counts[static_cast<std::size_t>(program_index(sample_program(1, 2, rng)))]++;
  }
  const double expected = kSamples / 64.0;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 0.999 quantile of chi-square with 63 degrees of freedom
  CHECK(chi2 < 103.442);
}

TEST_CASE("n=1 sampling frequencies within 5 sigma over 10^6 samples") {
  constexpr int kSamples = 1'000'000;
  std::array<int, 64> counts{};
  for (std::uint64_t i = 0; i < kSamples; ++i) {
    auto rng = trial_stream(77, i);
    counts[static_cast<std::size_t>(program_index(sample_program(1, 2, rng)))]++;
  }
  const double p = 1.0 / 64;
  const double sigma = std::sqrt(kSamples * p * (1 - p));
  for (int c : counts) CHECK(std::abs(c - kSamples * p) < 5 * sigma);
}

TEST_CASE("enumerate_programs") {
  std::size_t count = 0;
  enumerate_programs(1, 2, [&](const Program&) { ++count; });
  CHECK(count == 64);

  // n = 2: every program exactly once, in index order
  std::unordered_set<std::string> seen;
  BigInt expected_index = 0;
  bool ordered = true;
  enumerate_programs(2, 2, [&](const Program& p) {
    seen.insert(serialize(p));
    ordered = ordered && program_index(p) == expected_index;
    ++expected_index;
  });
  CHECK(seen.size() == 20736);
  CHECK(expected_index == 20736);
  CHECK(ordered);

  try {
    enumerate_programs(4, 2, [](const Program&) {});
    FAIL("expected TooManyPrograms");
  } catch (const TooManyPrograms& e) {
    CHECK(e.count() == BigInt("25600000000"));
  }
  CHECK_THROWS_AS(enumerate_programs(2, 2, [](const Program&) {}, 1000), TooManyPrograms);
}

TEST_CASE("parse_seed") {
  CHECK(parse_seed("7") == 7);
  CHECK(parse_seed("0x10") == 16);
  CHECK(parse_seed("0XfF") == 255);
  CHECK(parse_seed("18446744073709551615") == std::numeric_limits<std::uint64_t>::max());
  CHECK_THROWS_AS(parse_seed("seven"), DomainError);
  CHECK_THROWS_AS(parse_seed(""), DomainError);
  CHECK_THROWS_AS(parse_seed("18446744073709551616"), DomainError);
}
