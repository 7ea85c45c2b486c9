#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "tmlab/sampler.hpp"
#include "tmlab/tm_core.hpp"

namespace tmlab {

enum class Verdict : std::uint8_t { HaltsBeforeRepeat, FallsOffBeforeRepeat, RepeatsState };
std::string_view to_string(Verdict verdict);

// Result of running a program until it halts, falls off, or re-achieves a
// state. The start state counts as achieved before the first step.
struct Classification {
  Verdict verdict = Verdict::RepeatsState;
  std::uint64_t step = 0;            // step at which the verdict was reached; always <= n
  std::uint64_t visited_cells = 0;   // cells read up to and including that step
  State repeated_state = kHalt;      // set for RepeatsState only

  bool in_b() const { return verdict != Verdict::RepeatsState; }
  bool operator==(const Classification&) const = default;
};

// Simulates at most n steps on the one-way fall-off tape filled with fill.
Classification classify(const Program& program, Symbol fill = 0);

bool in_b(const Program& program);

enum class HaltingOnB : std::uint8_t { Halts, DoesNotHalt, NotInB };
std::string_view to_string(HaltingOnB answer);

// Exact on B, NotInB elsewhere.
HaltingOnB decide_halting_on_b(const Program& program);

bool has_halt_transition(const Program& program);

// Shared by the density events: true when, within the first k steps from the
// fill tape, no state is re-achieved (and, with forbid_halt, the halt state is
// not reached). Runs that fall off before either event count as satisfying.
bool no_repeat_within(const Program& program, Symbol fill, const MachineModel& model, std::uint64_t k,
                      bool forbid_halt);

enum class HaltingKind : std::uint8_t { Halts, NonHalting, Unknown };
enum class NonHaltingReason : std::uint8_t { None, NoHaltTransition, ConfigurationCycle, FellOff };

struct HaltingVerdict {
  HaltingKind kind = HaltingKind::Unknown;
  NonHaltingReason reason = NonHaltingReason::None;
  std::uint64_t step = 0;         // Halts / FellOff: the final step
  std::uint64_t cycle_start = 0;  // ConfigurationCycle: config after cycle_start steps ...
  std::uint64_t period = 0;       // ... equals the config after cycle_start + period steps
  std::uint64_t budget = 0;
};

std::string_view to_string(HaltingKind kind);
std::string_view to_string(NonHaltingReason reason);

// Sound on every model: Halts and NonHalting are only issued with a
// certificate. Cycles are found with Brent's algorithm comparing complete
// configurations (state, head, normalized tape) exactly.
HaltingVerdict conservative_halting(const Program& program, const MachineModel& model,
                                    std::uint64_t budget);

// Replays a ConfigurationCycle certificate from scratch on the all-0 tape.
bool replay_cycle(const Program& program, const MachineModel& model, std::uint64_t cycle_start,
                  std::uint64_t period);

// For a = 2: when the program falls off before halting or repeating on the
// all-1 tape, the number of cells it read. Its behaviour is then the same on
// every tape starting with that many 1s, so its domain is finite.
std::optional<std::uint64_t> finite_domain_witness(const Program& program);

// Re-simulates on tapes equal to all-1 on cells 0..v-1 and arbitrary beyond,
// comparing the step-by-step trace (state, head, symbol read) with the all-1
// run. The first trial uses an all-0 suffix; the rest are random.
bool check_trace_stability(const Program& program, std::uint64_t witness, std::uint32_t suffix_trials,
                           Xoshiro256ss& rng);

std::string to_json(const Classification& c);
std::string to_json(const HaltingVerdict& v);

}  // namespace tmlab
