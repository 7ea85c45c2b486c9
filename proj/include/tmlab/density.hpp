#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tmlab/stats.hpp"
#include "tmlab/tm_core.hpp"

namespace tmlab {

enum class EventKind : std::uint8_t {
  InB,
  HaltsBeforeRepeat,
  FallsOffBeforeRepeat,
  RepeatsState,
  NoHaltTransition,
  NoRepeatWithin,
  NoRepeatNoHaltWithin,
  HaltsWithinBudget,
  InBUnary,
};

// A decidable predicate of a single program. `bound` is k for the
// NoRepeat* events and the step budget T for HaltsWithinBudget, where an
// absent bound means 10n.
struct Event {
  EventKind kind = EventKind::InB;
  std::optional<std::uint64_t> bound;

  static Event in_b() { return {EventKind::InB, std::nullopt}; }
  static Event halts_before_repeat() { return {EventKind::HaltsBeforeRepeat, std::nullopt}; }
  static Event falls_off_before_repeat() { return {EventKind::FallsOffBeforeRepeat, std::nullopt}; }
  static Event repeats_state() { return {EventKind::RepeatsState, std::nullopt}; }
  static Event no_halt_transition() { return {EventKind::NoHaltTransition, std::nullopt}; }
  static Event no_repeat_within(std::uint64_t k) { return {EventKind::NoRepeatWithin, k}; }
  static Event no_repeat_no_halt_within(std::uint64_t k) { return {EventKind::NoRepeatNoHaltWithin, k}; }
  static Event halts_within_budget(std::optional<std::uint64_t> t = std::nullopt) {
    return {EventKind::HaltsWithinBudget, t};
  }
  static Event in_b_unary() { return {EventKind::InBUnary, std::nullopt}; }

  // Events defined through falling off the left edge.
  bool requires_fall_off() const;
  // CLI name, e.g. "in-b", "no-repeat-within:5", "halts-within-budget".
  std::string name() const;

  bool operator==(const Event&) const = default;
};

// Accepts the names produced by Event::name(); "falls-off" is an alias for
// falls-off-before-repeat.
Event parse_event(std::string_view name);

class IncompatibleModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require_compatible(const Event& event, const MachineModel& model);

bool evaluate_event(const Event& event, const Program& program, const MachineModel& model);

struct DensityEstimate {
  std::uint32_t n = 0;
  int a = 2;
  TapeGeometry model = TapeGeometry::OneWayFallOff;
  Event event;
  ProportionEstimate estimate;
};

DensityEstimate estimate_density(const Event& event, std::uint32_t n, const MachineModel& model,
                                 std::uint64_t trials, std::uint64_t master_seed, unsigned workers = 1);

// hits out of total, kept unreduced for reporting.
struct ExactDensity {
  BigInt hits;
  BigInt total;
  Rational value() const { return Rational(hits, total); }
};

ExactDensity exact_density(const Event& event, std::uint32_t n, int a,
                           std::uint64_t guard = 100'000'000);

struct ExactFraction {
  Rational exact;
  double value = 0.0;
};

// Share of binary n-state programs with no halt transition: (n/(n+1))^(2n).
ExactFraction nohalt_exact_fraction(std::uint32_t n);

struct ExperimentSpec {
  Event event;
  MachineModel model;
  std::vector<std::uint32_t> n_grid;
  std::uint64_t trials = 10'000;
  std::uint64_t master_seed = 0;

  void validate() const;
};

// Grid point i uses master seed derive_trial_seed(spec.master_seed, i).
std::vector<DensityEstimate> convergence_table(const ExperimentSpec& spec, unsigned workers = 1);

// --- Reports --------------------------------------------------------------

inline constexpr int kReportSchemaVersion = 1;

std::string density_csv(const std::vector<DensityEstimate>& rows);
std::string density_json(const std::vector<DensityEstimate>& rows);

// --- Subsets of the positive integers ------------------------------------

// |{1..N} ∩ S| / N.
Rational prefix_density(const std::function<bool(std::uint64_t)>& member, std::uint64_t n);

// k-th member (1-based) multiplied by k.
std::vector<std::uint64_t> stretch_set(const std::vector<std::uint64_t>& members);

// Members of a sorted finite set, as a predicate.
std::function<bool(std::uint64_t)> membership(const std::vector<std::uint64_t>& sorted);

// Markers m_j = 2^(2^j) (m_0 = 2). The set is [1, 2) together with the blocks
// [m_{2i}, m_{2i+1}); densities at the markers swing toward 1 and toward 0.
BigInt oscillating_marker(unsigned j);
bool oscillating_set_membership(std::uint64_t x);
// |{1..N} ∩ S| in closed form, for N beyond 64 bits.
BigInt oscillating_set_count(const BigInt& n);
Rational oscillating_prefix_density(const BigInt& n);

}  // namespace tmlab
