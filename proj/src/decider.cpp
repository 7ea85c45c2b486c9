#include "tmlab/decider.hpp"

#include <algorithm>
#include <cassert>

#include <nlohmann/json.hpp>

namespace tmlab {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::HaltsBeforeRepeat: return "HaltsBeforeRepeat";
    case Verdict::FallsOffBeforeRepeat: return "FallsOffBeforeRepeat";
    case Verdict::RepeatsState: return "RepeatsState";
  }
  return "?";
}

std::string_view to_string(HaltingOnB answer) {
  switch (answer) {
    case HaltingOnB::Halts: return "Halts";
    case HaltingOnB::DoesNotHalt: return "DoesNotHalt";
    case HaltingOnB::NotInB: return "NotInB";
  }
  return "?";
}

std::string_view to_string(HaltingKind kind) {
  switch (kind) {
    case HaltingKind::Halts: return "Halts";
    case HaltingKind::NonHalting: return "NonHalting";
    case HaltingKind::Unknown: return "Unknown";
  }
  return "?";
}

std::string_view to_string(NonHaltingReason reason) {
  switch (reason) {
    case NonHaltingReason::None: return "None";
    case NonHaltingReason::NoHaltTransition: return "NoHaltTransition";
    case NonHaltingReason::ConfigurationCycle: return "ConfigurationCycle";
    case NonHaltingReason::FellOff: return "FellOff";
  }
  return "?";
}

Classification classify(const Program& program, Symbol fill) {
  if (fill >= program.alphabet()) throw DomainError("fill symbol outside the alphabet");
  const auto model = MachineModel::one_way(program.alphabet());
  auto config = Configuration::initial(program, Tape(fill));
  for (;;) {
    const auto result = step(config, program, model);
    // n+1 achievements among n states cannot all be distinct.
    assert(config.steps <= program.states());
    Classification c;
    c.step = config.steps;
    c.visited_cells = config.visited_cells();
    switch (result) {
      case StepResult::Halted:
        c.verdict = Verdict::HaltsBeforeRepeat;
        return c;
      case StepResult::FellOff:
        c.verdict = Verdict::FallsOffBeforeRepeat;
        return c;
      case StepResult::Continue:
        if (config.state_visits[config.state] > 1) {
          c.verdict = Verdict::RepeatsState;
          c.repeated_state = config.state;
          return c;
        }
        break;
    }
  }
}

bool in_b(const Program& program) { return classify(program, 0).in_b(); }

HaltingOnB decide_halting_on_b(const Program& program) {
  switch (classify(program, 0).verdict) {
    case Verdict::HaltsBeforeRepeat: return HaltingOnB::Halts;
    case Verdict::FallsOffBeforeRepeat: return HaltingOnB::DoesNotHalt;
    case Verdict::RepeatsState: return HaltingOnB::NotInB;
  }
  return HaltingOnB::NotInB;
}

bool has_halt_transition(const Program& program) {
  const auto entries = program.entries();
  return std::any_of(entries.begin(), entries.end(), [](const Transition& t) { return t.halts(); });
}

bool no_repeat_within(const Program& program, Symbol fill, const MachineModel& model, std::uint64_t k,
                      bool forbid_halt) {
  auto config = Configuration::initial(program, Tape(fill));
  while (config.steps < k) {
    switch (step(config, program, model)) {
      case StepResult::Halted: return !forbid_halt;
      case StepResult::FellOff: return true;
      case StepResult::Continue:
        if (config.state_visits[config.state] > 1) return false;
        break;
    }
  }
  return true;
}

namespace {

struct Snapshot {
  State state;
  std::int64_t head;
  std::uint64_t steps;
  Tape::Normalized tape;
};

Snapshot snapshot(const Configuration& c) { return {c.state, c.head, c.steps, c.tape.normalized()}; }

bool same_configuration(const Snapshot& s, const Configuration& c) {
  return s.state == c.state && s.head == c.head && s.tape == c.tape.normalized();
}

}  // namespace

HaltingVerdict conservative_halting(const Program& program, const MachineModel& model,
                                    std::uint64_t budget) {
  HaltingVerdict v;
  v.budget = budget;
  if (!has_halt_transition(program)) {
    v.kind = HaltingKind::NonHalting;
    v.reason = NonHaltingReason::NoHaltTransition;
    return v;
  }

  auto config = Configuration::initial(program, Tape(0));
  Snapshot tortoise = snapshot(config);
  std::uint64_t power = 1;
  std::uint64_t lambda = 0;
  while (config.steps < budget) {
    const auto result = step(config, program, model);
    if (result == StepResult::Halted) {
      v.kind = HaltingKind::Halts;
      v.step = config.steps;
      return v;
    }
    if (result == StepResult::FellOff) {
      v.kind = HaltingKind::NonHalting;
      v.reason = NonHaltingReason::FellOff;
      v.step = config.steps;
      return v;
    }
    ++lambda;
    if (same_configuration(tortoise, config)) {
      v.kind = HaltingKind::NonHalting;
      v.reason = NonHaltingReason::ConfigurationCycle;
      v.cycle_start = tortoise.steps;
      v.period = lambda;
      return v;
    }
    if (lambda == power) {
      tortoise = snapshot(config);
      power *= 2;
      lambda = 0;
    }
  }
  return v;
}

bool replay_cycle(const Program& program, const MachineModel& model, std::uint64_t cycle_start,
                  std::uint64_t period) {
  if (period == 0) return false;
  auto config = Configuration::initial(program, Tape(0));
  while (config.steps < cycle_start) {
    if (step(config, program, model) != StepResult::Continue) return false;
  }
  const Snapshot start = snapshot(config);
  while (config.steps < cycle_start + period) {
    if (step(config, program, model) != StepResult::Continue) return false;
  }
  return same_configuration(start, config);
}

std::optional<std::uint64_t> finite_domain_witness(const Program& program) {
  if (program.alphabet() != 2) throw DomainError("finite_domain_witness requires a binary alphabet");
  const auto c = classify(program, 1);
  if (c.verdict != Verdict::FallsOffBeforeRepeat) return std::nullopt;
  return c.visited_cells;
}

namespace {

struct TraceEntry {
  State state;
  std::int64_t head;
  Symbol read;
  bool operator==(const TraceEntry&) const = default;
};

// Trace of up to max_steps steps; returns the final step result alongside.
std::pair<std::vector<TraceEntry>, StepResult> trace(const Program& program, Tape tape,
                                                     std::uint64_t max_steps) {
  const auto model = MachineModel::one_way(program.alphabet());
  auto config = Configuration::initial(program, std::move(tape));
  std::vector<TraceEntry> out;
  StepResult last = StepResult::Continue;
  while (config.steps < max_steps && last == StepResult::Continue) {
    out.push_back({config.state, config.head, config.tape.read(config.head)});
    last = step(config, program, model);
  }
  return {std::move(out), last};
}

}  // namespace

bool check_trace_stability(const Program& program, std::uint64_t witness, std::uint32_t suffix_trials,
                           Xoshiro256ss& rng) {
  if (program.alphabet() != 2) throw DomainError("check_trace_stability requires a binary alphabet");
  // Classification never exceeds n steps, so n bounds the reference run.
  const std::uint64_t horizon = program.states();
  const auto [reference, ref_end] = trace(program, Tape(1), horizon);
  if (ref_end != StepResult::FellOff) return false;

  // Within the horizon the head never passes cell horizon - 1.
  const std::size_t span = std::max<std::uint64_t>(witness, horizon + 1);
  for (std::uint32_t trial = 0; trial < suffix_trials; ++trial) {
    std::vector<Symbol> cells(span, 0);
    std::fill_n(cells.begin(), witness, Symbol{1});
    Symbol fill = 0;
    if (trial > 0) {
      for (std::size_t i = witness; i < span; ++i) cells[i] = static_cast<Symbol>(rng() & 1);
      fill = static_cast<Symbol>(rng() & 1);
    }
    const auto [observed, end] = trace(program, Tape(fill, std::move(cells)), horizon);
    if (end != ref_end || observed != reference) return false;
  }
  return true;
}

std::string to_json(const Classification& c) {
  nlohmann::json j = {{"verdict", to_string(c.verdict)}, {"step", c.step}, {"visited_cells", c.visited_cells}};
  if (c.verdict == Verdict::RepeatsState) j["repeated_state"] = c.repeated_state;
  return j.dump();
}

std::string to_json(const HaltingVerdict& v) {
  nlohmann::json j = {{"kind", to_string(v.kind)}};
  switch (v.kind) {
    case HaltingKind::Halts:
      j["step"] = v.step;
      break;
    case HaltingKind::NonHalting:
      j["reason"] = to_string(v.reason);
      if (v.reason == NonHaltingReason::FellOff) j["step"] = v.step;
      if (v.reason == NonHaltingReason::ConfigurationCycle) {
        j["cycle_start"] = v.cycle_start;
        j["period"] = v.period;
      }
      break;
    case HaltingKind::Unknown:
      j["budget"] = v.budget;
      break;
  }
  return j.dump();
}

}  // namespace tmlab
