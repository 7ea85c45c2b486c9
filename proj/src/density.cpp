#include "tmlab/density.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "tmlab/decider.hpp"
#include "tmlab/sampler.hpp"

namespace tmlab {

namespace {

struct EventName {
  EventKind kind;
  std::string_view name;
};

constexpr EventName kEventNames[] = {
    {EventKind::InB, "in-b"},
    {EventKind::HaltsBeforeRepeat, "halts-before-repeat"},
    {EventKind::FallsOffBeforeRepeat, "falls-off-before-repeat"},
    {EventKind::RepeatsState, "repeats-state"},
    {EventKind::NoHaltTransition, "no-halt-transition"},
    {EventKind::NoRepeatWithin, "no-repeat-within"},
    {EventKind::NoRepeatNoHaltWithin, "no-repeat-no-halt-within"},
    {EventKind::HaltsWithinBudget, "halts-within-budget"},
    {EventKind::InBUnary, "in-b-unary"},
};

bool needs_bound(EventKind kind) {
  return kind == EventKind::NoRepeatWithin || kind == EventKind::NoRepeatNoHaltWithin;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

bool Event::requires_fall_off() const {
  switch (kind) {
    case EventKind::InB:
    case EventKind::HaltsBeforeRepeat:
    case EventKind::FallsOffBeforeRepeat:
    case EventKind::RepeatsState:
    case EventKind::InBUnary:
      return true;
    default:
      return false;
  }
}

std::string Event::name() const {
  std::string out;
  for (const auto& e : kEventNames) {
    if (e.kind == kind) out = e.name;
  }
  if (bound) out += ':' + std::to_string(*bound);
  return out;
}

Event parse_event(std::string_view name) {
  std::optional<std::uint64_t> bound;
  if (const auto colon = name.find(':'); colon != std::string_view::npos) {
    const auto digits = name.substr(colon + 1);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc{} || p != digits.data() + digits.size()) {
      throw DomainError("invalid bound in event '" + std::string(name) + "'");
    }
    bound = v;
    name = name.substr(0, colon);
  }
  if (name == "falls-off") name = "falls-off-before-repeat";
  for (const auto& e : kEventNames) {
    if (e.name != name) continue;
    if (needs_bound(e.kind) && !bound) {
      throw DomainError("event '" + std::string(name) + "' needs a step bound, e.g. " + std::string(name) + ":5");
    }
    if (bound && !needs_bound(e.kind) && e.kind != EventKind::HaltsWithinBudget) {
      throw DomainError("event '" + std::string(name) + "' takes no bound");
    }
    return Event{e.kind, bound};
  }
  throw DomainError("unknown event '" + std::string(name) + "'");
}

void require_compatible(const Event& event, const MachineModel& model) {
  if (event.requires_fall_off() && model.geometry != TapeGeometry::OneWayFallOff) {
    throw IncompatibleModel("event '" + event.name() + "' presupposes falling off a one-way tape; model is " +
                            std::string(to_string(model.geometry)));
  }
}

bool evaluate_event(const Event& event, const Program& program, const MachineModel& model) {
  switch (event.kind) {
    case EventKind::InB:
      return classify(program, 0).in_b();
    case EventKind::HaltsBeforeRepeat:
      return classify(program, 0).verdict == Verdict::HaltsBeforeRepeat;
    case EventKind::FallsOffBeforeRepeat:
      return classify(program, 0).verdict == Verdict::FallsOffBeforeRepeat;
    case EventKind::RepeatsState:
      return classify(program, 0).verdict == Verdict::RepeatsState;
    case EventKind::NoHaltTransition:
      return !has_halt_transition(program);
    case EventKind::NoRepeatWithin:
      return no_repeat_within(program, 0, model, event.bound.value_or(0), false);
    case EventKind::NoRepeatNoHaltWithin:
      return no_repeat_within(program, 0, model, event.bound.value_or(0), true);
    case EventKind::HaltsWithinBudget: {
      const auto budget = event.bound.value_or(10 * std::uint64_t{program.states()});
      return run(program, Symbol{0}, model, budget).outcome == Outcome::Halted;
    }
    case EventKind::InBUnary:
      return classify(program, 1).verdict == Verdict::FallsOffBeforeRepeat;
  }
  return false;
}

DensityEstimate estimate_density(const Event& event, std::uint32_t n, const MachineModel& model,
                                 std::uint64_t trials, std::uint64_t master_seed, unsigned workers) {
  require_compatible(event, model);
  if (n == 0) throw DomainError("estimate_density: n must be at least 1");
  if (trials == 0) throw DomainError("estimate_density: trials must be at least 1");
  const int a = model.alphabet_size;
  const auto hits = parallel_count(trials, workers, [&](std::uint64_t i) {
    auto rng = trial_stream(master_seed, i);
    return evaluate_event(event, sample_program(n, a, rng), model);
  });
  return {n, a, model.geometry, event, ProportionEstimate::from_counts(hits, trials, master_seed)};
}

ExactDensity exact_density(const Event& event, std::uint32_t n, int a, std::uint64_t guard) {
  const auto model = MachineModel::one_way(a);
  std::uint64_t hits = 0;
  enumerate_programs(
      n, a, [&](const Program& p) { hits += evaluate_event(event, p, model) ? 1 : 0; }, guard);
  return {BigInt(hits), count_programs(n, a)};
}

ExactFraction nohalt_exact_fraction(std::uint32_t n) {
  if (n == 0) throw DomainError("nohalt_exact_fraction: n must be at least 1");
  const auto e = static_cast<unsigned>(2 * std::uint64_t{n});
  ExactFraction out;
  out.exact = Rational(boost::multiprecision::pow(BigInt(n), e), boost::multiprecision::pow(BigInt(n) + 1, e));
  // Direct conversion overflows for large n; evaluate the power in log space.
  out.value = std::exp(2.0 * n * std::log1p(-1.0 / (static_cast<double>(n) + 1.0)));
  return out;
}

void ExperimentSpec::validate() const {
  if (n_grid.empty()) throw DomainError("experiment needs at least one state count");
  if (trials == 0) throw DomainError("experiment needs at least one trial");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0) throw DomainError("state counts must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw DomainError("state counts must be strictly increasing");
  }
  require_compatible(event, model);
}

std::vector<DensityEstimate> convergence_table(const ExperimentSpec& spec, unsigned workers) {
  spec.validate();
  std::vector<DensityEstimate> rows;
  rows.reserve(spec.n_grid.size());
  for (std::size_t i = 0; i < spec.n_grid.size(); ++i) {
    rows.push_back(estimate_density(spec.event, spec.n_grid[i], spec.model, spec.trials,
                                    derive_trial_seed(spec.master_seed, i), workers));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Reports

std::string density_csv(const std::vector<DensityEstimate>& rows) {
  std::string out = "event,model,a,n,trials,hits,p_hat,ci_lo,ci_hi,master_seed\n";
  for (const auto& r : rows) {
    out += r.event.name() + ',' + std::string(to_string(r.model)) + ',' + std::to_string(r.a) + ',' +
           std::to_string(r.n) + ',' + std::to_string(r.estimate.trials) + ',' + std::to_string(r.estimate.hits) +
           ',' + format_double(r.estimate.p_hat) + ',' + format_double(r.estimate.ci_lo) + ',' +
           format_double(r.estimate.ci_hi) + ',' + std::to_string(r.estimate.master_seed) + '\n';
  }
  return out;
}

std::string density_json(const std::vector<DensityEstimate>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"event", r.event.name()},
                   {"model", to_string(r.model)},
                   {"a", r.a},
                   {"n", r.n},
                   {"trials", r.estimate.trials},
                   {"hits", r.estimate.hits},
                   {"p_hat", r.estimate.p_hat},
                   {"ci_lo", r.estimate.ci_lo},
                   {"ci_hi", r.estimate.ci_hi},
                   {"master_seed", r.estimate.master_seed}});
  }
  return arr.dump();
}

// ---------------------------------------------------------------------------
// Integer sets

Rational prefix_density(const std::function<bool(std::uint64_t)>& member, std::uint64_t n) {
  if (n == 0) throw DomainError("prefix_density: N must be at least 1");
  std::uint64_t count = 0;
  for (std::uint64_t x = 1; x <= n; ++x) count += member(x) ? 1 : 0;
  return Rational(BigInt(count), BigInt(n));
}

std::vector<std::uint64_t> stretch_set(const std::vector<std::uint64_t>& members) {
  std::vector<std::uint64_t> out;
  out.reserve(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (members[k] == 0 || (k > 0 && members[k] <= members[k - 1])) {
      throw DomainError("stretch_set: input must be positive and strictly increasing");
    }
    out.push_back(members[k] * (k + 1));
  }
  return out;
}

std::function<bool(std::uint64_t)> membership(const std::vector<std::uint64_t>& sorted) {
  return [&sorted](std::uint64_t x) { return std::binary_search(sorted.begin(), sorted.end(), x); };
}

BigInt oscillating_marker(unsigned j) {
  if (j > 24) throw DomainError("oscillating_marker: index too large");
  return BigInt(1) << (1u << j);
}

bool oscillating_set_membership(std::uint64_t x) {
  if (x == 0) throw DomainError("oscillating_set_membership: x must be positive");
  // Blocks [1, 4), [16, 256), [2^16, 2^32); the next starts at 2^64.
  return x < 4 || (x >= 16 && x < 256) || (x >= 65536 && x < (std::uint64_t{1} << 32));
}

BigInt oscillating_set_count(const BigInt& n) {
  if (n < 1) return 0;
  BigInt count = 0;
  auto add_block = [&](const BigInt& lo, const BigInt& hi) {  // [lo, hi)
    if (n < lo) return;
    const BigInt top = n < hi - 1 ? n : BigInt(hi - 1);
    count += top - lo + 1;
  };
  add_block(1, 2);
  for (unsigned i = 0;; ++i) {
    const BigInt lo = oscillating_marker(2 * i);
    if (lo > n) break;
    add_block(lo, oscillating_marker(2 * i + 1));
  }
  return count;
}

Rational oscillating_prefix_density(const BigInt& n) {
  if (n < 1) throw DomainError("oscillating_prefix_density: N must be at least 1");
  return Rational(oscillating_set_count(n), n);
}

}  // namespace tmlab
