// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support/reference_sim.hpp"
#include "tmlab/cli.hpp"
#include "tmlab/decider.hpp"
#include "tmlab/density.hpp"
#include "tmlab/sampler.hpp"
#include "tmlab/stats.hpp"
#include "tmlab/walk.hpp"

using namespace tmlab;
using namespace tmlab::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// AC1: exhaustive n = 1 densities and the partition.
Check ac1() {
  Check c;
  const auto start = Clock::now();
  const std::vector<std::pair<Event, Rational>> expected = {
      {Event::in_b(), Rational(48, 64)},
      {Event::halts_before_repeat(), Rational(16, 64)},
      {Event::falls_off_before_repeat(), Rational(32, 64)},
      {Event::repeats_state(), Rational(16, 64)},
      {Event::no_halt_transition(), Rational(16, 64)},
  };
  for (const auto& [event, value] : expected) {
    const auto d = exact_density(event, 1, 2);
    c.expect(d.total == 64, event.name() + " total");
    c.expect(d.value() == value, event.name() + " = " + d.hits.str() + "/64");
  }
  const Rational partition = exact_density(Event::halts_before_repeat(), 1, 2).value() +
                             exact_density(Event::falls_off_before_repeat(), 1, 2).value() +
                             exact_density(Event::repeats_state(), 1, 2).value();
  c.expect(partition == 1, "partition does not sum to 1");
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 1.0, fmt("took %.2fs", elapsed));
  if (c.ok) c.detail = fmt("5 densities exact, partition = 1, %.3fs", elapsed);
  return c;
}

// AC2: exhaustive n = 2 against 10^5-trial Monte Carlo at 99.9%.
Check ac2() {
  Check c;
  const auto model = MachineModel::one_way();
  double enumeration_time = 0;
  std::string summary;
  for (const auto& event : {Event::in_b(), Event::no_halt_transition(), Event::halts_before_repeat()}) {
    const auto start = Clock::now();
    const auto exact = exact_density(event, 2, 2);
    enumeration_time += seconds_since(start);
    const double p = static_cast<double>(exact.value());
    const auto mc = estimate_density(event, 2, model, 100'000, 2002).estimate;
    const auto ci = wilson_interval(mc.hits, mc.trials, kZ999);
    c.expect(exact.total == 20736, event.name() + " total");
    c.expect(ci.contains(p), event.name() + fmt(": exact %.6f outside [%.6f, %.6f]", p, ci.lo, ci.hi));
    summary += event.name() + fmt(" %.4f~%.4f ", p, mc.p_hat);
  }
  c.expect(enumeration_time < 10.0, fmt("enumeration took %.2fs", enumeration_time));
  if (c.ok) c.detail = summary + fmt("(enumeration %.2fs)", enumeration_time);
  return c;
}

// AC3: halt-free fraction exactly, by Monte Carlo, and in the limit.
Check ac3() {
  Check c;
  const auto model = MachineModel::one_way();
  for (std::uint32_t n : {1u, 2u, 10u, 100u}) {
    const auto f = nohalt_exact_fraction(n);
    BigInt num = 1, den = 1;
    for (std::uint32_t i = 0; i < 2 * n; ++i) {
      num *= n;
      den *= n + 1;
    }
    c.expect(f.exact == Rational(num, den), "exact fraction wrong at n=" + std::to_string(n));
    c.expect(std::abs(f.value - static_cast<double>(f.exact)) < 1e-12, "float fraction at n=" + std::to_string(n));
    if (n <= 2) {
      c.expect(exact_density(Event::no_halt_transition(), n, 2).value() == f.exact,
               "enumeration disagrees at n=" + std::to_string(n));
    }
  }
  std::string summary;
  for (std::uint32_t n : {10u, 100u}) {
    const double p = nohalt_exact_fraction(n).value;
    const auto e = estimate_density(Event::no_halt_transition(), n, model, 100'000, 3000 + n).estimate;
    const double z = std::abs(e.p_hat - p) / e.sigma_at(p);
    c.expect(z <= 3.0, fmt("n=%.0f off by %.2f sigma", n, z));
    summary += fmt("n=%.0f %.2fsigma, ", n, z);
  }
  const double limit = nohalt_exact_fraction(10'000).value;
  c.expect(std::abs(limit - std::exp(-2.0)) < 1e-3, fmt("n=10^4 gives %.6f", limit));
  if (c.ok) c.detail = summary + fmt("n=10^4 %.6f vs e^-2 %.6f", limit, std::exp(-2.0));
  return c;
}

const std::vector<std::uint32_t> kGrid = {10, 100, 1000, 10'000};
constexpr std::uint64_t kGridSeed = 7;

std::vector<DensityEstimate> grid_table(const Event& event) {
  ExperimentSpec spec;
  spec.event = event;
  spec.model = MachineModel::one_way();
  spec.n_grid = kGrid;
  spec.trials = 10'000;
  spec.master_seed = kGridSeed;
  return convergence_table(spec, 0);
}

std::string p_hats(const std::vector<DensityEstimate>& rows) {
  std::string s;
  for (const auto& r : rows) s += fmt("%.4f ", r.estimate.p_hat);
  return s;
}

// AC4: InB density rises toward one.
Check ac4() {
  Check c;
  const auto start = Clock::now();
  const auto rows = grid_table(Event::in_b());
  const double elapsed = seconds_since(start);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    c.expect(rows[i].estimate.p_hat > rows[i - 1].estimate.p_hat, "not increasing at n=" + std::to_string(rows[i].n));
  }
  const auto& first = rows.front().estimate;
  const auto& last = rows.back().estimate;
  c.expect(first.ci_hi < last.ci_lo, "first and last 95% intervals overlap");
  c.expect(last.p_hat > 0.85, fmt("p_hat at n=10^4 is %.4f", last.p_hat));
  c.expect(elapsed < 120.0, fmt("took %.1fs", elapsed));
  if (c.ok) c.detail = "p_hat " + p_hats(rows) + fmt("(%.1fs)", elapsed);
  return c;
}

// AC5: budgeted halting density falls toward zero.
Check ac5() {
  Check c;
  const auto rows = grid_table(Event::halts_within_budget());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    c.expect(rows[i].estimate.p_hat < rows[i - 1].estimate.p_hat, "not decreasing at n=" + std::to_string(rows[i].n));
  }
  c.expect(rows.back().estimate.p_hat < 0.02, fmt("p_hat at n=10^4 is %.4f", rows.back().estimate.p_hat));
  if (c.ok) c.detail = "p_hat " + p_hats(rows);
  return c;
}

// AC6: walk DP, Catalan series and Monte Carlo agree.
Check ac6() {
  Check c;
  Rational series = 0;
  for (std::uint64_t m = 0; 2 * m + 1 <= 201; ++m) {
    series += first_passage(m);
    const auto dp = falloff_cdf_exact(2 * m + 1);
    if (!dp.exact || *dp.exact != series) {
      c.expect(false, "Catalan series differs at k=" + std::to_string(2 * m + 1));
      break;
    }
  }
  std::string summary;
  for (std::uint64_t k : {1u, 3u, 5u, 99u}) {
    const double exact = falloff_cdf_exact(k).value;
    const auto e = falloff_mc({1, k, 1'000'000, 600 + k}, 0);
    const double z = std::abs(e.p_hat - exact) / e.sigma_at(exact);
    c.expect(z <= 4.0, fmt("k=%.0f off by %.2f sigma", static_cast<double>(k), z));
    summary += fmt("k=%.0f %.2fsigma, ", static_cast<double>(k), z);
  }
  const double far = falloff_cdf_exact(10'000).value;
  c.expect(far >= 0.99, fmt("cdf(10^4) = %.6f", far));
  if (c.ok) c.detail = "odd k<=201 exact, " + summary + fmt("cdf(10^4) = %.6f", far);
  return c;
}

// AC7: halting verdicts on B and cycle certificates against independent runs.
Check ac7() {
  Check c;
  std::size_t disagreements = 0, verdicts = 0, cycles = 0, bad_cycles = 0;
  for (std::uint64_t i = 0; i < 10'000; ++i) {
    auto rng = trial_stream(7007, i);
    const auto n = static_cast<std::uint32_t>(1 + uniform_below(rng, 200));
    const auto p = sample_program(n, 2, rng);
    const std::uint64_t budget = 10 * std::uint64_t{n};

    const auto answer = decide_halting_on_b(p);
    if (answer != HaltingOnB::NotInB) {
      ++verdicts;
      const auto ref = reference_run(p, 0, false, budget, false);
      const auto expected = answer == HaltingOnB::Halts ? RefKind::Halt : RefKind::FallOff;
      if (ref.kind != expected || ref.step != classify(p).step) ++disagreements;
    }

    for (const auto& model : {MachineModel::one_way(), MachineModel::two_way()}) {
      const auto v = conservative_halting(p, model, budget);
      const bool two_way = model.geometry == TapeGeometry::TwoWayInfinite;
      if (v.kind == HaltingKind::Halts) {
        const auto ref = reference_run(p, 0, two_way, budget, false);
        if (ref.kind != RefKind::Halt || ref.step != v.step) ++disagreements;
      } else if (v.reason == NonHaltingReason::FellOff) {
        const auto ref = reference_run(p, 0, two_way, budget, false);
        if (ref.kind != RefKind::FallOff || ref.step != v.step) ++disagreements;
      } else if (v.reason == NonHaltingReason::ConfigurationCycle) {
        ++cycles;
        if (!replay_cycle(p, model, v.cycle_start, v.period)) ++bad_cycles;
        if (reference_run(p, 0, two_way, budget, false).kind == RefKind::Halt) ++disagreements;
      }
    }
  }
  c.expect(disagreements == 0, std::to_string(disagreements) + " disagreements");
  c.expect(bad_cycles == 0, std::to_string(bad_cycles) + " cycle certificates failed to replay");
  if (c.ok) {
    c.detail = std::to_string(verdicts) + " verdicts on B, " + std::to_string(cycles) +
               " cycle certificates replayed, 0 disagreements";
  }
  return c;
}

// AC8: every finite-domain witness survives random suffixes.
Check ac8() {
  Check c;
  std::size_t witnessed = 0, passed = 0;
  for (std::uint64_t i = 0; i < 10'000; ++i) {
    auto rng = trial_stream(8008, i);
    const auto p = sample_program(100, 2, rng);
    const auto w = finite_domain_witness(p);
    if (!w) continue;
    ++witnessed;
    if (check_trace_stability(p, *w, 10, rng)) ++passed;
  }
  c.expect(witnessed > 0, "no program admitted a witness");
  c.expect(passed == witnessed, std::to_string(witnessed - passed) + " witnessed programs failed");
  if (c.ok) c.detail = std::to_string(passed) + "/" + std::to_string(witnessed) + " witnessed programs stable (of 10000)";
  return c;
}

std::string cli_output(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  if (run_cli(args, out, err) != kExitOk) return "failed: " + err.str();
  return out.str();
}

// AC9: reports do not depend on the worker count.
Check ac9() {
  Check c;
  const std::vector<std::vector<std::string>> commands = {
      {"density", "--event", "in-b", "--n", "10,100,1000", "--trials", "20000", "--seed", "9"},
      {"density", "--event", "halts-within-budget", "--n", "5,50", "--trials", "20000", "--seed", "9",
       "--format", "json"},
      {"walk", "--k", "1,3,99", "--trials", "200000", "--seed", "9"},
      {"walk", "--dim", "2", "--k", "10,100", "--trials", "50000", "--seed", "9", "--format", "json"},
  };
  for (const auto& base : commands) {
    std::string previous;
    for (const char* workers : {"1", "2", "4", "7"}) {
      auto args = base;
      args.insert(args.end(), {"--workers", workers});
      const auto report = cli_output(args);
      c.expect(report.rfind("failed", 0) != 0, base[0] + " " + report);
      if (!previous.empty()) c.expect(report == previous, base[0] + " differs at --workers " + workers);
      previous = report;
    }
  }
  if (c.ok) c.detail = "4 reports byte-identical across 1, 2, 4 and 7 workers";
  return c;
}

// AC10: sparse and oscillating integer sets.
Check ac10() {
  Check c;
  std::vector<std::uint64_t> identity(1000);
  for (std::uint64_t k = 0; k < identity.size(); ++k) identity[k] = k + 1;
  const auto squares = stretch_set(identity);
  for (std::uint64_t k = 1; k <= squares.size(); ++k) c.expect(squares[k - 1] == k * k, "not the squares");
  const auto d = prefix_density(membership(squares), 1'000'000);
  c.expect(d <= Rational(1, 1000), "square density " + d.str());

  std::string summary;
  for (unsigned i = 2; i <= 4; ++i) {
    const auto high = oscillating_prefix_density(oscillating_marker(2 * i + 1));
    const auto low = oscillating_prefix_density(oscillating_marker(2 * i + 2));
    c.expect(high > Rational(99, 100), "block " + std::to_string(i) + " density too low");
    c.expect(low < Rational(1, 100), "gap " + std::to_string(i) + " density too high");
    summary += fmt(" %.4g/%.4g", static_cast<double>(high), static_cast<double>(low));
  }
  if (c.ok) c.detail = "squares " + d.str() + " at 10^6; marker densities" + summary;
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"AC1 exact enumeration n=1", ac1},
      {"AC2 exact vs Monte Carlo n=2", ac2},
      {"AC3 halt-free fraction", ac3},
      {"AC4 InB convergence toward one", ac4},
      {"AC5 halting density toward zero", ac5},
      {"AC6 walk oracle agreement", ac6},
      {"AC7 decider soundness", ac7},
      {"AC8 finite-domain trace stability", ac8},
      {"AC9 determinism across workers", ac9},
      {"AC10 set-density constructions", ac10},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = Clock::now();
    Check result;
    try {
      result = run();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    if (!result.ok) ++failures;
    std::printf("[%s] %s: %s (%.1fs)\n", result.ok ? "PASS" : "FAIL", name, result.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
