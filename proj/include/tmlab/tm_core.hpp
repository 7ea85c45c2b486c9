#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tmlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Raised for n = 0, a < 2 and similar out-of-domain arguments.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

using State = std::uint32_t;
using Symbol = std::uint8_t;

// States are 1..n; 0 is reserved for the halt state, which is not counted
// among the n states of a program.
inline constexpr State kHalt = 0;

// Symbols are stored in a byte, so the alphabet is capped at 256.
inline constexpr int kMaxAlphabet = 256;

enum class TapeGeometry : std::uint8_t { OneWayFallOff, TwoWayInfinite };
enum class Move : std::uint8_t { Left, Right };

struct MachineModel {
  TapeGeometry geometry = TapeGeometry::OneWayFallOff;
  int alphabet_size = 2;

  static MachineModel one_way(int a = 2) { return make(TapeGeometry::OneWayFallOff, a); }
  static MachineModel two_way(int a = 2) { return make(TapeGeometry::TwoWayInfinite, a); }
  static MachineModel make(TapeGeometry geometry, int a);

  bool operator==(const MachineModel&) const = default;
};

std::string_view to_string(TapeGeometry geometry);
TapeGeometry parse_geometry(std::string_view name);

struct Transition {
  State target = kHalt;
  Symbol write = 0;
  Move move = Move::Right;

  bool halts() const { return target == kHalt; }
  bool operator==(const Transition&) const = default;
};

// An n-state transition table over an a-symbol alphabet. Immutable once
// constructed; entries are stored row-major by (state, symbol).
class Program {
 public:
  Program(std::uint32_t n, int a, std::vector<Transition> table);

  std::uint32_t states() const { return n_; }
  int alphabet() const { return a_; }

  const Transition& at(State state, Symbol symbol) const {
    return table_[static_cast<std::size_t>(state - 1) * a_ + symbol];
  }
  std::span<const Transition> entries() const { return table_; }

  bool operator==(const Program&) const = default;

 private:
  std::uint32_t n_;
  int a_;
  std::vector<Transition> table_;
};

// Number of distinct n-state programs over an a-symbol alphabet:
// (2a(n+1))^(an). For a = 2 this is (4(n+1))^(2n).
BigInt count_programs(std::uint32_t n, int a);

// Cells hold the fill symbol until written. Storage grows to cover the
// visited span only, which is contiguous because the head moves one cell at a
// time.
class Tape {
 public:
  explicit Tape(Symbol fill = 0) : fill_(fill) {}
  // Cells 0..prefix.size()-1 start with the given content; the rest hold fill.
  Tape(Symbol fill, std::vector<Symbol> prefix) : fill_(fill), right_(std::move(prefix)) {}

  Symbol fill() const { return fill_; }
  Symbol read(std::int64_t cell) const;
  void write(std::int64_t cell, Symbol symbol);

  // Content of [lo, hi] with fill-valued margins trimmed; two tapes with the
  // same fill denote the same function iff their normal forms match.
  struct Normalized {
    std::int64_t lo = 0;
    std::vector<Symbol> cells;
    bool operator==(const Normalized&) const = default;
  };
  Normalized normalized() const;

  bool operator==(const Tape& other) const;

 private:
  Symbol fill_;
  std::vector<Symbol> right_;  // cells 0, 1, 2, ...
  std::vector<Symbol> left_;   // cells -1, -2, ...
};

struct Configuration {
  State state = 1;
  std::int64_t head = 0;
  Tape tape;
  // Cells read so far form the interval [read_lo, read_hi]; empty while
  // read_hi < read_lo.
  std::int64_t read_lo = 0;
  std::int64_t read_hi = -1;
  // Number of times each state has been achieved; index 0 (halt) unused.
  std::vector<std::uint32_t> state_visits;
  std::uint64_t steps = 0;

  static Configuration initial(const Program& program, Tape tape);

  std::uint64_t visited_cells() const {
    return read_hi < read_lo ? 0 : static_cast<std::uint64_t>(read_hi - read_lo + 1);
  }
};

enum class StepResult : std::uint8_t { Continue, Halted, FellOff };

// Whether the write of a step whose move falls off the tape is applied. The
// tape is unobservable after the machine stops, so outcomes must not depend
// on this.
enum class FallOffWrite : std::uint8_t { Record, Discard };

// Executes one transition: read, write, move, then enter the target state. A
// left move from cell 0 on a one-way tape falls off; the target state is then
// not achieved even when it is the halt state.
StepResult step(Configuration& config, const Program& program, const MachineModel& model,
                FallOffWrite policy = FallOffWrite::Record);

enum class Outcome : std::uint8_t { Halted, FellOff, OutOfBudget };
std::string_view to_string(Outcome outcome);

struct RunRecord {
  Outcome outcome = Outcome::OutOfBudget;
  // Step at which the run halted or fell off, or the budget when exhausted.
  std::uint64_t step = 0;
  std::uint64_t steps_executed = 0;
  std::uint32_t max_state_visits = 0;  // most achievements of any single state
  std::uint32_t distinct_states = 0;   // states achieved at least once
  std::uint64_t visited_cell_count = 0;
  std::optional<std::int64_t> final_head;  // absent after falling off
};

RunRecord run(const Program& program, Symbol fill, const MachineModel& model, std::uint64_t budget,
              FallOffWrite policy = FallOffWrite::Record);
// Runs from an arbitrary starting tape.
RunRecord run(const Program& program, Tape tape, const MachineModel& model, std::uint64_t budget,
              FallOffWrite policy = FallOffWrite::Record);
RunRecord summarize(const Configuration& config, StepResult last, std::uint64_t budget);

// Text format:
//   tm n=<n> a=<a>
//   q<state> <symbol> -> <q<j>|H> <write> <L|R>
// one line per entry, sorted by state then symbol.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& cause);
  std::size_t line() const { return line_; }
  const std::string& cause() const { return cause_; }

 private:
  std::size_t line_;
  std::string cause_;
};

std::string serialize(const Program& program);
Program parse_program(std::string_view text);

std::string to_json(const Program& program);
Program program_from_json(std::string_view json);

}  // namespace tmlab
