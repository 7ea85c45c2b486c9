#include "tmlab/tm_core.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tmlab {

MachineModel MachineModel::make(TapeGeometry geometry, int a) {
  if (a < 2 || a > kMaxAlphabet) {
    throw DomainError("alphabet size must be in [2, 256], got " + std::to_string(a));
  }
  return MachineModel{geometry, a};
}

std::string_view to_string(TapeGeometry geometry) {
  return geometry == TapeGeometry::OneWayFallOff ? "oneway" : "twoway";
}

TapeGeometry parse_geometry(std::string_view name) {
  if (name == "oneway" || name == "one-way") return TapeGeometry::OneWayFallOff;
  if (name == "twoway" || name == "two-way") return TapeGeometry::TwoWayInfinite;
  throw DomainError("unknown tape model '" + std::string(name) + "'");
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Halted: return "halted";
    case Outcome::FellOff: return "fell_off";
    case Outcome::OutOfBudget: return "out_of_budget";
  }
  return "?";
}

Program::Program(std::uint32_t n, int a, std::vector<Transition> table)
    : n_(n), a_(a), table_(std::move(table)) {
  if (n == 0) throw DomainError("a program needs at least one state");
  if (a < 2 || a > kMaxAlphabet) {
    throw DomainError("alphabet size must be in [2, 256], got " + std::to_string(a));
  }
  if (table_.size() != static_cast<std::size_t>(n) * a) {
    throw DomainError("transition table must have n*a = " + std::to_string(std::size_t{n} * a) +
                      " entries, got " + std::to_string(table_.size()));
  }
  for (const auto& t : table_) {
    if (t.target > n) throw DomainError("transition target out of range");
    if (t.write >= a) throw DomainError("written symbol out of range");
  }
}

BigInt count_programs(std::uint32_t n, int a) {
  if (n == 0) throw DomainError("count_programs: n must be at least 1");
  if (a < 2) throw DomainError("count_programs: alphabet size must be at least 2");
  const BigInt base = BigInt(2) * a * (BigInt(n) + 1);
  return boost::multiprecision::pow(base, static_cast<unsigned>(std::uint64_t{n} * a));
}

// ---------------------------------------------------------------------------
// Tape

Symbol Tape::read(std::int64_t cell) const {
  if (cell >= 0) {
    const auto i = static_cast<std::size_t>(cell);
    return i < right_.size() ? right_[i] : fill_;
  }
  const auto i = static_cast<std::size_t>(-cell - 1);
  return i < left_.size() ? left_[i] : fill_;
}

void Tape::write(std::int64_t cell, Symbol symbol) {
  auto& side = cell >= 0 ? right_ : left_;
  const auto i = static_cast<std::size_t>(cell >= 0 ? cell : -cell - 1);
  if (i >= side.size()) {
    if (symbol == fill_) return;
    side.resize(i + 1, fill_);
  }
  side[i] = symbol;
}

Tape::Normalized Tape::normalized() const {
  const auto lo = -static_cast<std::int64_t>(left_.size());
  const auto hi = static_cast<std::int64_t>(right_.size()) - 1;
  std::int64_t first = lo;
  while (first <= hi && read(first) == fill_) ++first;
  std::int64_t last = hi;
  while (last >= first && read(last) == fill_) --last;
  Normalized out;
  out.lo = first;
  if (first <= last) {
    out.cells.reserve(static_cast<std::size_t>(last - first + 1));
    for (std::int64_t c = first; c <= last; ++c) out.cells.push_back(read(c));
  } else {
    out.lo = 0;
  }
  return out;
}

bool Tape::operator==(const Tape& other) const {
  return fill_ == other.fill_ && normalized() == other.normalized();
}

// ---------------------------------------------------------------------------
// Execution

Configuration Configuration::initial(const Program& program, Tape tape) {
  Configuration c;
  c.tape = std::move(tape);
  c.state_visits.assign(program.states() + 1, 0);
  c.state_visits[1] = 1;
  return c;
}

StepResult step(Configuration& config, const Program& program, const MachineModel& model,
                FallOffWrite policy) {
  const std::int64_t cell = config.head;
  const Symbol read = config.tape.read(cell);
  if (config.read_hi < config.read_lo) {
    config.read_lo = config.read_hi = cell;
  } else {
    config.read_lo = std::min(config.read_lo, cell);
    config.read_hi = std::max(config.read_hi, cell);
  }
  const Transition& t = program.at(config.state, read);
  ++config.steps;

  const bool falls = t.move == Move::Left && cell == 0 &&
                     model.geometry == TapeGeometry::OneWayFallOff;
  if (falls) {
    if (policy == FallOffWrite::Record) config.tape.write(cell, t.write);
    return StepResult::FellOff;
  }
  config.tape.write(cell, t.write);
  config.head = t.move == Move::Left ? cell - 1 : cell + 1;
  if (t.halts()) return StepResult::Halted;
  config.state = t.target;
  ++config.state_visits[t.target];
  return StepResult::Continue;
}

RunRecord summarize(const Configuration& config, StepResult last, std::uint64_t budget) {
  RunRecord r;
  r.steps_executed = config.steps;
  switch (last) {
    case StepResult::Halted:
      r.outcome = Outcome::Halted;
      r.step = config.steps;
      break;
    case StepResult::FellOff:
      r.outcome = Outcome::FellOff;
      r.step = config.steps;
      break;
    case StepResult::Continue:
      r.outcome = Outcome::OutOfBudget;
      r.step = budget;
      break;
  }
  for (std::size_t q = 1; q < config.state_visits.size(); ++q) {
    const auto v = config.state_visits[q];
    r.max_state_visits = std::max(r.max_state_visits, v);
    if (v > 0) ++r.distinct_states;
  }
  r.visited_cell_count = config.visited_cells();
  if (last != StepResult::FellOff) r.final_head = config.head;
  return r;
}

RunRecord run(const Program& program, Tape tape, const MachineModel& model, std::uint64_t budget,
              FallOffWrite policy) {
  Configuration config = Configuration::initial(program, std::move(tape));
  StepResult last = StepResult::Continue;
  while (config.steps < budget) {
    last = step(config, program, model, policy);
    if (last != StepResult::Continue) break;
  }
  return summarize(config, last, budget);
}

RunRecord run(const Program& program, Symbol fill, const MachineModel& model, std::uint64_t budget,
              FallOffWrite policy) {
  if (fill >= program.alphabet()) throw DomainError("fill symbol outside the alphabet");
  return run(program, Tape(fill), model, budget, policy);
}

// ---------------------------------------------------------------------------
// Text format

ParseError::ParseError(std::size_t line, const std::string& cause)
    : std::runtime_error("line " + std::to_string(line) + ": " + cause), line_(line), cause_(cause) {}

std::string serialize(const Program& program) {
  std::string out = "tm n=" + std::to_string(program.states()) +
                    " a=" + std::to_string(program.alphabet()) + "\n";
  for (State q = 1; q <= program.states(); ++q) {
    for (int s = 0; s < program.alphabet(); ++s) {
      const auto& t = program.at(q, static_cast<Symbol>(s));
      out += 'q' + std::to_string(q) + ' ' + std::to_string(s) + " -> ";
      out += t.halts() ? std::string("H") : 'q' + std::to_string(t.target);
      out += ' ' + std::to_string(t.write) + ' ' + (t.move == Move::Left ? 'L' : 'R') + '\n';
    }
  }
  return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end || s.empty()) return std::nullopt;
  return v;
}

std::uint64_t header_field(std::string_view tok, std::string_view key, std::size_t line) {
  if (tok.substr(0, key.size()) != key) {
    throw ParseError(line, "malformed header, expected 'tm n=<n> a=<a>'");
  }
  auto v = to_uint(tok.substr(key.size()));
  if (!v) throw ParseError(line, "malformed header value '" + std::string(tok) + "'");
  return *v;
}

}  // namespace

Program parse_program(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t header_line = 0;
  std::uint32_t n = 0;
  int a = 0;
  std::vector<Transition> table;
  std::vector<bool> seen;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto toks = split_ws(line.substr(0, line.find('#')));
    if (toks.empty()) continue;

    if (header_line == 0) {
      if (toks.size() != 3 || toks[0] != "tm") {
        throw ParseError(line_no, "malformed header, expected 'tm n=<n> a=<a>'");
      }
      const auto nv = header_field(toks[1], "n=", line_no);
      const auto av = header_field(toks[2], "a=", line_no);
      if (nv == 0 || nv > 0xFFFFFFFEu) throw ParseError(line_no, "state count out of range");
      if (av < 2 || av > static_cast<std::uint64_t>(kMaxAlphabet)) {
        throw ParseError(line_no, "alphabet size out of range");
      }
      n = static_cast<std::uint32_t>(nv);
      a = static_cast<int>(av);
      table.assign(static_cast<std::size_t>(n) * a, Transition{});
      seen.assign(table.size(), false);
      header_line = line_no;
      continue;
    }

    if (toks.size() != 6 || toks[2] != "->") {
      throw ParseError(line_no, "malformed entry, expected 'q<state> <symbol> -> <target> <write> <L|R>'");
    }
    auto parse_state = [&](std::string_view tok) -> std::uint64_t {
      if (tok.size() < 2 || tok[0] != 'q') throw ParseError(line_no, "malformed state '" + std::string(tok) + "'");
      auto v = to_uint(tok.substr(1));
      if (!v) throw ParseError(line_no, "malformed state '" + std::string(tok) + "'");
      if (*v < 1 || *v > n) throw ParseError(line_no, "state out of range");
      return *v;
    };
    auto parse_symbol = [&](std::string_view tok) -> Symbol {
      auto v = to_uint(tok);
      if (!v) throw ParseError(line_no, "malformed symbol '" + std::string(tok) + "'");
      if (*v >= static_cast<std::uint64_t>(a)) throw ParseError(line_no, "symbol out of range");
      return static_cast<Symbol>(*v);
    };

    const auto state = parse_state(toks[0]);
    const Symbol sym = parse_symbol(toks[1]);
    Transition t;
    t.target = toks[3] == "H" ? kHalt : static_cast<State>(parse_state(toks[3]));
    t.write = parse_symbol(toks[4]);
    if (toks[5] == "L") {
      t.move = Move::Left;
    } else if (toks[5] == "R") {
      t.move = Move::Right;
    } else {
      throw ParseError(line_no, "malformed direction '" + std::string(toks[5]) + "'");
    }
    const auto idx = static_cast<std::size_t>(state - 1) * a + sym;
    if (seen[idx]) throw ParseError(line_no, "duplicate entry");
    seen[idx] = true;
    table[idx] = t;
  }

  if (header_line == 0) throw ParseError(line_no, "missing header");
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ParseError(line_no, "incomplete table");
  }
  return Program(n, a, std::move(table));
}

// ---------------------------------------------------------------------------
// JSON mirror

std::string to_json(const Program& program) {
  nlohmann::json table = nlohmann::json::array();
  for (State q = 1; q <= program.states(); ++q) {
    for (int s = 0; s < program.alphabet(); ++s) {
      const auto& t = program.at(q, static_cast<Symbol>(s));
      table.push_back({{"state", q},
                       {"symbol", s},
                       {"target", t.halts() ? std::string("H") : "q" + std::to_string(t.target)},
                       {"write", t.write},
                       {"move", t.move == Move::Left ? "L" : "R"}});
    }
  }
  nlohmann::json j = {{"n", program.states()}, {"a", program.alphabet()}, {"table", table}};
  return j.dump();
}

Program program_from_json(std::string_view json) {
  // Routed through the text parser so both formats share validation.
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
    std::ostringstream text;
    text << "tm n=" << j.at("n").get<std::uint64_t>() << " a=" << j.at("a").get<std::uint64_t>() << '\n';
    for (const auto& e : j.at("table")) {
      text << 'q' << e.at("state").get<std::uint64_t>() << ' ' << e.at("symbol").get<std::uint64_t>()
           << " -> " << e.at("target").get<std::string>() << ' ' << e.at("write").get<std::uint64_t>()
           << ' ' << e.at("move").get<std::string>() << '\n';
    }
    return parse_program(text.str());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("invalid program JSON: ") + e.what());
  }
}

}  // namespace tmlab
