#include "tmlab/sampler.hpp"

#include <charconv>
#include <string>

namespace tmlab {

std::uint64_t transition_radix(std::uint32_t n, int a) {
  return 2 * static_cast<std::uint64_t>(a) * (static_cast<std::uint64_t>(n) + 1);
}

Transition transition_from_digit(std::uint64_t digit, std::uint32_t n, int a) {
  Transition t;
  t.move = (digit & 1) ? Move::Right : Move::Left;
  digit >>= 1;
  t.write = static_cast<Symbol>(digit % static_cast<std::uint64_t>(a));
  const auto rank = digit / static_cast<std::uint64_t>(a);
  t.target = rank == n ? kHalt : static_cast<State>(rank + 1);
  return t;
}

std::uint64_t transition_digit(const Transition& t, std::uint32_t n, int a) {
  const std::uint64_t rank = t.halts() ? n : t.target - 1;
  return (rank * static_cast<std::uint64_t>(a) + t.write) * 2 + (t.move == Move::Right ? 1 : 0);
}

Program sample_program(std::uint32_t n, int a, Xoshiro256ss& rng) {
  if (n == 0 || a < 2 || a > kMaxAlphabet) throw DomainError("sample_program: need n >= 1 and 2 <= a <= 256");
  const auto radix = transition_radix(n, a);
  std::vector<Transition> table(static_cast<std::size_t>(n) * a);
  for (auto& t : table) t = transition_from_digit(uniform_below(rng, radix), n, a);
  return Program(n, a, std::move(table));
}

TooManyPrograms::TooManyPrograms(BigInt count)
    : std::runtime_error("too many programs to enumerate: " + count.str()), count_(std::move(count)) {}

BigInt program_index(const Program& program) {
  const auto radix = transition_radix(program.states(), program.alphabet());
  BigInt index = 0;
  for (const auto& t : program.entries()) {
    index = index * radix + transition_digit(t, program.states(), program.alphabet());
  }
  return index;
}

Program program_at_index(std::uint32_t n, int a, const BigInt& index) {
  if (index < 0 || index >= count_programs(n, a)) throw DomainError("program index out of range");
  const auto radix = transition_radix(n, a);
  std::vector<Transition> table(static_cast<std::size_t>(n) * a);
  BigInt rest = index;
  for (auto it = table.rbegin(); it != table.rend(); ++it) {
    const auto digit = static_cast<std::uint64_t>(rest % radix);
    rest /= radix;
    *it = transition_from_digit(digit, n, a);
  }
  return Program(n, a, std::move(table));
}

void enumerate_programs(std::uint32_t n, int a, const std::function<void(const Program&)>& visit,
                        std::uint64_t guard) {
  const BigInt total = count_programs(n, a);
  if (total > guard) throw TooManyPrograms(total);

  const auto radix = transition_radix(n, a);
  const std::size_t entries = static_cast<std::size_t>(n) * a;
  std::vector<std::uint64_t> digits(entries, 0);
  std::vector<Transition> table(entries, transition_from_digit(0, n, a));
  for (;;) {
    visit(Program(n, a, table));
    // Odometer: the last entry turns fastest.
    std::size_t i = entries;
    while (i > 0) {
      --i;
      if (++digits[i] < radix) {
        table[i] = transition_from_digit(digits[i], n, a);
        break;
      }
      digits[i] = 0;
      table[i] = transition_from_digit(0, n, a);
      if (i == 0) return;
    }
  }
}

std::uint64_t parse_seed(std::string_view text) {
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v, base);
  if (text.empty() || ec != std::errc{} || p != end) {
    throw DomainError("invalid seed '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace tmlab
