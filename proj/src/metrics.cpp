#include "collatz_ca/metrics.hpp"

#include <stdexcept>

#include "collatz_ca/engine.hpp"

namespace collatz_ca {

BigInt efficiency_start(const BigInt& n, Automaton a) {
  return a == Automaton::Ca3 ? odd_part(n) : n;
}

EfficiencyRecord n_efficiency(const BigInt& n, Automaton a, std::uint64_t cap) {
  if (n < 2) throw std::invalid_argument("n_efficiency: n must be at least 2");
  const auto steps = steps_to_one(map_of(a), efficiency_start(n, a), cap);
  const auto tst = total_stopping_time(n, cap);
  if (!steps || !tst) throw std::runtime_error("n_efficiency: " + n.str() + " undetermined");
  EfficiencyRecord rec{n, a, *steps, *tst, Rational(*steps, *tst)};
  return rec;
}

EfficiencySummary average_efficiency(std::uint64_t lo, std::uint64_t hi, Automaton a) {
  if (lo < 2 || lo > hi) throw std::invalid_argument("average_efficiency: need 2 <= lo <= hi");
  Rational sum = 0;
  for (std::uint64_t n = lo; n <= hi; ++n) sum += n_efficiency(n, a).ratio;
  return {a, lo, hi, sum / (hi - lo + 1)};
}

std::string to_decimal(const Rational& r, int places) {
  if (places < 0) throw std::invalid_argument("to_decimal: negative precision");
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = r < 0;
  const Rational mag = negative ? Rational(-r) : r;
  const BigInt num = numerator(mag) * scale * 2 + denominator(mag);
  const BigInt q = num / (denominator(mag) * 2);
  std::string digits = q.str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), 1, '.');
  }
  return (negative && q != 0 ? "-" : "") + digits;
}

}  // namespace collatz_ca
