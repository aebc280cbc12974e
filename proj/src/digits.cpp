#include "collatz_ca/digits.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace collatz_ca {

void check_base(int base) {
  if (base < 2 || base > 4) {
    throw std::invalid_argument("base must be 2, 3 or 4, got " +
                                std::to_string(base));
  }
}

DigitString to_digits(const BigInt& n, int base) {
  check_base(base);
  if (n < 1) throw std::invalid_argument("to_digits: n must be positive");
  DigitString out;
  out.base = base;
  BigInt rest = n;
  while (rest != 0) {
    out.digits.push_back(static_cast<std::uint8_t>(rest % base));
    rest /= base;
  }
  return out;
}

BigInt from_digits(const DigitString& d) {
  BigInt value = 0;
  for (auto it = d.digits.rbegin(); it != d.digits.rend(); ++it) {
    value *= d.base;
    value += *it;
  }
  return value;
}

std::string_view to_string(MapVariant v) {
  switch (v) {
    case MapVariant::T: return "T";
    case MapVariant::T1: return "T1";
    case MapVariant::T2: return "T2";
    case MapVariant::T3: return "T3";
  }
  return "?";
}

MapVariant map_variant_from_string(std::string_view s) {
  std::string up(s);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (up == "T") return MapVariant::T;
  if (up == "T1") return MapVariant::T1;
  if (up == "T2") return MapVariant::T2;
  if (up == "T3") return MapVariant::T3;
  throw std::invalid_argument("unknown map variant: " + std::string(s));
}

unsigned valuation(const BigInt& n, unsigned base) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  if (base == 2) return static_cast<unsigned>(boost::multiprecision::lsb(n));
  unsigned k = 0;
  BigInt rest = n;
  while (rest % base == 0) {
    rest /= base;
    ++k;
  }
  return k;
}

BigInt strip_factors(const BigInt& n, unsigned base) {
  if (base == 2) return n >> valuation(n, 2);
  BigInt rest = n;
  while (rest % base == 0) rest /= base;
  return rest;
}

BigInt odd_part(const BigInt& n) { return strip_factors(n, 2); }

BigInt apply_map(MapVariant v, const BigInt& n) {
  if (n < 1) throw std::invalid_argument("apply_map: n must be positive");
  if (!bit_test(n, 0)) return n >> 1;
  BigInt up = 3 * n + 1;
  switch (v) {
    case MapVariant::T: return up;
    case MapVariant::T1: return up >> 1;
    case MapVariant::T2: return strip_factors(up, 4);
    case MapVariant::T3: return strip_factors(up, 2);
  }
  return up;
}

BigInt trajectory_start(MapVariant v, const BigInt& n) {
  return v == MapVariant::T3 ? odd_part(n) : n;
}

TrajectoryReport oracle_trajectory(MapVariant v, const BigInt& n,
                                   std::uint64_t cap) {
  if (n < 1) throw std::invalid_argument("oracle_trajectory: n must be positive");
  TrajectoryReport r;
  r.input = n;
  BigInt x = trajectory_start(v, n);
  while (r.iterates.size() < cap) {
    r.iterates.push_back(x);
    if (x == 1) {
      r.reached_one = true;
      r.steps_to_one = r.iterates.size() - 1;
      r.classification = Classification::Convergent;
      break;
    }
    x = apply_map(v, x);
  }
  return r;
}

std::optional<std::uint64_t> steps_to_one(MapVariant v, const BigInt& start,
                                          std::uint64_t cap) {
  BigInt x = start;
  for (std::uint64_t k = 0; k <= cap; ++k) {
    if (x == 1) return k;
    x = apply_map(v, x);
  }
  return std::nullopt;
}

std::optional<std::uint64_t> total_stopping_time(const BigInt& n,
                                                 std::uint64_t cap) {
  return steps_to_one(MapVariant::T, n, cap);
}

std::optional<std::uint64_t> stopping_time(const BigInt& n, std::uint64_t cap) {
  if (n <= 1) return std::nullopt;
  BigInt x = n;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    x = apply_map(MapVariant::T, x);
    if (x < n) return k;
  }
  return std::nullopt;
}

BigInt parse_positive(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
      })) {
    throw std::invalid_argument("not a positive integer: '" + std::string(text) + "'");
  }
  BigInt value(s);
  if (value < 1) {
    throw std::invalid_argument("not a positive integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace collatz_ca
