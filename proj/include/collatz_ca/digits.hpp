// Positional digit strings and direct (non-automaton) Collatz maps.
//
// Everything in here is plain arithmetic on arbitrary-precision integers and
// serves as ground truth for the automata in rules/grid/engine.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace collatz_ca {

using BigInt = boost::multiprecision::cpp_int;

/// Digits of a value in base 2, 3 or 4, least significant first.
///
/// `offset` is the grid column of digits[0]. Columns grow leftward, so
/// digits[i] lives in column offset + i.
struct DigitString {
  int base = 2;
  std::vector<std::uint8_t> digits;
  std::int64_t offset = 0;

  std::size_t size() const { return digits.size(); }
  bool operator==(const DigitString&) const = default;
};

/// Throws std::invalid_argument unless base is 2, 3 or 4.
void check_base(int base);

DigitString to_digits(const BigInt& n, int base);
BigInt from_digits(const DigitString& d);

enum class MapVariant : std::uint8_t { T, T1, T2, T3 };

std::string_view to_string(MapVariant v);
/// Accepts "T", "T1", "T2", "T3" (case-insensitive).
MapVariant map_variant_from_string(std::string_view s);

/// Largest k with base^k | n, for n >= 1.
unsigned valuation(const BigInt& n, unsigned base);
/// n with every factor of `base` divided out.
BigInt strip_factors(const BigInt& n, unsigned base);
BigInt odd_part(const BigInt& n);

BigInt apply_map(MapVariant v, const BigInt& n);

/// The value a trajectory under `v` starts from. The base-2 automaton never
/// stores trailing zero bits, so T3 runs begin at the odd part of n.
BigInt trajectory_start(MapVariant v, const BigInt& n);

enum class Classification : std::uint8_t { Convergent, Undetermined };

struct TrajectoryReport {
  BigInt input;
  std::vector<BigInt> iterates;
  bool reached_one = false;
  std::optional<std::uint64_t> steps_to_one;
  Classification classification = Classification::Undetermined;
};

inline constexpr std::uint64_t kDefaultStepCap = 1'000'000;

/// Iterates `v` from trajectory_start(v, n), keeping at most `cap` entries
/// and stopping at the first 1.
TrajectoryReport oracle_trajectory(MapVariant v, const BigInt& n,
                                   std::uint64_t cap = kDefaultStepCap);

/// Smallest k >= 0 with T^k(n) = 1, searched up to `cap` steps.
std::optional<std::uint64_t> total_stopping_time(
    const BigInt& n, std::uint64_t cap = kDefaultStepCap);

/// Smallest k >= 1 with T^k(n) < n. Always empty for n = 1.
std::optional<std::uint64_t> stopping_time(const BigInt& n,
                                           std::uint64_t cap = kDefaultStepCap);

/// Number of map applications needed to reach 1 from `start` (no
/// trajectory_start adjustment), or empty if `cap` is exhausted.
std::optional<std::uint64_t> steps_to_one(MapVariant v, const BigInt& start,
                                          std::uint64_t cap = kDefaultStepCap);

/// Parses a positive decimal integer; throws std::invalid_argument otherwise.
BigInt parse_positive(std::string_view text);

}  // namespace collatz_ca
