// n-efficiency: map applications an automaton needs to reach 1, divided by
// the total stopping time under T.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "collatz_ca/cell.hpp"
#include "collatz_ca/digits.hpp"

namespace collatz_ca {

using Rational = boost::multiprecision::cpp_rational;

struct EfficiencyRecord {
  BigInt n;
  Automaton variant = Automaton::Ca3;
  std::uint64_t ca_steps = 0;
  std::uint64_t tst = 0;
  Rational ratio;
};

/// Start of the counted trajectory: n for CA1 and CA2, odd_part(n) for CA3.
BigInt efficiency_start(const BigInt& n, Automaton a);

/// Throws std::invalid_argument for n < 2 and std::runtime_error when either
/// trajectory does not reach 1 within `cap` steps.
EfficiencyRecord n_efficiency(const BigInt& n, Automaton a, std::uint64_t cap = kDefaultStepCap);

struct EfficiencySummary {
  Automaton variant = Automaton::Ca3;
  std::uint64_t lo = 0, hi = 0;
  Rational mean;
  double mean_value() const { return mean.convert_to<double>(); }
};

/// Exact mean of n_efficiency over [lo, hi].
EfficiencySummary average_efficiency(std::uint64_t lo, std::uint64_t hi, Automaton a);

/// Decimal rendering with `places` digits after the point, rounded half up.
std::string to_decimal(const Rational& r, int places = 6);

}  // namespace collatz_ca
