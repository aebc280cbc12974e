// Cell alphabets of the three automata.
//
// Digit-layer cells (every automaton) pack into one byte: the low two bits
// hold the digit, the next two the parity attribute used by the base-4
// automaton. The top layer of the base-3 automaton has its own enum.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace collatz_ca {

enum class Automaton : std::uint8_t { Ca1, Ca2, Ca3 };

/// Radix each automaton works in: CA1 base 3, CA2 base 4, CA3 base 2.
constexpr int base_of(Automaton a) {
  switch (a) {
    case Automaton::Ca1: return 3;
    case Automaton::Ca2: return 4;
    case Automaton::Ca3: return 2;
  }
  return 0;
}

constexpr bool has_top_layer(Automaton a) { return a == Automaton::Ca1; }

std::string_view to_string(Automaton a);
/// "ca1", "ca2", "ca3" (case-insensitive).
Automaton automaton_from_string(std::string_view s);

enum class Parity : std::uint8_t { None = 0, Even = 1, Odd = 2 };

constexpr Parity parity_of(int digit) {
  return (digit & 1) ? Parity::Odd : Parity::Even;
}

class Cell {
 public:
  static constexpr std::uint8_t kEmptyCode = 0x0f;

  constexpr Cell() = default;

  static constexpr Cell empty() { return Cell{}; }
  static constexpr Cell digit(int d, Parity attr = Parity::None) {
    return Cell(static_cast<std::uint8_t>((d & 3) | (static_cast<int>(attr) << 2)));
  }
  static constexpr Cell from_code(std::uint8_t code) { return Cell(code); }

  constexpr bool is_empty() const { return code_ == kEmptyCode; }
  constexpr bool is_digit() const { return !is_empty(); }
  /// Digit value; only meaningful when is_digit().
  constexpr int value() const { return code_ & 3; }
  constexpr Parity attr() const { return static_cast<Parity>((code_ >> 2) & 3); }
  constexpr std::uint8_t code() const { return code_; }

  constexpr bool operator==(const Cell&) const = default;

 private:
  constexpr explicit Cell(std::uint8_t code) : code_(code) {}
  std::uint8_t code_ = kEmptyCode;
};

enum class TopState : std::uint8_t {
  UnknownParity = 0,
  Even = 1,
  OddNormal = 2,
  OddSpecial = 3,
};

constexpr bool is_resolved(TopState s) {
  return s == TopState::Even || s == TopState::OddNormal;
}

/// Tokens: "0".."3", "E", optional ":o"/":e" suffix for attributed digits.
std::string token(Cell c);
/// Tokens: "UP", "EV", "ON", "OS".
std::string_view token(TopState s);

Cell parse_cell_token(std::string_view tok);
TopState parse_top_token(std::string_view tok);

}  // namespace collatz_ca
