#include "collatz_ca/cell.hpp"

#include <algorithm>
#include <cctype>

namespace collatz_ca {

std::string_view to_string(Automaton a) {
  switch (a) {
    case Automaton::Ca1: return "ca1";
    case Automaton::Ca2: return "ca2";
    case Automaton::Ca3: return "ca3";
  }
  return "?";
}

Automaton automaton_from_string(std::string_view s) {
  std::string low(s);
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (low == "ca1") return Automaton::Ca1;
  if (low == "ca2") return Automaton::Ca2;
  if (low == "ca3") return Automaton::Ca3;
  throw std::invalid_argument("unknown automaton: " + std::string(s));
}

std::string token(Cell c) {
  if (c.is_empty()) return "E";
  std::string out(1, static_cast<char>('0' + c.value()));
  switch (c.attr()) {
    case Parity::Odd: out += ":o"; break;
    case Parity::Even: out += ":e"; break;
    case Parity::None: break;
  }
  return out;
}

std::string_view token(TopState s) {
  switch (s) {
    case TopState::UnknownParity: return "UP";
    case TopState::Even: return "EV";
    case TopState::OddNormal: return "ON";
    case TopState::OddSpecial: return "OS";
  }
  return "?";
}

Cell parse_cell_token(std::string_view tok) {
  if (tok == "E") return Cell::empty();
  if (tok.empty() || tok[0] < '0' || tok[0] > '3') {
    throw std::invalid_argument("bad cell token: " + std::string(tok));
  }
  const int d = tok[0] - '0';
  if (tok.size() == 1) return Cell::digit(d);
  if (tok == std::string(1, tok[0]) + ":o") return Cell::digit(d, Parity::Odd);
  if (tok == std::string(1, tok[0]) + ":e") return Cell::digit(d, Parity::Even);
  throw std::invalid_argument("bad cell token: " + std::string(tok));
}

TopState parse_top_token(std::string_view tok) {
  if (tok == "UP") return TopState::UnknownParity;
  if (tok == "EV") return TopState::Even;
  if (tok == "ON") return TopState::OddNormal;
  if (tok == "OS") return TopState::OddSpecial;
  throw std::invalid_argument("bad top-layer token: " + std::string(tok));
}

}  // namespace collatz_ca
