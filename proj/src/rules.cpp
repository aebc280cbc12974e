#include "collatz_ca/rules.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "collatz_ca/digits.hpp"
#include "collatz_ca/grid.hpp"

namespace collatz_ca {

namespace {

constexpr Cell kE = Cell::empty();

int mod3(int v) { return ((v % 3) + 3) % 3; }

}  // namespace

std::string_view to_string(RuleKind k) {
  switch (k) {
    case RuleKind::Ca1Bottom: return "ca1-bottom";
    case RuleKind::Ca1Top: return "ca1-top";
    case RuleKind::Ca2: return "ca2";
    case RuleKind::Ca3: return "ca3";
  }
  return "?";
}

RuleKind rule_kind_from_string(std::string_view s) {
  for (auto k : {RuleKind::Ca1Bottom, RuleKind::Ca1Top, RuleKind::Ca2, RuleKind::Ca3}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown rule kind: " + std::string(s));
}

std::size_t arity(RuleKind k) {
  switch (k) {
    case RuleKind::Ca1Bottom: return 5;
    case RuleKind::Ca1Top: return 2;
    case RuleKind::Ca2: return 3;
    case RuleKind::Ca3: return 4;
  }
  return 0;
}

std::vector<RuleKind> rule_kinds_of(Automaton a) {
  switch (a) {
    case Automaton::Ca1: return {RuleKind::Ca1Bottom, RuleKind::Ca1Top};
    case Automaton::Ca2: return {RuleKind::Ca2};
    case Automaton::Ca3: return {RuleKind::Ca3};
  }
  return {};
}

Cell transition_ca3(Cell a, Cell b, Cell c, Cell d) {
  if (b.is_empty()) {
    // Only the column two left of the old leading bit receives anything here:
    // the final carry, which is set iff the bit below it came out 0.
    if (a.is_empty() && c.is_digit()) {
      return (d.is_empty() || d.value() == 0) ? Cell::digit(1) : kE;
    }
    return kE;
  }
  const int a_bit = a.is_digit() ? a.value() : 0;
  const int c_bit = c.is_digit() ? c.value() : 1;
  const int d_bit = d.is_digit() ? d.value() : 0;
  const int carry = d_bit < b.value() + c_bit ? 1 : 0;
  const int bit = (a_bit + b.value() + carry) & 1;
  if (bit == 1) return Cell::digit(1);
  return d.is_digit() ? Cell::digit(0) : kE;
}

Cell transition_ca2(Cell a, Cell b, Cell d) {
  const Cell parent = a.is_digit() ? a : b;
  if (parent.is_empty() || (b.is_empty() && parent.attr() == Parity::Even)) return kE;
  const int a_val = a.is_digit() ? a.value() : 0;
  int v = 0;
  if (parent.attr() == Parity::Even) {
    v = (2 * a_val + (b.value() >= 2 ? 1 : 0)) & 3;
  } else if (b.is_empty()) {
    v = (1 - a_val) & 3;
  } else {
    const int d_val = d.is_digit() ? d.value() : 0;
    const int borrow = d_val + b.value() >= 4 ? 1 : 0;
    v = (b.value() - a_val - borrow) & 3;
  }
  if (v == 0 && (d.is_empty() || a.is_empty())) return kE;
  return Cell::digit(v, d.is_digit() ? d.attr() : parity_of(v));
}

Cell transition_ca1_bottom(Cell a, TopState ta, Cell b, TopState tb, Cell d) {
  auto effective = [](Cell c, TopState t) {
    if (c.is_digit()) return c.value();
    return t == TopState::OddSpecial ? 1 : -1;
  };
  const int high = effective(a, ta);
  const int low = effective(b, tb);
  if (high < 0) return kE;
  if (a.is_digit() && !is_resolved(ta)) return kE;
  if (low < 0) {
    // Units digit of the halved value. Under an odd row it sits below the
    // odd-special marker, so a digit here must belong to an even row.
    if (d.is_digit()) return kE;
    if (a.is_digit() && ta != TopState::Even) return kE;
    return Cell::digit(mod3(2 * high));
  }
  if (b.is_digit() && !is_resolved(tb)) return kE;
  if (d.is_empty()) return kE;
  const int carry_in = mod3(low - 2 * d.value());
  if (carry_in > 1) return kE;
  const int carry = (2 * d.value() + carry_in - low) / 3;
  return Cell::digit(mod3(2 * (high - carry)));
}

TopState transition_ca1_top(Cell below, TopState left) {
  if (below.is_digit()) {
    const bool odd = (below.value() & 1) != 0;
    switch (left) {
      case TopState::UnknownParity:
      case TopState::Even:
        return odd ? TopState::OddNormal : TopState::Even;
      case TopState::OddNormal:
        return odd ? TopState::Even : TopState::OddNormal;
      case TopState::OddSpecial:
        return TopState::UnknownParity;
    }
  }
  return left == TopState::OddNormal ? TopState::OddSpecial : TopState::UnknownParity;
}

bool slot_is_top(RuleKind k, std::size_t slot) {
  if (k == RuleKind::Ca1Bottom) return slot == 1 || slot == 3;
  if (k == RuleKind::Ca1Top) return slot == 1;
  return false;
}

std::uint8_t default_successor(RuleKind k) {
  return k == RuleKind::Ca1Top ? static_cast<std::uint8_t>(TopState::UnknownParity)
                               : Cell::kEmptyCode;
}

std::uint8_t closed_form(const Neighborhood& n) {
  auto cell = [&](std::size_t i) { return Cell::from_code(n.codes[i]); };
  auto top = [&](std::size_t i) { return static_cast<TopState>(n.codes[i]); };
  switch (n.kind) {
    case RuleKind::Ca3:
      return transition_ca3(cell(0), cell(1), cell(2), cell(3)).code();
    case RuleKind::Ca2:
      return transition_ca2(cell(0), cell(1), cell(2)).code();
    case RuleKind::Ca1Bottom:
      return transition_ca1_bottom(cell(0), top(1), cell(2), top(3), cell(4)).code();
    case RuleKind::Ca1Top:
      return static_cast<std::uint8_t>(transition_ca1_top(cell(0), top(1)));
  }
  return 0;
}

std::string format_tuple(const Neighborhood& n) {
  std::string out;
  for (std::size_t i = 0; i < arity(n.kind); ++i) {
    if (i) out += ',';
    out += slot_is_top(n.kind, i) ? std::string(token(static_cast<TopState>(n.codes[i])))
                                  : token(Cell::from_code(n.codes[i]));
  }
  return out;
}

std::string format_successor(RuleKind k, std::uint8_t code) {
  if (k == RuleKind::Ca1Top) return std::string(token(static_cast<TopState>(code)));
  return token(Cell::from_code(code));
}

Neighborhood parse_tuple(RuleKind k, std::string_view text) {
  Neighborhood n{k, {}};
  std::size_t slot = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    if (slot >= arity(k)) throw std::invalid_argument("too many cells in tuple");
    const auto tok = text.substr(pos, comma - pos);
    n.codes[slot] = slot_is_top(k, slot) ? static_cast<std::uint8_t>(parse_top_token(tok))
                                         : parse_cell_token(tok).code();
    ++slot;
    pos = comma + 1;
  }
  if (slot != arity(k)) throw std::invalid_argument("too few cells in tuple");
  return n;
}

RuleConflictError::RuleConflictError(const Neighborhood& n, std::uint8_t first,
                                     std::uint8_t second)
    : std::runtime_error("conflicting successors for " + std::string(to_string(n.kind)) +
                         " " + format_tuple(n) + ": " + format_successor(n.kind, first) +
                         " vs " + format_successor(n.kind, second)),
      n_(n) {}

void RuleTable::record(const Neighborhood& n, std::uint8_t successor) {
  auto [it, inserted] = entries_.emplace(n, successor);
  if (!inserted && it->second != successor) {
    throw RuleConflictError(n, it->second, successor);
  }
}

std::uint8_t RuleTable::lookup(const Neighborhood& n) const {
  auto it = entries_.find(n);
  return it == entries_.end() ? default_state() : it->second;
}

std::string category_of(const Neighborhood& n) {
  auto cell = [&](std::size_t i) { return Cell::from_code(n.codes[i]); };
  switch (n.kind) {
    case RuleKind::Ca3: {
      const Cell a = cell(0), b = cell(1), c = cell(2), d = cell(3);
      if (a.is_empty() && b.is_empty() && c.is_empty()) return "void";
      if (a.is_digit() && b.is_digit() && c.is_digit() && d.is_digit()) return "inner";
      if (a.is_digit() && d.is_empty()) return "right-end";
      if (a.is_empty() && d.is_digit()) return "left-end";
      if (a.is_empty()) return "left-end/empty-right";
      return "other";
    }
    case RuleKind::Ca2: {
      const Cell a = cell(0), b = cell(1), d = cell(2);
      if (a.is_empty() && b.is_empty()) return "void";
      const Parity p = (a.is_digit() ? a : b).attr();
      std::string prefix = p == Parity::Even ? "even/" : p == Parity::Odd ? "odd/" : "plain/";
      auto result = [&] {
        return d.is_empty() ? std::string("/empty")
                            : d.attr() == Parity::Odd ? std::string("/odd") : std::string("/even");
      };
      if (a.is_digit() && b.is_digit() && d.is_digit()) {
        return p == Parity::Odd ? prefix + "inner" + result() : prefix + "inner";
      }
      if (a.is_empty()) return prefix + "left-end" + result();
      if (d.is_empty()) return prefix + "right-end";
      return prefix + "other";
    }
    case RuleKind::Ca1Bottom: {
      const Cell a = cell(0), b = cell(2), d = cell(4);
      const auto ta = static_cast<TopState>(n.codes[1]);
      const auto tb = static_cast<TopState>(n.codes[3]);
      const bool high = a.is_digit() || ta == TopState::OddSpecial;
      const bool low = b.is_digit() || tb == TopState::OddSpecial;
      if (!high && !low) return "void";
      if (a.is_digit() && b.is_digit() && d.is_digit()) return "inner";
      if (high && !low) return "units";
      if (high && low) return "units+1";
      return "left-end";
    }
    case RuleKind::Ca1Top: {
      const Cell below = cell(0);
      const auto left = static_cast<TopState>(n.codes[1]);
      if (below.is_digit()) {
        if (is_resolved(left)) return "partial-sum";
        if (left == TopState::UnknownParity) return "leading-digit";
        return "other";
      }
      return "right-end";
    }
  }
  return "other";
}

Neighborhood law_key(const Neighborhood& n) {
  Neighborhood key = n;
  for (std::size_t i = 0; i < arity(n.kind); ++i) {
    if (slot_is_top(n.kind, i) && n.kind == RuleKind::Ca1Bottom &&
        is_resolved(static_cast<TopState>(n.codes[i]))) {
      key.codes[i] = 0xff;
    }
  }
  return key;
}

std::size_t ConsistencyReport::laws_in(std::string_view category) const {
  for (const auto& c : categories) {
    if (c.name == category) return c.laws;
  }
  return 0;
}

std::vector<std::pair<std::string, std::size_t>> expected_inner_laws(RuleKind k) {
  switch (k) {
    case RuleKind::Ca3: return {{"inner", 16}};
    case RuleKind::Ca2:
      // Odd rows: the right neighbours satisfy b + d = c - borrow (mod 4), and
      // b + d = 3 would need a run of 3s without borrow (or 0s with one) that
      // cannot end at an odd units digit. 16 of the 64 tuples never occur.
      return {{"even/inner", 32}, {"odd/inner/odd", 48}, {"odd/inner/even", 48}};
    case RuleKind::Ca1Bottom: return {{"inner", 18}};
    case RuleKind::Ca1Top: return {{"partial-sum", 6}, {"leading-digit", 3}};
  }
  return {};
}

namespace {

std::uint8_t top_code(const Grid& g, std::size_t row, std::int64_t col) {
  return static_cast<std::uint8_t>(g.top(row, col));
}

std::uint8_t bottom_code(const Grid& g, std::size_t row, std::int64_t col) {
  return g.bottom(row, col).code();
}

}  // namespace

Neighborhood neighborhood_at(const Grid& g, RuleKind kind, std::size_t row, std::int64_t col) {
  Neighborhood n{kind, {}};
  switch (kind) {
    case RuleKind::Ca3:
      n.codes = {bottom_code(g, row - 1, col), bottom_code(g, row - 1, col - 1),
                 bottom_code(g, row - 1, col - 2), bottom_code(g, row, col - 1), 0};
      break;
    case RuleKind::Ca2:
      n.codes = {bottom_code(g, row - 1, col), bottom_code(g, row - 1, col - 1),
                 bottom_code(g, row, col - 1), 0, 0};
      break;
    case RuleKind::Ca1Bottom:
      n.codes = {bottom_code(g, row - 1, col), top_code(g, row - 1, col),
                 bottom_code(g, row - 1, col - 1), top_code(g, row - 1, col - 1),
                 bottom_code(g, row, col - 1)};
      break;
    case RuleKind::Ca1Top:
      n.codes = {bottom_code(g, row, col), top_code(g, row, col + 1), 0, 0, 0};
      break;
  }
  return n;
}

RuleTable learn_rule_table(RuleKind kind, std::uint64_t n_max) {
  if (n_max < 2) throw std::invalid_argument("learn_rule_table: n_max must be >= 2");
  const Automaton a = kind == RuleKind::Ca2   ? Automaton::Ca2
                      : kind == RuleKind::Ca3 ? Automaton::Ca3
                                              : Automaton::Ca1;
  RuleTable table(kind);
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    const Grid g = oracle_grid(a, BigInt(n), 0);
    // Row 0 is given; the top layer of row 0 is computed like any other row.
    const std::size_t first = kind == RuleKind::Ca1Top ? 0 : 1;
    for (std::size_t row = first; row < g.row_count(); ++row) {
      const ColumnRange w = g.window(row);
      for (std::int64_t col = w.lo; col <= w.hi; ++col) {
        const std::uint8_t actual = kind == RuleKind::Ca1Top ? top_code(g, row, col)
                                                             : bottom_code(g, row, col);
        table.record(neighborhood_at(g, kind, row, col), actual);
      }
    }
  }
  return table;
}

ConsistencyReport check_rule_consistency(const RuleTable& t) {
  ConsistencyReport report;
  report.kind = t.kind();
  std::map<std::string, std::pair<std::size_t, std::set<Neighborhood>>> cats;
  std::map<Neighborhood, std::uint8_t> laws;
  for (const auto& [n, succ] : t.entries()) {
    const std::uint8_t expected = closed_form(n);
    if (expected != succ) report.mismatches.push_back({n, succ, expected});
    auto& [count, keys] = cats[category_of(n)];
    ++count;
    const Neighborhood key = law_key(n);
    keys.insert(key);
    auto [it, inserted] = laws.emplace(key, succ);
    if (!inserted && it->second != succ) ++report.law_conflicts;
  }
  for (const auto& [name, data] : cats) {
    report.categories.push_back({name, data.first, data.second.size()});
  }
  report.sufficient_coverage = !t.entries().empty();
  for (const auto& [name, want] : expected_inner_laws(t.kind())) {
    if (report.laws_in(name) != want) report.sufficient_coverage = false;
  }
  return report;
}

std::string dump_rule_table(const RuleTable& t, const ConsistencyReport& r,
                            std::uint64_t n_max) {
  std::ostringstream out;
  out << "# rules " << to_string(t.kind()) << " learned-from 2.." << n_max << " entries "
      << t.size() << "\n";
  out << "# consistency " << (r.consistent() ? "ok" : "MISMATCH") << " mismatches "
      << r.mismatches.size() << " law-conflicts " << r.law_conflicts << " coverage "
      << (r.sufficient_coverage ? "complete" : "insufficient") << "\n";
  std::map<std::string, std::vector<std::pair<Neighborhood, std::uint8_t>>> by_cat;
  for (const auto& [n, succ] : t.entries()) by_cat[category_of(n)].emplace_back(n, succ);
  for (const auto& stats : r.categories) {
    out << "# section " << stats.name << " entries " << stats.entries << " laws "
        << stats.laws << "\n";
    for (const auto& [n, succ] : by_cat[stats.name]) {
      out << to_string(t.kind()) << ' ' << format_tuple(n) << " -> "
          << format_successor(t.kind(), succ) << "\n";
    }
  }
  for (const auto& m : r.mismatches) {
    out << "# mismatch " << format_tuple(m.neighborhood) << " learned "
        << format_successor(t.kind(), m.learned) << " closed-form "
        << format_successor(t.kind(), m.closed_form) << "\n";
  }
  return out.str();
}

}  // namespace collatz_ca
