// Transition functions of the three automata.
//
// Every transition exists twice: in closed form (derived from the digit
// arithmetic each automaton performs) and as a table learned from oracle
// grids. check_rule_consistency() requires the two to agree.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "collatz_ca/cell.hpp"

namespace collatz_ca {

/// Which cell set a rule updates. CA1 has one rule per layer.
enum class RuleKind : std::uint8_t { Ca1Bottom, Ca1Top, Ca2, Ca3 };

std::string_view to_string(RuleKind k);
RuleKind rule_kind_from_string(std::string_view s);
std::size_t arity(RuleKind k);
std::vector<RuleKind> rule_kinds_of(Automaton a);

// Columns grow leftward, so (i, j-1) is the right-hand neighbour.

/// CA3 cell (i,j) from (i-1,j), (i-1,j-1), (i-1,j-2), (i,j-1).
///
/// Row i holds odd_part(3x+1) where row i-1 holds x, computed as
/// (2x+1) + x. The carry into column j is 1 iff s(i,j-1) < s(i-1,j-1) +
/// s(i-1,j-2); empty cells right of the new units digit count as 0, and the
/// empty cell right of x's units digit stands for the appended 1.
Cell transition_ca3(Cell a, Cell b, Cell c, Cell d);

/// CA2 cell (i,j) from (i-1,j), (i-1,j-1), (i,j-1).
///
/// Even rows (attribute `e`) are doubled and lose their units zero; odd rows
/// compute (4x+1) - x with a borrow iff s(i,j-1) + s(i-1,j-1) >= 4. New
/// digits copy the attribute of their right neighbour, the units digit takes
/// its own parity, and trailing zeros stay empty.
Cell transition_ca2(Cell a, Cell b, Cell d);

/// CA1 bottom cell (i,j,0) from (i-1,j,0), (i-1,j,1), (i-1,j-1,0),
/// (i-1,j-1,1), (i,j-1,0).
///
/// Halves the previous row in base 3 from the units digit up, inferring the
/// doubling carry from the right neighbour. An odd-special top cell stands
/// for the digit 1 appended by 3x+1. Digits whose parity sweep has not
/// resolved yet do not fire.
Cell transition_ca1_bottom(Cell a, TopState ta, Cell b, TopState tb, Cell d);

/// CA1 top cell (i,j,1) from (i,j,0) and the left neighbour (i,j+1,1).
TopState transition_ca1_top(Cell below, TopState left);

/// Tuple of neighbour states, stored as raw codes (Cell::code() or TopState).
struct Neighborhood {
  RuleKind kind = RuleKind::Ca3;
  std::array<std::uint8_t, 5> codes{};

  auto operator<=>(const Neighborhood&) const = default;
  bool operator==(const Neighborhood&) const = default;
};

/// Per-kind slot layout: which slots hold top-layer states.
bool slot_is_top(RuleKind k, std::size_t slot);

std::uint8_t default_successor(RuleKind k);
/// Closed-form successor code of `n`.
std::uint8_t closed_form(const Neighborhood& n);

/// "0,1:o,E -> 2:e" style rendering of a tuple or successor code.
std::string format_tuple(const Neighborhood& n);
std::string format_successor(RuleKind k, std::uint8_t code);
Neighborhood parse_tuple(RuleKind k, std::string_view text);

class RuleConflictError : public std::runtime_error {
 public:
  RuleConflictError(const Neighborhood& n, std::uint8_t first, std::uint8_t second);
  const Neighborhood& neighborhood() const noexcept { return n_; }

 private:
  Neighborhood n_;
};

class RuleTable {
 public:
  explicit RuleTable(RuleKind kind) : kind_(kind) {}

  RuleKind kind() const noexcept { return kind_; }
  std::uint8_t default_state() const noexcept { return default_successor(kind_); }
  const std::map<Neighborhood, std::uint8_t>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Records n -> successor. Throws RuleConflictError if n already maps to
  /// a different successor.
  void record(const Neighborhood& n, std::uint8_t successor);
  std::uint8_t lookup(const Neighborhood& n) const;

 private:
  RuleKind kind_;
  std::map<Neighborhood, std::uint8_t> entries_;
};

/// Category label of a neighbourhood, e.g. "inner" or "odd/left-end/even".
std::string category_of(const Neighborhood& n);

/// The same tuple with every resolved top-layer state (EV, ON) folded into
/// one wildcard. Each such class is one evolution law; for kinds without a
/// top layer in the tuple a law is a single tuple.
Neighborhood law_key(const Neighborhood& n);

struct CategoryStats {
  std::string name;
  std::size_t entries = 0;
  std::size_t laws = 0;
};

struct RuleMismatch {
  Neighborhood neighborhood;
  std::uint8_t learned = 0;
  std::uint8_t closed_form = 0;
};

struct ConsistencyReport {
  RuleKind kind = RuleKind::Ca3;
  std::vector<RuleMismatch> mismatches;
  std::vector<CategoryStats> categories;
  /// Laws whose members disagree on the successor.
  std::size_t law_conflicts = 0;
  bool sufficient_coverage = false;

  bool consistent() const { return mismatches.empty() && law_conflicts == 0; }
  std::size_t laws_in(std::string_view category) const;
};

inline constexpr std::uint64_t kDefaultLearnBound = 4096;

/// Learns the table for `kind` from oracle grids of every input in
/// [2, n_max]; each trajectory is laid out until it reaches 1.
RuleTable learn_rule_table(RuleKind kind, std::uint64_t n_max = kDefaultLearnBound);

ConsistencyReport check_rule_consistency(const RuleTable& t);

/// Inner categories and the number of laws a valid computation can reach,
/// e.g. {"inner", 16} for CA3. Coverage is sufficient when a learned table
/// reaches all of them.
std::vector<std::pair<std::string, std::size_t>> expected_inner_laws(RuleKind k);

/// Text dump: comment header, then one `# section` block per category with
/// `<kind> <cell>,<cell>,... -> <cell>` lines in a stable order.
std::string dump_rule_table(const RuleTable& t, const ConsistencyReport& r,
                            std::uint64_t n_max);

}  // namespace collatz_ca
