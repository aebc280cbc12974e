// Grid state and evolution.
//
// Rows are indexed from 0 (the input) downward; columns grow leftward. Each
// row stores a dense window of cells; everything outside the window is in
// the default state (empty, or unknown-parity on the CA1 top layer).

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "collatz_ca/cell.hpp"
#include "collatz_ca/digits.hpp"
#include "collatz_ca/rules.hpp"

namespace collatz_ca {

/// Inclusive column interval; empty when lo > hi.
struct ColumnRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  bool empty() const { return lo > hi; }
  std::int64_t width() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(std::int64_t c) const { return c >= lo && c <= hi; }
  bool operator==(const ColumnRange&) const = default;
};

/// Columns a new row may need beyond its predecessor's content on each side.
inline constexpr std::int64_t kWindowMargin = 2;

enum class Mode : std::uint8_t { Frontier, Synchronous };

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);

struct StepStats {
  std::uint64_t tick = 0;
  std::uint64_t cells_changed = 0;
  std::uint64_t cells_evaluated = 0;
  /// Leading rows known to sit at their fixpoint.
  std::size_t rows_stable = 0;
};

class Grid {
 public:
  explicit Grid(Automaton a) : automaton_(a) {}

  Automaton automaton() const noexcept { return automaton_; }
  std::size_t row_count() const noexcept { return rows_.size(); }

  Cell bottom(std::size_t row, std::int64_t col) const;
  TopState top(std::size_t row, std::int64_t col) const;

  ColumnRange window(std::size_t row) const;
  /// Columns holding a non-default cell in either layer.
  ColumnRange content(std::size_t row) const;
  ColumnRange bottom_content(std::size_t row) const;

  std::size_t stable_rows() const noexcept { return stable_rows_; }
  std::uint64_t ticks() const noexcept { return ticks_; }
  std::uint64_t cells_evaluated() const noexcept { return evaluations_; }

  /// Appends default rows until there are `count`. Each new row's window is
  /// its predecessor's content (or window, while that is still evolving)
  /// widened by kWindowMargin.
  void ensure_rows(std::size_t count);
  void truncate_rows(std::size_t count);

  /// Stores a fully evolved row (used for row 0 and oracle grids).
  void set_row(std::size_t row, ColumnRange window, std::span<const Cell> bottom,
               std::span<const TopState> top = {});

  /// True when both grids hold the same cells in rows [0, rows).
  bool same_cells(const Grid& other, std::size_t rows) const;

 private:
  struct Row {
    std::int64_t lo = 0;
    std::vector<std::uint8_t> bottom;  // Cell codes, index = col - lo
    std::vector<std::uint8_t> top;     // TopState values (CA1 only)
    // Frontier bookkeeping: bottom cells in [lo, bottom_next) and top cells
    // in (top_next, hi] are final.
    std::int64_t bottom_next = 0;
    std::int64_t top_next = 0;
    bool complete = false;

    std::int64_t hi() const { return lo + static_cast<std::int64_t>(bottom.size()) - 1; }
    ColumnRange range() const { return {lo, hi()}; }
    void resize_window(ColumnRange w, bool with_top);
  };

  Cell cell_of(const Row& r, std::int64_t col) const;
  TopState top_of(const Row& r, std::int64_t col) const;
  ColumnRange content_of(const Row& r) const;
  ColumnRange next_window(std::size_t prev) const;
  void trim_after_complete(std::size_t row);
  // Frontier pointers of one row as of the start of a tick.
  struct Front {
    ColumnRange range;
    std::int64_t bottom_next = 0;
    std::int64_t top_next = 0;
    bool complete = false;
    bool has_top = false;
  };
  static Front front_of(const Row& r);
  static bool bottom_final(const Front& f, std::int64_t col);
  static bool top_final(const Front& f, std::int64_t col);

  std::uint8_t eval_bottom(const Row& prev, const Row& self, std::int64_t col) const;
  std::uint8_t eval_top(const Row& self, std::int64_t col) const;

  friend StepStats step_synchronous(Grid& g);
  friend StepStats step_frontier(Grid& g);

  Automaton automaton_;
  std::vector<Row> rows_;
  std::size_t stable_rows_ = 0;
  std::uint64_t ticks_ = 0;
  std::uint64_t evaluations_ = 0;
};

/// Row 0 holds n's digits with the units digit (after stripping trailing
/// zeros for CA2/CA3) at `origin_column`.
Grid init_grid(const BigInt& n, Automaton a, std::int64_t origin_column = 0);

/// Several inputs on one row 0; origins[k] is the units column of inputs[k].
Grid init_grid_multi(std::span<const BigInt> inputs, Automaton a,
                     std::span<const std::int64_t> origins);

/// Digits stored in row 0 for input n: CA1 keeps all ternary digits, CA2 and
/// CA3 drop trailing zero digits.
DigitString initial_digits(const BigInt& n, Automaton a, std::int64_t origin_column = 0);

/// Every cell of every unstable row takes its transition from the pre-tick
/// state at once.
StepStats step_synchronous(Grid& g);

/// Evaluates only cells whose dependencies are final; each cell is evaluated
/// once and never changes afterwards.
StepStats step_frontier(Grid& g);

StepStats step(Grid& g, Mode mode);

class TickCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorruptRowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evolves until rows 0..m are at their fixpoint. Throws TickCapExceeded.
Grid& run_until_rows_stable(Grid& g, std::size_t m, std::uint64_t tick_cap,
                            Mode mode = Mode::Frontier);

enum class EvolveStatus : std::uint8_t { Done, RowCap, TickCap };

struct EvolveOptions {
  Mode mode = Mode::Frontier;
  std::size_t max_rows = 100'000;
  std::uint64_t tick_cap = 10'000'000;
};

/// Drives `g` tick by tick, materializing rows lazily, until `done` returns
/// true (it is called whenever more rows become stable), the row cap is hit
/// with every row stable, or the tick cap runs out.
EvolveStatus evolve(Grid& g, const EvolveOptions& opts,
                    const std::function<bool(const Grid&)>& done);

/// Value of the contiguous non-empty bottom cells of row k, or empty when
/// the row has none. Throws CorruptRowError when the cells have a gap.
std::optional<BigInt> extract_row(const Grid& g, std::size_t k);

/// Same, restricted to columns in `range`.
std::optional<BigInt> extract_row(const Grid& g, std::size_t k, ColumnRange range);

/// Next row the automaton produces from x, as digits plus placement.
/// CA1 results carry no leading zeros here; the grid pads them up to the
/// row-0 leading column.
DigitString row_oracle(const DigitString& x, Automaton a);

/// Grid built by arithmetic alone: rows from row_oracle until the first 1
/// plus one confirmation row (or `rows` rows when given), with the CA1 parity
/// layer and the CA2 attributes filled in directly.
Grid oracle_grid(Automaton a, const BigInt& n, std::int64_t origin_column = 0,
                 std::optional<std::size_t> rows = std::nullopt);

/// Neighbourhood tuple of cell (row, col) for rule `kind`.
Neighborhood neighborhood_at(const Grid& g, RuleKind kind, std::size_t row, std::int64_t col);

}  // namespace collatz_ca
