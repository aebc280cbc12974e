#include "collatz_ca/grid.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace collatz_ca {

namespace {

constexpr std::uint8_t kUp = static_cast<std::uint8_t>(TopState::UnknownParity);

ColumnRange widen(ColumnRange r, std::int64_t by) {
  if (r.empty()) return r;
  return {r.lo - by, r.hi + by};
}

ColumnRange intersect(ColumnRange a, ColumnRange b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

}  // namespace

std::string_view to_string(Mode m) {
  return m == Mode::Frontier ? "frontier" : "synchronous";
}

Mode mode_from_string(std::string_view s) {
  std::string low(s);
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (low == "frontier") return Mode::Frontier;
  if (low == "synchronous" || low == "sync") return Mode::Synchronous;
  throw std::invalid_argument("unknown mode: " + std::string(s));
}

void Grid::Row::resize_window(ColumnRange w, bool with_top) {
  if (w.empty()) w = {lo, lo - 1};
  std::vector<std::uint8_t> nb(static_cast<std::size_t>(w.width()), Cell::kEmptyCode);
  std::vector<std::uint8_t> nt(with_top ? nb.size() : 0, kUp);
  const ColumnRange keep = intersect(range(), w);
  for (std::int64_t c = keep.lo; c <= keep.hi; ++c) {
    nb[static_cast<std::size_t>(c - w.lo)] = bottom[static_cast<std::size_t>(c - lo)];
    if (with_top) nt[static_cast<std::size_t>(c - w.lo)] = top[static_cast<std::size_t>(c - lo)];
  }
  lo = w.lo;
  bottom = std::move(nb);
  top = std::move(nt);
}

Cell Grid::cell_of(const Row& r, std::int64_t col) const {
  if (col < r.lo || col > r.hi()) return Cell::empty();
  return Cell::from_code(r.bottom[static_cast<std::size_t>(col - r.lo)]);
}

TopState Grid::top_of(const Row& r, std::int64_t col) const {
  if (r.top.empty() || col < r.lo || col > r.hi()) return TopState::UnknownParity;
  return static_cast<TopState>(r.top[static_cast<std::size_t>(col - r.lo)]);
}

Cell Grid::bottom(std::size_t row, std::int64_t col) const {
  if (row >= rows_.size()) return Cell::empty();
  return cell_of(rows_[row], col);
}

TopState Grid::top(std::size_t row, std::int64_t col) const {
  if (row >= rows_.size()) return TopState::UnknownParity;
  return top_of(rows_[row], col);
}

ColumnRange Grid::window(std::size_t row) const { return rows_.at(row).range(); }

ColumnRange Grid::content_of(const Row& r) const {
  ColumnRange out{0, -1};
  for (std::size_t i = 0; i < r.bottom.size(); ++i) {
    const bool busy = r.bottom[i] != Cell::kEmptyCode || (!r.top.empty() && r.top[i] != kUp);
    if (!busy) continue;
    const std::int64_t c = r.lo + static_cast<std::int64_t>(i);
    if (out.empty()) out = {c, c};
    out.hi = c;
  }
  return out;
}

ColumnRange Grid::content(std::size_t row) const { return content_of(rows_.at(row)); }

ColumnRange Grid::bottom_content(std::size_t row) const {
  const Row& r = rows_.at(row);
  ColumnRange out{0, -1};
  for (std::size_t i = 0; i < r.bottom.size(); ++i) {
    if (r.bottom[i] == Cell::kEmptyCode) continue;
    const std::int64_t c = r.lo + static_cast<std::int64_t>(i);
    if (out.empty()) out = {c, c};
    out.hi = c;
  }
  return out;
}

ColumnRange Grid::next_window(std::size_t prev) const {
  const Row& p = rows_[prev];
  const bool settled = p.complete || prev < stable_rows_;
  return widen(settled ? content_of(p) : p.range(), kWindowMargin);
}

void Grid::ensure_rows(std::size_t count) {
  if (rows_.empty()) throw std::logic_error("ensure_rows: grid has no row 0");
  while (rows_.size() < count) {
    const ColumnRange w = next_window(rows_.size() - 1);
    Row r;
    r.lo = w.empty() ? 0 : w.lo;
    r.resize_window(w, has_top_layer(automaton_));
    r.bottom_next = r.lo;
    r.top_next = r.hi();
    r.complete = w.empty();
    rows_.push_back(std::move(r));
  }
}

void Grid::truncate_rows(std::size_t count) {
  if (count < rows_.size()) rows_.resize(count);
  stable_rows_ = std::min(stable_rows_, rows_.size());
}

void Grid::set_row(std::size_t row, ColumnRange window, std::span<const Cell> bottom,
                   std::span<const TopState> top) {
  if (row > rows_.size()) throw std::out_of_range("set_row: rows must be set in order");
  if (static_cast<std::int64_t>(bottom.size()) != window.width() ||
      (!top.empty() && top.size() != bottom.size())) {
    throw std::invalid_argument("set_row: cell count does not match window");
  }
  if (row == rows_.size()) rows_.emplace_back();
  Row& r = rows_[row];
  const bool with_top = has_top_layer(automaton_);
  r.lo = window.lo;
  r.bottom.resize(bottom.size());
  std::transform(bottom.begin(), bottom.end(), r.bottom.begin(),
                 [](Cell c) { return c.code(); });
  r.top.assign(with_top ? bottom.size() : 0, kUp);
  if (with_top && !top.empty()) {
    std::transform(top.begin(), top.end(), r.top.begin(),
                   [](TopState t) { return static_cast<std::uint8_t>(t); });
  }
  r.bottom_next = r.hi() + 1;
  r.complete = !with_top || !top.empty();
  r.top_next = r.complete ? r.lo - 1 : r.hi();
  stable_rows_ = 0;
  while (stable_rows_ < rows_.size() && rows_[stable_rows_].complete) ++stable_rows_;
}

bool Grid::same_cells(const Grid& other, std::size_t rows) const {
  if (automaton_ != other.automaton_) return false;
  if (row_count() < rows || other.row_count() < rows) return false;
  for (std::size_t i = 0; i < rows; ++i) {
    const ColumnRange a = window(i), b = other.window(i);
    const std::int64_t lo = std::min(a.empty() ? b.lo : a.lo, b.empty() ? a.lo : b.lo);
    const std::int64_t hi = std::max(a.hi, b.hi);
    for (std::int64_t c = lo; c <= hi; ++c) {
      if (bottom(i, c) != other.bottom(i, c) || top(i, c) != other.top(i, c)) return false;
    }
  }
  return true;
}

std::uint8_t Grid::eval_bottom(const Row& prev, const Row& self, std::int64_t col) const {
  switch (automaton_) {
    case Automaton::Ca3:
      return transition_ca3(cell_of(prev, col), cell_of(prev, col - 1), cell_of(prev, col - 2),
                            cell_of(self, col - 1))
          .code();
    case Automaton::Ca2:
      return transition_ca2(cell_of(prev, col), cell_of(prev, col - 1), cell_of(self, col - 1))
          .code();
    case Automaton::Ca1:
      return transition_ca1_bottom(cell_of(prev, col), top_of(prev, col), cell_of(prev, col - 1),
                                   top_of(prev, col - 1), cell_of(self, col - 1))
          .code();
  }
  return Cell::kEmptyCode;
}

std::uint8_t Grid::eval_top(const Row& self, std::int64_t col) const {
  return static_cast<std::uint8_t>(transition_ca1_top(cell_of(self, col), top_of(self, col + 1)));
}

StepStats step_synchronous(Grid& g) {
  StepStats stats;
  stats.tick = ++g.ticks_;
  const bool with_top = has_top_layer(g.automaton_);
  const std::size_t first = g.stable_rows_;
  const std::size_t count = g.rows_.size();
  std::vector<Grid::Row> fresh;
  std::vector<bool> changed;
  fresh.reserve(count - first);
  for (std::size_t i = first; i < count; ++i) {
    const Grid::Row& old = g.rows_[i];
    Grid::Row nr = old;
    if (i > 0) {
      const ColumnRange w = widen(g.content_of(g.rows_[i - 1]), kWindowMargin);
      nr.lo = w.empty() ? old.lo : w.lo;
      nr.bottom.assign(static_cast<std::size_t>(w.width()), Cell::kEmptyCode);
      nr.top.assign(with_top ? nr.bottom.size() : 0, kUp);
      for (std::int64_t c = w.lo; c <= w.hi; ++c) {
        nr.bottom[static_cast<std::size_t>(c - nr.lo)] = g.eval_bottom(g.rows_[i - 1], old, c);
      }
      stats.cells_evaluated += nr.bottom.size();
    }
    if (with_top) {
      for (std::int64_t c = nr.lo; c <= nr.hi(); ++c) {
        nr.top[static_cast<std::size_t>(c - nr.lo)] = g.eval_top(old, c);
      }
      stats.cells_evaluated += nr.top.size();
    }
    std::uint64_t diff = 0;
    const ColumnRange span{std::min(old.lo, nr.lo), std::max(old.hi(), nr.hi())};
    for (std::int64_t c = span.lo; c <= span.hi; ++c) {
      if (g.cell_of(old, c) != g.cell_of(nr, c)) ++diff;
      if (with_top && g.top_of(old, c) != g.top_of(nr, c)) ++diff;
    }
    stats.cells_changed += diff;
    changed.push_back(diff != 0 || old.range() != nr.range());
    fresh.push_back(std::move(nr));
  }
  for (std::size_t i = first; i < count; ++i) g.rows_[i] = std::move(fresh[i - first]);
  // A row that did not change while every row above it sat at its fixpoint
  // is at its own fixpoint, since it only reads itself and the row above.
  std::size_t stable = first;
  while (stable < count && !changed[stable - first]) ++stable;
  g.stable_rows_ = stable;
  g.evaluations_ += stats.cells_evaluated;
  stats.rows_stable = stable;
  return stats;
}

Grid::Front Grid::front_of(const Row& r) {
  return {r.range(), r.bottom_next, r.top_next, r.complete, !r.top.empty()};
}

bool Grid::bottom_final(const Front& f, std::int64_t col) {
  return !f.range.contains(col) || f.complete || col < f.bottom_next;
}

bool Grid::top_final(const Front& f, std::int64_t col) {
  if (!f.has_top || !f.range.contains(col) || f.complete) return true;
  return f.bottom_next > f.range.hi && col > f.top_next;
}

void Grid::trim_after_complete(std::size_t row) {
  if (row + 1 >= rows_.size()) return;
  Row& next = rows_[row + 1];
  const ColumnRange target = intersect(next.range(), widen(content_of(rows_[row]), kWindowMargin));
  if (target == next.range()) return;
  const ColumnRange old = next.range();
  for (std::int64_t c = old.lo; c <= old.hi; ++c) {
    if (target.contains(c)) continue;
    if (cell_of(next, c) != Cell::empty() || top_of(next, c) != TopState::UnknownParity) {
      throw std::logic_error("window trim would drop a non-default cell");
    }
  }
  next.resize_window(target, has_top_layer(automaton_));
  if (target.empty()) {
    next.bottom.clear();
    next.top.clear();
  }
  next.bottom_next = std::clamp(next.bottom_next, next.lo, next.hi() + 1);
  next.top_next = std::clamp(next.top_next, next.lo - 1, next.hi());
  if (next.range().empty()) next.complete = true;
}

StepStats step_frontier(Grid& g) {
  StepStats stats;
  stats.tick = ++g.ticks_;
  const bool with_top = has_top_layer(g.automaton_);
  const std::size_t count = g.rows_.size();
  // Readiness is judged on the state at the start of the tick.
  std::vector<Grid::Front> before(count);
  for (std::size_t i = g.stable_rows_ > 0 ? g.stable_rows_ - 1 : 0; i < count; ++i) {
    before[i] = Grid::front_of(g.rows_[i]);
  }
  for (std::size_t i = g.stable_rows_; i < count; ++i) {
    const Grid::Front& was = before[i];
    if (was.complete) continue;
    Grid::Row& row = g.rows_[i];
    if (i > 0 && was.bottom_next <= was.range.hi) {
      const std::int64_t c = was.bottom_next;
      const Grid::Front& prev_was = before[i - 1];
      bool ready = g.bottom_final(prev_was, c) && g.bottom_final(prev_was, c - 1);
      if (g.automaton_ == Automaton::Ca3) ready = ready && g.bottom_final(prev_was, c - 2);
      if (with_top) ready = ready && g.top_final(prev_was, c) && g.top_final(prev_was, c - 1);
      if (ready) {
        const std::uint8_t v = g.eval_bottom(g.rows_[i - 1], row, c);
        auto& slot = row.bottom[static_cast<std::size_t>(c - row.lo)];
        if (slot != v) ++stats.cells_changed;
        slot = v;
        ++row.bottom_next;
        ++stats.cells_evaluated;
      }
    }
    if (with_top && was.top_next >= was.range.lo && was.top_next < was.bottom_next) {
      const std::int64_t c = was.top_next;
      const std::uint8_t v = g.eval_top(row, c);
      auto& slot = row.top[static_cast<std::size_t>(c - row.lo)];
      if (slot != v) ++stats.cells_changed;
      slot = v;
      --row.top_next;
      ++stats.cells_evaluated;
    }
    if (row.bottom_next > row.hi() && (!with_top || row.top_next < row.lo)) row.complete = true;
  }
  for (std::size_t i = g.stable_rows_; i < count; ++i) {
    if (g.rows_[i].complete && !before[i].complete) g.trim_after_complete(i);
  }
  while (g.stable_rows_ < count && g.rows_[g.stable_rows_].complete) ++g.stable_rows_;
  g.evaluations_ += stats.cells_evaluated;
  stats.rows_stable = g.stable_rows_;
  return stats;
}

StepStats step(Grid& g, Mode mode) {
  return mode == Mode::Frontier ? step_frontier(g) : step_synchronous(g);
}

DigitString initial_digits(const BigInt& n, Automaton a, std::int64_t origin_column) {
  if (n < 1) throw std::invalid_argument("initial_digits: n must be positive");
  const int base = base_of(a);
  DigitString d = to_digits(a == Automaton::Ca1 ? n : strip_factors(n, base), base);
  d.offset = origin_column;
  return d;
}

Grid init_grid_multi(std::span<const BigInt> inputs, Automaton a,
                     std::span<const std::int64_t> origins) {
  if (inputs.empty()) throw std::invalid_argument("init_grid_multi: no inputs");
  if (inputs.size() != origins.size()) {
    throw std::invalid_argument("init_grid_multi: one origin per input required");
  }
  std::vector<DigitString> placed;
  ColumnRange span{origins[0], origins[0] - 1};
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    placed.push_back(initial_digits(inputs[k], a, origins[k]));
    const ColumnRange r{origins[k], origins[k] + static_cast<std::int64_t>(placed.back().size()) - 1};
    span = span.empty() ? r : ColumnRange{std::min(span.lo, r.lo), std::max(span.hi, r.hi)};
  }
  const ColumnRange w = widen(span, kWindowMargin);
  std::vector<Cell> cells(static_cast<std::size_t>(w.width()), Cell::empty());
  for (const auto& d : placed) {
    const Parity attr = a == Automaton::Ca2 ? parity_of(d.digits[0]) : Parity::None;
    for (std::size_t i = 0; i < d.size(); ++i) {
      auto& slot = cells[static_cast<std::size_t>(d.offset + static_cast<std::int64_t>(i) - w.lo)];
      if (!slot.is_empty()) throw std::invalid_argument("init_grid_multi: inputs overlap");
      slot = Cell::digit(d.digits[i], attr);
    }
  }
  Grid g(a);
  g.set_row(0, w, cells);
  return g;
}

Grid init_grid(const BigInt& n, Automaton a, std::int64_t origin_column) {
  const std::int64_t origin[] = {origin_column};
  return init_grid_multi(std::span<const BigInt>(&n, 1), a, origin);
}

Grid& run_until_rows_stable(Grid& g, std::size_t m, std::uint64_t tick_cap, Mode mode) {
  EvolveOptions opts{mode, m + 1, tick_cap};
  const auto status = evolve(g, opts, [m](const Grid& gr) { return gr.stable_rows() > m; });
  if (status == EvolveStatus::TickCap) {
    throw TickCapExceeded("rows 0.." + std::to_string(m) + " not stable after " +
                          std::to_string(tick_cap) + " ticks");
  }
  return g;
}

EvolveStatus evolve(Grid& g, const EvolveOptions& opts,
                    const std::function<bool(const Grid&)>& done) {
  if (g.row_count() == 0) throw std::invalid_argument("evolve: empty grid");
  if (opts.max_rows == 0 || opts.tick_cap == 0) {
    throw std::invalid_argument("evolve: caps must be positive");
  }
  std::size_t seen_stable = static_cast<std::size_t>(-1);
  std::uint64_t ticks = 0;
  while (true) {
    if (g.stable_rows() != seen_stable) {
      seen_stable = g.stable_rows();
      if (done(g)) return EvolveStatus::Done;
    }
    const std::size_t rows = g.row_count();
    if (rows >= opts.max_rows) {
      if (g.stable_rows() >= rows) return EvolveStatus::RowCap;
    } else if (opts.mode == Mode::Synchronous) {
      if (g.stable_rows() == rows) g.ensure_rows(rows + 1);
    } else {
      // Start the next row once its predecessor has begun to settle.
      if (g.stable_rows() == rows || g.bottom_content(rows - 1).width() > 0 ||
          g.window(rows - 1).empty()) {
        g.ensure_rows(rows + 1);
      }
    }
    if (ticks >= opts.tick_cap) return EvolveStatus::TickCap;
    step(g, opts.mode);
    ++ticks;
  }
}

std::optional<BigInt> extract_row(const Grid& g, std::size_t k, ColumnRange range) {
  const ColumnRange w = intersect(g.window(k), range);
  std::optional<std::int64_t> lo, hi;
  for (std::int64_t c = w.lo; c <= w.hi; ++c) {
    if (g.bottom(k, c).is_empty()) continue;
    if (!lo) lo = c;
    else if (*hi != c - 1) {
      throw CorruptRowError("row " + std::to_string(k) + " has a gap at column " +
                            std::to_string(c - 1));
    }
    hi = c;
  }
  if (!lo) return std::nullopt;
  const int base = base_of(g.automaton());
  BigInt value = 0;
  for (std::int64_t c = *hi; c >= *lo; --c) {
    value *= base;
    value += g.bottom(k, c).value();
  }
  return value;
}

std::optional<BigInt> extract_row(const Grid& g, std::size_t k) {
  return extract_row(g, k, g.window(k));
}

DigitString row_oracle(const DigitString& x, Automaton a) {
  const int base = base_of(a);
  if (x.base != base) throw std::invalid_argument("row_oracle: digit base does not match");
  const BigInt value = from_digits(x);
  if (value < 1) throw std::invalid_argument("row_oracle: row value must be positive");
  const bool odd = bit_test(value, 0);
  BigInt next;
  std::int64_t offset = x.offset;
  switch (a) {
    case Automaton::Ca1:
      next = odd ? BigInt((3 * value + 1) / 2) : BigInt(value / 2);
      if (odd) offset -= 1;
      break;
    case Automaton::Ca2:
      if (odd) {
        next = 3 * value + 1;
        const unsigned k = valuation(next, 4);
        next = strip_factors(next, 4);
        offset += k;
      } else {
        next = value / 2;
        offset += 1;
      }
      break;
    case Automaton::Ca3: {
      next = odd ? BigInt(3 * value + 1) : value;
      const unsigned k = valuation(next, 2);
      next >>= k;
      offset += k;
      break;
    }
  }
  DigitString out = to_digits(next, base);
  out.offset = offset;
  return out;
}

Grid oracle_grid(Automaton a, const BigInt& n, std::int64_t origin_column,
                 std::optional<std::size_t> rows) {
  std::vector<DigitString> seq{initial_digits(n, a, origin_column)};
  std::optional<std::size_t> first_one;
  while (true) {
    if (!first_one && from_digits(seq.back()) == 1) first_one = seq.size() - 1;
    if (rows ? seq.size() >= *rows : (first_one && seq.size() >= *first_one + 2)) break;
    seq.push_back(row_oracle(seq.back(), a));
  }
  // CA1 never drops leading digits: every row reaches the row-0 leading column.
  const std::int64_t lead = origin_column + static_cast<std::int64_t>(seq[0].size()) - 1;
  Grid g(a);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    DigitString& d = seq[i];
    if (a == Automaton::Ca1) {
      while (d.offset + static_cast<std::int64_t>(d.size()) - 1 < lead) d.digits.push_back(0);
    }
    const ColumnRange w{d.offset - 3, d.offset + static_cast<std::int64_t>(d.size()) + 2};
    std::vector<Cell> bottom(static_cast<std::size_t>(w.width()), Cell::empty());
    std::vector<TopState> top;
    const bool odd = (from_digits(d) & 1) != 0;
    const Parity attr = a == Automaton::Ca2 ? (odd ? Parity::Odd : Parity::Even) : Parity::None;
    for (std::size_t k = 0; k < d.size(); ++k) {
      bottom[static_cast<std::size_t>(d.offset + static_cast<std::int64_t>(k) - w.lo)] =
          Cell::digit(d.digits[k], attr);
    }
    if (a == Automaton::Ca1) {
      top.assign(bottom.size(), TopState::UnknownParity);
      int sum = 0;
      for (std::size_t k = d.size(); k-- > 0;) {
        sum += d.digits[k];
        top[static_cast<std::size_t>(d.offset + static_cast<std::int64_t>(k) - w.lo)] =
            (sum & 1) ? TopState::OddNormal : TopState::Even;
      }
      if (odd) top[static_cast<std::size_t>(d.offset - 1 - w.lo)] = TopState::OddSpecial;
    }
    g.set_row(i, w, bottom, top);
  }
  return g;
}

}  // namespace collatz_ca
