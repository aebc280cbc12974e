// Trajectory runs on the automata, oracle checks and batch execution.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "collatz_ca/digits.hpp"
#include "collatz_ca/grid.hpp"

namespace collatz_ca {

/// Modified map each automaton computes: CA1 -> T1, CA2 -> T2, CA3 -> T3.
MapVariant map_of(Automaton a);

/// Value held by row 0 for input n (CA2 strips factors of 4, CA3 of 2).
BigInt row_zero_value(const BigInt& n, Automaton a);

struct RunConfig {
  Automaton variant = Automaton::Ca3;
  std::size_t max_rows = 100'000;
  std::uint64_t tick_cap = 10'000'000;
  Mode mode = Mode::Frontier;
};

struct TrajectoryRecord {
  BigInt input;
  Automaton variant = Automaton::Ca3;
  /// Row values from row 0 up to the first 1 (inclusive).
  std::vector<BigInt> iterates;
  bool reached_one = false;
  std::size_t rows_computed = 0;
  std::optional<std::size_t> ca_steps_to_one;
  std::uint64_t ticks_used = 0;
};

/// Evolves one grid until a row equals 1 and the row below it has settled,
/// or a cap runs out (reached_one = false).
TrajectoryRecord run_single(const BigInt& n, const RunConfig& cfg);

struct MatchReport {
  BigInt input;
  Automaton variant = Automaton::Ca3;
  bool match = false;
  std::size_t rows_compared = 0;
  std::optional<std::size_t> first_divergence;
  std::optional<BigInt> expected;
  std::optional<BigInt> actual;
};

/// Compares the CA rows with the oracle trajectory of map_of(variant)
/// started at row_zero_value(n), up to the first 1.
MatchReport verify_against_oracle(const BigInt& n, Automaton variant,
                                  const RunConfig& cfg = {});

/// Worker count: COLLATZ_CA_THREADS when set and positive, otherwise the
/// hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on worker_count() threads. The first
/// exception thrown by a body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

enum class BatchMode : std::uint8_t { Stacked, Shared };

struct BatchConfig {
  std::vector<BigInt> inputs;
  BatchMode mode = BatchMode::Stacked;
  /// Empty columns between consecutive inputs; empty means auto.
  std::optional<std::vector<std::int64_t>> spacings;
  std::int64_t guard_gap = 2;
};

class CollisionError : public std::runtime_error {
 public:
  CollisionError(std::size_t row, BigInt left, BigInt right, ColumnRange columns);

  std::size_t row() const noexcept { return row_; }
  const BigInt& left_input() const noexcept { return left_; }
  const BigInt& right_input() const noexcept { return right_; }
  ColumnRange columns() const noexcept { return columns_; }

 private:
  std::size_t row_;
  BigInt left_, right_;
  ColumnRange columns_;
};

/// One grid per input, evolved on a worker pool; output order = input order.
std::vector<TrajectoryRecord> run_batch_stacked(const BatchConfig& cfg, const RunConfig& run);

/// Units column of every input on a shared row 0. Input 0 sits at column 0
/// and input j at k_j = k_{j-1} + N_{j-1} + spacings[j-1], so later inputs
/// lie further left.
std::vector<std::int64_t> shared_origins(std::span<const BigInt> inputs, Automaton a,
                                         std::span<const std::int64_t> spacings);

/// Auto spacing: the longest oracle trajectory (rows) plus 2 * guard_gap.
std::int64_t auto_spacing(std::span<const BigInt> inputs, Automaton a, std::int64_t guard_gap);

/// All inputs on one grid. Every settled row is split into one segment per
/// input; a lost segment or a gap narrower than guard_gap raises
/// CollisionError. With auto spacing the run is retried up to 3 times with
/// doubled spacing before the last CollisionError propagates.
std::vector<TrajectoryRecord> run_shared_grid(const BatchConfig& cfg, const RunConfig& run);

struct ClassificationResult {
  Classification classification = Classification::Undetermined;
  std::optional<std::uint64_t> steps_to_one;
  /// Smallest member of a non-trivial cycle, if one was found.
  std::optional<BigInt> cycle_witness;
};

/// Floyd cycle search over the oracle sequence of map_of(variant).
ClassificationResult classify_trajectory(const BigInt& n, Automaton variant,
                                         std::uint64_t step_cap = kDefaultStepCap);

}  // namespace collatz_ca
