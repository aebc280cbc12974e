#include "collatz_ca/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace collatz_ca {

MapVariant map_of(Automaton a) {
  switch (a) {
    case Automaton::Ca1: return MapVariant::T1;
    case Automaton::Ca2: return MapVariant::T2;
    case Automaton::Ca3: return MapVariant::T3;
  }
  return MapVariant::T;
}

BigInt row_zero_value(const BigInt& n, Automaton a) {
  return from_digits(initial_digits(n, a));
}

namespace {

EvolveOptions options_of(const RunConfig& cfg) {
  if (cfg.max_rows == 0 || cfg.tick_cap == 0) {
    throw std::invalid_argument("run config: caps must be positive");
  }
  return {cfg.mode, cfg.max_rows, cfg.tick_cap};
}

}  // namespace

TrajectoryRecord run_single(const BigInt& n, const RunConfig& cfg) {
  Grid g = init_grid(n, cfg.variant, 0);
  TrajectoryRecord rec;
  rec.input = n;
  rec.variant = cfg.variant;
  std::size_t next = 0;
  auto done = [&](const Grid& gr) {
    for (; next < gr.stable_rows(); ++next) {
      if (rec.ca_steps_to_one) continue;
      const auto v = extract_row(gr, next);
      if (!v) throw CorruptRowError("row " + std::to_string(next) + " is empty");
      rec.iterates.push_back(*v);
      if (*v == 1) rec.ca_steps_to_one = next;
    }
    return rec.ca_steps_to_one && gr.stable_rows() > *rec.ca_steps_to_one + 1;
  };
  evolve(g, options_of(cfg), done);
  rec.reached_one = rec.ca_steps_to_one.has_value();
  rec.rows_computed = g.stable_rows();
  rec.ticks_used = g.ticks();
  return rec;
}

MatchReport verify_against_oracle(const BigInt& n, Automaton variant, const RunConfig& cfg) {
  RunConfig run = cfg;
  run.variant = variant;
  const TrajectoryRecord rec = run_single(n, run);
  const TrajectoryReport want = oracle_trajectory(map_of(variant), row_zero_value(n, variant));
  MatchReport report;
  report.input = n;
  report.variant = variant;
  const std::size_t len = std::max(rec.iterates.size(), want.iterates.size());
  for (std::size_t i = 0; i < len; ++i) {
    const bool have = i < rec.iterates.size(), need = i < want.iterates.size();
    if (have && need && rec.iterates[i] == want.iterates[i]) {
      ++report.rows_compared;
      continue;
    }
    report.first_divergence = i;
    if (need) report.expected = want.iterates[i];
    if (have) report.actual = rec.iterates[i];
    break;
  }
  report.match = !report.first_divergence && rec.reached_one == want.reached_one;
  return report;
}

unsigned worker_count() {
  if (const char* env = std::getenv("COLLATZ_CA_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("COLLATZ_CA_THREADS is not a number: ") + env);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = cursor++; i < count && !failed; i = cursor++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

CollisionError::CollisionError(std::size_t row, BigInt left, BigInt right, ColumnRange columns)
    : std::runtime_error("collision at row " + std::to_string(row) + " between inputs " +
                         left.str() + " and " + right.str() + " near columns " +
                         std::to_string(columns.lo) + ".." + std::to_string(columns.hi)),
      row_(row),
      left_(std::move(left)),
      right_(std::move(right)),
      columns_(columns) {}

std::vector<TrajectoryRecord> run_batch_stacked(const BatchConfig& cfg, const RunConfig& run) {
  std::vector<TrajectoryRecord> out(cfg.inputs.size());
  parallel_for(cfg.inputs.size(), [&](std::size_t i) { out[i] = run_single(cfg.inputs[i], run); });
  return out;
}

std::vector<std::int64_t> shared_origins(std::span<const BigInt> inputs, Automaton a,
                                         std::span<const std::int64_t> spacings) {
  if (!inputs.empty() && spacings.size() != inputs.size() - 1) {
    throw std::invalid_argument("shared grid: need one spacing per adjacent pair of inputs");
  }
  std::vector<std::int64_t> origins;
  std::int64_t k = 0;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    if (j > 0) {
      if (spacings[j - 1] < 0) throw std::invalid_argument("shared grid: negative spacing");
      k += static_cast<std::int64_t>(initial_digits(inputs[j - 1], a).size()) + spacings[j - 1];
    }
    origins.push_back(k);
  }
  return origins;
}

std::int64_t auto_spacing(std::span<const BigInt> inputs, Automaton a, std::int64_t guard_gap) {
  std::uint64_t longest = 0;
  for (const auto& n : inputs) {
    const auto steps = steps_to_one(map_of(a), row_zero_value(n, a));
    if (!steps) throw std::runtime_error("auto spacing: no trajectory estimate for " + n.str());
    longest = std::max(longest, *steps + 1);
  }
  return static_cast<std::int64_t>(longest) + 2 * guard_gap;
}

namespace {

std::vector<ColumnRange> segments_of(const Grid& g, std::size_t row) {
  std::vector<ColumnRange> segs;
  const ColumnRange w = g.window(row);
  for (std::int64_t c = w.lo; c <= w.hi; ++c) {
    const bool busy = !g.bottom(row, c).is_empty() || g.top(row, c) != TopState::UnknownParity;
    if (!busy) continue;
    if (!segs.empty() && segs.back().hi == c - 1) {
      segs.back().hi = c;
    } else {
      segs.push_back({c, c});
    }
  }
  return segs;
}

std::vector<TrajectoryRecord> run_shared_once(const std::vector<BigInt>& inputs,
                                              std::span<const std::int64_t> spacings,
                                              std::int64_t guard_gap, const RunConfig& run) {
  const std::size_t m = inputs.size();
  const auto origins = shared_origins(inputs, run.variant, spacings);
  Grid g = init_grid_multi(inputs, run.variant, origins);
  std::vector<TrajectoryRecord> recs(m);
  for (std::size_t j = 0; j < m; ++j) {
    recs[j].input = inputs[j];
    recs[j].variant = run.variant;
  }
  std::vector<ColumnRange> prev;
  std::size_t next = 0;
  auto check_row = [&](const Grid& gr, std::size_t row) {
    const auto segs = segments_of(gr, row);
    if (segs.size() < m) {
      // Report the first pair of previous segments now covered by one.
      std::size_t j = 0;
      ColumnRange at = segs.empty() ? ColumnRange{} : segs.front();
      for (std::size_t p = 0; p + 1 < prev.size(); ++p) {
        auto hit = std::find_if(segs.begin(), segs.end(), [&](ColumnRange s) {
          return s.lo <= prev[p].hi + kWindowMargin && s.hi >= prev[p + 1].lo - kWindowMargin;
        });
        if (hit != segs.end()) {
          j = p;
          at = *hit;
          break;
        }
      }
      throw CollisionError(row, inputs[j + 1], inputs[j], at);
    }
    if (segs.size() > m) {
      throw CorruptRowError("shared grid row " + std::to_string(row) + " has " +
                            std::to_string(segs.size()) + " segments for " +
                            std::to_string(m) + " inputs");
    }
    for (std::size_t j = 0; j + 1 < m; ++j) {
      if (segs[j + 1].lo - segs[j].hi - 1 < guard_gap) {
        throw CollisionError(row, inputs[j + 1], inputs[j], {segs[j].hi + 1, segs[j + 1].lo - 1});
      }
    }
    return segs;
  };
  auto done = [&](const Grid& gr) {
    for (; next < gr.stable_rows(); ++next) {
      prev = check_row(gr, next);
      for (std::size_t j = 0; j < m; ++j) {
        if (recs[j].ca_steps_to_one) continue;
        const auto v = extract_row(gr, next, prev[j]);
        if (!v) throw CorruptRowError("shared grid: input " + inputs[j].str() + " lost its digits");
        recs[j].iterates.push_back(*v);
        if (*v == 1) recs[j].ca_steps_to_one = next;
      }
    }
    std::size_t last = 0;
    for (const auto& r : recs) {
      if (!r.ca_steps_to_one) return false;
      last = std::max(last, *r.ca_steps_to_one);
    }
    return gr.stable_rows() > last + 1;
  };
  evolve(g, options_of(run), done);
  for (auto& r : recs) {
    r.reached_one = r.ca_steps_to_one.has_value();
    r.rows_computed = g.stable_rows();
    r.ticks_used = g.ticks();
  }
  return recs;
}

}  // namespace

std::vector<TrajectoryRecord> run_shared_grid(const BatchConfig& cfg, const RunConfig& run) {
  if (cfg.guard_gap < 0) throw std::invalid_argument("shared grid: negative guard gap");
  if (cfg.inputs.empty()) return {};
  const std::size_t pairs = cfg.inputs.size() - 1;
  if (cfg.spacings) return run_shared_once(cfg.inputs, *cfg.spacings, cfg.guard_gap, run);
  std::int64_t spacing = auto_spacing(cfg.inputs, run.variant, cfg.guard_gap);
  constexpr int kRetries = 3;
  for (int attempt = 0;; ++attempt) {
    const std::vector<std::int64_t> spacings(pairs, spacing);
    try {
      return run_shared_once(cfg.inputs, spacings, cfg.guard_gap, run);
    } catch (const CollisionError&) {
      if (attempt == kRetries) throw;
      spacing *= 2;
    }
  }
}

ClassificationResult classify_trajectory(const BigInt& n, Automaton variant,
                                         std::uint64_t step_cap) {
  const MapVariant v = map_of(variant);
  const BigInt start = row_zero_value(n, variant);
  ClassificationResult out;
  out.steps_to_one = steps_to_one(v, start, step_cap);
  if (out.steps_to_one) {
    out.classification = Classification::Convergent;
    return out;
  }
  BigInt slow = apply_map(v, start);
  BigInt fast = apply_map(v, slow);
  for (std::uint64_t i = 0; slow != fast && i < step_cap; ++i) {
    slow = apply_map(v, slow);
    fast = apply_map(v, apply_map(v, fast));
  }
  if (slow != fast) return out;
  BigInt low = slow;
  for (BigInt x = apply_map(v, slow); x != slow; x = apply_map(v, x)) low = std::min(low, x);
  if (low != 1) out.cycle_witness = low;
  return out;
}

}  // namespace collatz_ca
