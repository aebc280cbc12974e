#include "doctest.h"

#include <cstdlib>

#include "collatz_ca/engine.hpp"

using namespace collatz_ca;

namespace {

RunConfig config(Automaton a) {
  RunConfig c;
  c.variant = a;
  return c;
}

BatchConfig batch(std::vector<BigInt> inputs, BatchMode mode) {
  BatchConfig b;
  b.inputs = std::move(inputs);
  b.mode = mode;
  return b;
}

}  // namespace

TEST_CASE("run_single") {
  const auto ca2 = run_single(7, config(Automaton::Ca2));
  REQUIRE(ca2.iterates.size() >= 5);
  CHECK(std::vector<BigInt>(ca2.iterates.begin(), ca2.iterates.begin() + 5) ==
        std::vector<BigInt>{7, 22, 11, 34, 17});
  CHECK(ca2.reached_one);

  const auto one = run_single(1, config(Automaton::Ca3));
  CHECK(one.reached_one);
  CHECK(one.ca_steps_to_one == 0u);
  CHECK(one.iterates == std::vector<BigInt>{1});

  const auto ca3 = run_single(27, config(Automaton::Ca3));
  CHECK(ca3.iterates == oracle_trajectory(MapVariant::T3, 27).iterates);
  CHECK(ca3.ca_steps_to_one == ca3.iterates.size() - 1);
  CHECK(ca3.ticks_used > 0);
}

TEST_CASE("caps leave the record undetermined") {
  RunConfig c = config(Automaton::Ca3);
  c.max_rows = 5;
  const auto r = run_single(27, c);
  CHECK_FALSE(r.reached_one);
  CHECK_FALSE(r.ca_steps_to_one);
  CHECK(r.iterates.size() == 5);
  c.max_rows = 100000;
  c.tick_cap = 3;
  CHECK_FALSE(run_single(27, c).reached_one);
  c.tick_cap = 0;
  CHECK_THROWS_AS(run_single(27, c), std::invalid_argument);
}

TEST_CASE("verify_against_oracle") {
  const auto c1 = verify_against_oracle(7, Automaton::Ca1);
  CHECK(c1.match);
  CHECK(c1.rows_compared == 12);
  CHECK(verify_against_oracle(7, Automaton::Ca3).match);
  CHECK(verify_against_oracle(7, Automaton::Ca2).rows_compared == 9);
  for (auto a : {Automaton::Ca1, Automaton::Ca2, Automaton::Ca3}) {
    for (std::uint64_t n = 1; n <= 512; ++n) REQUIRE(verify_against_oracle(n, a).match);
  }
}

TEST_CASE("stacked batches equal sequential runs") {
  std::vector<BigInt> inputs;
  for (int n = 2; n <= 301; ++n) inputs.push_back(n);
  const auto recs = run_batch_stacked(batch(inputs, BatchMode::Stacked), config(Automaton::Ca3));
  REQUIRE(recs.size() == inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto seq = run_single(inputs[i], config(Automaton::Ca3));
    REQUIRE(recs[i].input == inputs[i]);
    REQUIRE(recs[i].iterates == seq.iterates);
    REQUIRE(recs[i].ticks_used == seq.ticks_used);
  }
  const auto trio = run_batch_stacked(batch({183, 120767, 53132499}, BatchMode::Stacked),
                                       config(Automaton::Ca3));
  for (const auto& r : trio) CHECK(r.reached_one);
  CHECK(trio[0].ca_steps_to_one == 33u);
  CHECK(trio[1].ca_steps_to_one == 63u);
  CHECK(trio[2].ca_steps_to_one == 108u);
}

TEST_CASE("worker count follows the environment") {
  ::setenv("COLLATZ_CA_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  ::setenv("COLLATZ_CA_THREADS", "0", 1);
  CHECK(worker_count() >= 1);
  ::setenv("COLLATZ_CA_THREADS", "x", 1);
  CHECK_THROWS_AS(worker_count(), std::invalid_argument);
  ::setenv("COLLATZ_CA_THREADS", "4", 1);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::count(hits.begin(), hits.end(), 1) == 1000);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  ::unsetenv("COLLATZ_CA_THREADS");
}

TEST_CASE("shared grid origins follow the spacing recurrence") {
  const std::vector<BigInt> inputs{5, 7, 1};
  const std::vector<std::int64_t> gaps{4, 0};
  // 5 = 101b (3 cells), 7 = 111b (3 cells)
  CHECK(shared_origins(inputs, Automaton::Ca3, gaps) == std::vector<std::int64_t>{0, 7, 10});
  const std::vector<std::int64_t> short_gaps{1};
  CHECK_THROWS_AS(shared_origins(inputs, Automaton::Ca3, short_gaps), std::invalid_argument);
}

TEST_CASE("shared grid matches stacked runs") {
  for (auto a : {Automaton::Ca1, Automaton::Ca2, Automaton::Ca3}) {
    const auto b = batch({183, 120767, 53132499}, BatchMode::Shared);
    const auto shared = run_shared_grid(b, config(a));
    const auto stacked = run_batch_stacked(b, config(a));
    REQUIRE(shared.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CAPTURE(to_string(a));
      CHECK(shared[i].reached_one);
      CHECK(shared[i].iterates == stacked[i].iterates);
    }
  }
  const auto single = run_shared_grid(batch({27}, BatchMode::Shared), config(Automaton::Ca3));
  CHECK(single[0].iterates == run_single(27, config(Automaton::Ca3)).iterates);
}

TEST_CASE("zero spacing collides") {
  auto b = batch({5, 7}, BatchMode::Shared);
  b.spacings = std::vector<std::int64_t>{0};
  try {
    run_shared_grid(b, config(Automaton::Ca3));
    FAIL("expected a collision");
  } catch (const CollisionError& e) {
    CHECK(e.row() == 0);
    CHECK(e.left_input() == 7);
    CHECK(e.right_input() == 5);
  }
}

TEST_CASE("larger spacing keeps succeeding") {
  auto b = batch({27, 31, 41}, BatchMode::Shared);
  const auto base = run_batch_stacked(b, config(Automaton::Ca3));
  bool succeeded = false;
  for (std::int64_t gap = 2; gap <= 160; gap += 6) {
    b.spacings = std::vector<std::int64_t>{gap, gap};
    try {
      const auto recs = run_shared_grid(b, config(Automaton::Ca3));
      for (std::size_t i = 0; i < 3; ++i) REQUIRE(recs[i].iterates == base[i].iterates);
      succeeded = true;
    } catch (const CollisionError&) {
      CAPTURE(gap);
      REQUIRE_FALSE(succeeded);
    }
  }
  CHECK(succeeded);
}

TEST_CASE("classify_trajectory") {
  CHECK(classify_trajectory(7, Automaton::Ca1).classification == Classification::Convergent);
  CHECK(classify_trajectory(1, Automaton::Ca3).classification == Classification::Convergent);
  for (std::uint64_t n = 2; n <= 16384; ++n) {
    const auto c = classify_trajectory(n, Automaton::Ca3);
    REQUIRE(c.classification == Classification::Convergent);
    REQUIRE_FALSE(c.cycle_witness);
  }
  const auto capped = classify_trajectory(27, Automaton::Ca1, 10);
  CHECK(capped.classification == Classification::Undetermined);
  CHECK_FALSE(capped.cycle_witness);
}
