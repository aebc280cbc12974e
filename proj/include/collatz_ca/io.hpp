// Serialization of run results and grid renderings.

#pragma once

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

#include "collatz_ca/engine.hpp"
#include "collatz_ca/metrics.hpp"

namespace collatz_ca {

/// Integers up to 2^64 - 1 become JSON numbers, larger ones decimal strings.
nlohmann::json big_to_json(const BigInt& v);

/// Flat object: input, variant, iterates, reached_one, ca_steps_to_one
/// (null when not reached), ticks_used.
nlohmann::json to_json(const TrajectoryRecord& r);
std::string to_jsonl(const TrajectoryRecord& r);

/// Space-separated iterates, e.g. "7 11 17 13 5 1".
std::string to_text(const TrajectoryRecord& r);

inline constexpr const char* kRunCsvHeader = "input,variant,reached_one,ca_steps_to_one,ticks_used,iterates";
/// The iterates column is space-separated.
std::string to_csv_row(const TrajectoryRecord& r);

inline constexpr const char* kEfficiencyCsvHeader = "n,variant,ca_steps,tst,ratio";
/// Ratio rendered with six decimals.
std::string to_csv_row(const EfficiencyRecord& r);
/// "# mean <variant> [lo,hi] <decimal> <exact p/q>"
std::string summary_line(const EfficiencySummary& s);

/// Text snapshot of rows [0, rows): header "variant rows cols origin", then
/// one line per row with the tokens of columns origin, origin-1, ...,
/// origin-cols+1 separated by single spaces. origin is the leftmost column
/// of any row's content. CA1 tokens are "bottom|top".
std::string render_snapshot(const Grid& g, std::size_t rows);

/// Plain PGM (P2) of the same columns, maxval 255. CA1 rows take two pixel
/// rows (top layer, then bottom layer). Gray levels are listed in comment
/// lines of the header.
std::string render_pgm(const Grid& g, std::size_t rows);

/// Rows rendered by default for input n: the first 1 plus one row for CA2 and
/// CA3, plus two full 1-2 cycles for CA1.
std::size_t default_render_rows(const BigInt& n, Automaton a);

/// Evolved grid for rendering, with exactly `rows` settled rows.
Grid render_grid(const BigInt& n, Automaton a, std::size_t rows, Mode mode = Mode::Frontier);

/// One positive integer per line; blank lines and '#' comments skipped.
std::vector<BigInt> read_inputs(const std::string& path);

void write_file(const std::string& path, const std::string& content);

}  // namespace collatz_ca
