#include "collatz_ca/io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace collatz_ca {

nlohmann::json big_to_json(const BigInt& v) {
  if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) {
    return v.convert_to<std::uint64_t>();
  }
  return v.str();
}

nlohmann::json to_json(const TrajectoryRecord& r) {
  nlohmann::json it = nlohmann::json::array();
  for (const auto& v : r.iterates) it.push_back(big_to_json(v));
  nlohmann::json j;
  j["input"] = big_to_json(r.input);
  j["variant"] = std::string(to_string(r.variant));
  j["iterates"] = std::move(it);
  j["reached_one"] = r.reached_one;
  j["ca_steps_to_one"] = r.ca_steps_to_one ? nlohmann::json(*r.ca_steps_to_one) : nlohmann::json();
  j["ticks_used"] = r.ticks_used;
  return j;
}

std::string to_jsonl(const TrajectoryRecord& r) { return to_json(r).dump(); }

std::string to_text(const TrajectoryRecord& r) {
  std::string out;
  for (const auto& v : r.iterates) {
    if (!out.empty()) out += ' ';
    out += v.str();
  }
  return out;
}

std::string to_csv_row(const TrajectoryRecord& r) {
  std::ostringstream out;
  out << r.input << ',' << to_string(r.variant) << ',' << (r.reached_one ? "true" : "false") << ',';
  if (r.ca_steps_to_one) out << *r.ca_steps_to_one;
  out << ',' << r.ticks_used << ',' << to_text(r);
  return out.str();
}

std::string to_csv_row(const EfficiencyRecord& r) {
  std::ostringstream out;
  out << r.n << ',' << to_string(r.variant) << ',' << r.ca_steps << ',' << r.tst << ','
      << to_decimal(r.ratio);
  return out.str();
}

std::string summary_line(const EfficiencySummary& s) {
  std::ostringstream out;
  out << "# mean " << to_string(s.variant) << " [" << s.lo << ',' << s.hi << "] "
      << to_decimal(s.mean) << ' ' << numerator(s.mean) << '/' << denominator(s.mean);
  return out.str();
}

namespace {

// Columns covered by the content of rows [0, rows).
ColumnRange span_of(const Grid& g, std::size_t rows) {
  ColumnRange out;
  for (std::size_t i = 0; i < rows && i < g.row_count(); ++i) {
    const ColumnRange c = g.content(i);
    if (c.empty()) continue;
    out = out.empty() ? c : ColumnRange{std::min(out.lo, c.lo), std::max(out.hi, c.hi)};
  }
  return out;
}

std::string cell_token(const Grid& g, std::size_t row, std::int64_t col) {
  std::string t = token(g.bottom(row, col));
  if (has_top_layer(g.automaton())) t += "|" + std::string(token(g.top(row, col)));
  return t;
}

int gray_of(Cell c) {
  if (c.is_empty()) return 255;
  const int base = c.attr() == Parity::Odd ? 180 : 200;
  return base - 60 * c.value();
}

int gray_of(TopState t) {
  switch (t) {
    case TopState::UnknownParity: return 255;
    case TopState::Even: return 170;
    case TopState::OddNormal: return 85;
    case TopState::OddSpecial: return 0;
  }
  return 255;
}

}  // namespace

std::string render_snapshot(const Grid& g, std::size_t rows) {
  rows = std::min(rows, g.row_count());
  const ColumnRange span = span_of(g, rows);
  std::ostringstream out;
  out << to_string(g.automaton()) << ' ' << rows << ' ' << span.width() << ' '
      << (span.empty() ? 0 : span.hi) << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::int64_t c = span.hi; c >= span.lo; --c) {
      if (c != span.hi) out << ' ';
      out << cell_token(g, i, c);
    }
    out << '\n';
  }
  return out.str();
}

std::string render_pgm(const Grid& g, std::size_t rows) {
  rows = std::min(rows, g.row_count());
  const ColumnRange span = span_of(g, rows);
  const bool two = has_top_layer(g.automaton());
  std::ostringstream out;
  out << "P2\n";
  out << "# " << to_string(g.automaton()) << " rows " << rows << " origin "
      << (span.empty() ? 0 : span.hi) << " (leftmost pixel column)\n";
  out << "# empty 255; digit d: 200-60d (no/even attribute), 180-60d (odd attribute)\n";
  if (two) out << "# top layer rows first: UP 255, EV 170, ON 85, OS 0\n";
  out << span.width() << ' ' << rows * (two ? 2 : 1) << "\n255\n";
  for (std::size_t i = 0; i < rows; ++i) {
    for (int layer = two ? 1 : 0; layer >= 0; --layer) {
      for (std::int64_t c = span.hi; c >= span.lo; --c) {
        if (c != span.hi) out << ' ';
        out << (layer == 1 ? gray_of(g.top(i, c)) : gray_of(g.bottom(i, c)));
      }
      out << '\n';
    }
  }
  return out.str();
}

std::size_t default_render_rows(const BigInt& n, Automaton a) {
  const auto steps = steps_to_one(map_of(a), row_zero_value(n, a));
  if (!steps) throw std::runtime_error("render: trajectory of " + n.str() + " undetermined");
  return static_cast<std::size_t>(*steps) + (a == Automaton::Ca1 ? 5 : 2);
}

Grid render_grid(const BigInt& n, Automaton a, std::size_t rows, Mode mode) {
  if (rows == 0) throw std::invalid_argument("render: rows must be positive");
  Grid g = init_grid(n, a, 0);
  run_until_rows_stable(g, rows - 1, 10'000'000, mode);
  g.truncate_rows(rows);
  return g;
}

std::vector<BigInt> read_inputs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<BigInt> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    try {
      out.push_back(parse_positive(line.substr(first, last - first + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

}  // namespace collatz_ca
