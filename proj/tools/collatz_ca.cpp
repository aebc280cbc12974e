// collatz_ca: command-line front end.
//
// Exit codes: 0 ok, 1 bad flags or I/O failure, 2 run undetermined,
// 3 verification or rule mismatch, 4 shared-grid collision.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "collatz_ca/engine.hpp"
#include "collatz_ca/io.hpp"
#include "collatz_ca/metrics.hpp"
#include "collatz_ca/rules.hpp"

namespace ca = collatz_ca;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUndetermined = 2;
constexpr int kMismatch = 3;
constexpr int kCollision = 4;

const std::vector<std::string> kVariants{"ca1", "ca2", "ca3"};

std::vector<ca::Automaton> variants_of(const std::string& v) {
  if (v == "all") return {ca::Automaton::Ca1, ca::Automaton::Ca2, ca::Automaton::Ca3};
  return {ca::automaton_from_string(v)};
}

struct RunFlags {
  std::string variant = "ca3";
  std::size_t max_rows = 100'000;
  std::uint64_t tick_cap = 10'000'000;
  std::string mode = "frontier";

  ca::RunConfig config() const {
    return {ca::automaton_from_string(variant), max_rows, tick_cap, ca::mode_from_string(mode)};
  }
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--variant", f.variant, "automaton")->check(CLI::IsMember(kVariants));
  cmd->add_option("--max-rows", f.max_rows, "row cap")->check(CLI::PositiveNumber);
  cmd->add_option("--tick-cap", f.tick_cap, "tick cap")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", f.mode, "execution mode")
      ->check(CLI::IsMember({"frontier", "synchronous"}));
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    ca::write_file(out_path, text);
  }
}

int cmd_run(const std::string& n_text, const RunFlags& f, const std::string& format) {
  const auto rec = ca::run_single(ca::parse_positive(n_text), f.config());
  if (format == "jsonl") {
    std::cout << ca::to_jsonl(rec) << '\n';
  } else if (format == "csv") {
    std::cout << ca::kRunCsvHeader << '\n' << ca::to_csv_row(rec) << '\n';
  } else {
    std::cout << ca::to_text(rec) << '\n';
  }
  return rec.reached_one ? kOk : kUndetermined;
}

int cmd_verify(std::uint64_t from, std::uint64_t to, const std::string& variant,
               const RunFlags& f) {
  if (from < 1 || from > to) throw CLI::ValidationError("verify", "need 1 <= --from <= --to");
  std::size_t total_bad = 0;
  for (const auto a : variants_of(variant)) {
    const std::size_t count = to - from + 1;
    std::vector<ca::MatchReport> reports(count);
    ca::parallel_for(count, [&](std::size_t i) {
      reports[i] = ca::verify_against_oracle(from + i, a, f.config());
    });
    std::size_t bad = 0;
    for (const auto& r : reports) {
      if (r.match) continue;
      if (++bad <= 5) {
        std::cout << "mismatch " << to_string(a) << " n=" << r.input << " row "
                  << (r.first_divergence ? std::to_string(*r.first_divergence) : "-")
                  << " expected " << (r.expected ? r.expected->str() : "-") << " got "
                  << (r.actual ? r.actual->str() : "-") << '\n';
      }
    }
    std::cout << to_string(a) << ' ' << from << ".." << to << ": " << count << " inputs, " << bad
              << " mismatches\n";
    total_bad += bad;
  }
  return total_bad == 0 ? kOk : kMismatch;
}

int cmd_efficiency(std::uint64_t from, std::uint64_t to, const std::string& variant,
                   const std::string& out_path) {
  if (from < 2 || from > to) throw CLI::ValidationError("efficiency", "need 2 <= --from <= --to");
  std::ostringstream csv;
  std::vector<std::string> summaries;
  csv << ca::kEfficiencyCsvHeader << '\n';
  for (const auto a : variants_of(variant)) {
    ca::Rational sum = 0;
    for (std::uint64_t n = from; n <= to; ++n) {
      const auto rec = ca::n_efficiency(n, a);
      sum += rec.ratio;
      csv << ca::to_csv_row(rec) << '\n';
    }
    summaries.push_back(ca::summary_line({a, from, to, sum / (to - from + 1)}));
  }
  std::string tail = "# n = 1 excluded (0/0)\n";
  for (const auto& s : summaries) tail += s + '\n';
  if (out_path.empty()) {
    std::cout << csv.str() << tail;
  } else {
    ca::write_file(out_path, csv.str() + tail);
    std::cout << tail;
  }
  return kOk;
}

std::vector<std::int64_t> parse_spacings(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const long long v = std::stoll(item, &used);
    if (used != item.size() || v < 0) throw CLI::ValidationError("--spacing", "bad entry " + item);
    out.push_back(v);
  }
  return out;
}

int cmd_batch(const std::string& inputs_path, const std::string& mode, const std::string& spacing,
              std::int64_t guard_gap, const RunFlags& f) {
  ca::BatchConfig cfg;
  cfg.inputs = ca::read_inputs(inputs_path);
  cfg.mode = mode == "shared" ? ca::BatchMode::Shared : ca::BatchMode::Stacked;
  cfg.guard_gap = guard_gap;
  if (spacing != "auto") cfg.spacings = parse_spacings(spacing);
  std::vector<ca::TrajectoryRecord> recs;
  try {
    recs = cfg.mode == ca::BatchMode::Shared ? ca::run_shared_grid(cfg, f.config())
                                             : ca::run_batch_stacked(cfg, f.config());
  } catch (const ca::CollisionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCollision;
  }
  for (const auto& r : recs) std::cout << ca::to_jsonl(r) << '\n';
  return kOk;
}

int cmd_rules(const std::string& variant, const std::string& out_path, std::uint64_t n_max) {
  std::string text;
  bool consistent = true;
  for (const auto kind : ca::rule_kinds_of(ca::automaton_from_string(variant))) {
    const auto table = ca::learn_rule_table(kind, n_max);
    const auto report = ca::check_rule_consistency(table);
    consistent = consistent && report.consistent();
    text += ca::dump_rule_table(table, report, n_max);
  }
  emit(out_path, text);
  return consistent ? kOk : kMismatch;
}

int cmd_render(const std::string& n_text, const std::string& variant, std::size_t rows,
               const std::string& out_path, const std::string& mode) {
  const auto n = ca::parse_positive(n_text);
  const auto a = ca::automaton_from_string(variant);
  if (rows == 0) rows = ca::default_render_rows(n, a);
  const auto g = ca::render_grid(n, a, rows, ca::mode_from_string(mode));
  const bool pgm = out_path.size() >= 4 && out_path.compare(out_path.size() - 4, 4, ".pgm") == 0;
  emit(out_path, pgm ? ca::render_pgm(g, rows) : ca::render_snapshot(g, rows));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collatz trajectories on digit-level cellular automata"};
  app.require_subcommand(1, 1);

  RunFlags run_flags;
  std::string n_text, format = "text";
  auto* run = app.add_subcommand("run", "evolve one input until it reaches 1");
  run->add_option("n", n_text, "positive integer")->required();
  add_run_flags(run, run_flags);
  run->add_option("--format", format, "output format")->check(CLI::IsMember({"jsonl", "csv", "text"}));

  std::uint64_t from = 1, to = 1;
  std::string verify_variant = "all";
  RunFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "compare automaton rows with the oracle over a range");
  verify->add_option("--from", from)->required();
  verify->add_option("--to", to)->required();
  verify->add_option("--variant", verify_variant)->check(CLI::IsMember({"ca1", "ca2", "ca3", "all"}));
  verify->add_option("--mode", verify_flags.mode)->check(CLI::IsMember({"frontier", "synchronous"}));

  std::uint64_t eff_from = 2, eff_to = 2;
  std::string eff_variant = "all", eff_out;
  auto* eff = app.add_subcommand("efficiency", "n-efficiency per input and range means (CSV)");
  eff->add_option("--from", eff_from)->required();
  eff->add_option("--to", eff_to)->required();
  eff->add_option("--variant", eff_variant)->check(CLI::IsMember({"ca1", "ca2", "ca3", "all"}));
  eff->add_option("--out", eff_out, "CSV file (default stdout)");

  std::string inputs_path, batch_mode = "stacked", spacing = "auto";
  std::int64_t guard_gap = 2;
  RunFlags batch_flags;
  auto* batch = app.add_subcommand("batch", "run many inputs, one JSONL record each");
  batch->add_option("--inputs", inputs_path, "one positive integer per line")->required();
  batch->add_option("--mode", batch_mode)->check(CLI::IsMember({"stacked", "shared"}));
  batch->add_option("--spacing", spacing, "auto or comma-separated column gaps");
  batch->add_option("--guard-gap", guard_gap)->check(CLI::NonNegativeNumber);
  batch->add_option("--variant", batch_flags.variant)->check(CLI::IsMember(kVariants));
  batch->add_option("--max-rows", batch_flags.max_rows)->check(CLI::PositiveNumber);
  batch->add_option("--tick-cap", batch_flags.tick_cap)->check(CLI::PositiveNumber);

  std::string rules_variant = "ca3", rules_out;
  std::uint64_t n_max = ca::kDefaultLearnBound;
  auto* rules = app.add_subcommand("rules", "learn, check and dump the rule table");
  rules->add_option("--variant", rules_variant)->check(CLI::IsMember(kVariants));
  rules->add_option("--out", rules_out, "dump file (default stdout)");
  rules->add_option("--n-max", n_max, "largest input used for learning")->check(CLI::Range(2, 1 << 20));

  std::string render_n, render_variant = "ca3", render_out, render_mode = "frontier";
  std::size_t render_rows = 0;
  auto* render = app.add_subcommand("render", "snapshot (.txt) or graymap (.pgm) of a grid");
  render->add_option("n", render_n)->required();
  render->add_option("--variant", render_variant)->check(CLI::IsMember(kVariants));
  render->add_option("--rows", render_rows, "rows to draw (default: through the first 1)");
  render->add_option("--out", render_out, "output file (default stdout, text)");
  render->add_option("--mode", render_mode)->check(CLI::IsMember({"frontier", "synchronous"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kFailure;
  }

  try {
    if (*run) return cmd_run(n_text, run_flags, format);
    if (*verify) return cmd_verify(from, to, verify_variant, verify_flags);
    if (*eff) return cmd_efficiency(eff_from, eff_to, eff_variant, eff_out);
    if (*batch) return cmd_batch(inputs_path, batch_mode, spacing, guard_gap, batch_flags);
    if (*rules) return cmd_rules(rules_variant, rules_out, n_max);
    if (*render) return cmd_render(render_n, render_variant, render_rows, render_out, render_mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
