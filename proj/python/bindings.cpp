#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "collatz_ca/engine.hpp"
#include "collatz_ca/io.hpp"
#include "collatz_ca/metrics.hpp"
#include "collatz_ca/rules.hpp"

namespace py = pybind11;
namespace ca = collatz_ca;

namespace {

ca::BigInt to_big(const py::int_& v) { return ca::BigInt(py::str(v).cast<std::string>()); }

py::int_ to_py(const ca::BigInt& v) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(v.str().c_str(), nullptr, 10));
}

py::list to_py(const std::vector<ca::BigInt>& v) {
  py::list out;
  for (const auto& x : v) out.append(to_py(x));
  return out;
}

py::dict record_dict(const ca::TrajectoryRecord& r) {
  py::dict d;
  d["input"] = to_py(r.input);
  d["variant"] = std::string(ca::to_string(r.variant));
  d["iterates"] = to_py(r.iterates);
  d["reached_one"] = r.reached_one;
  d["ca_steps_to_one"] = r.ca_steps_to_one ? py::object(py::int_(*r.ca_steps_to_one)) : py::none();
  d["rows_computed"] = r.rows_computed;
  d["ticks_used"] = r.ticks_used;
  return d;
}

ca::RunConfig run_config(const std::string& variant, const std::string& mode,
                         std::size_t max_rows, std::uint64_t tick_cap) {
  return {ca::automaton_from_string(variant), max_rows, tick_cap, ca::mode_from_string(mode)};
}

py::tuple fraction_parts(const ca::Rational& r) {
  return py::make_tuple(to_py(numerator(r)), to_py(denominator(r)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Collatz trajectories on digit-level cellular automata";

  py::register_exception<ca::CollisionError>(m, "CollisionError", PyExc_RuntimeError);

  m.def("to_digits", [](const py::int_& n, int base) {
    return ca::to_digits(to_big(n), base).digits;
  }, py::arg("n"), py::arg("base"), "Digits of n, least significant first.");

  m.def("apply_map", [](const std::string& v, const py::int_& n) {
    return to_py(ca::apply_map(ca::map_variant_from_string(v), to_big(n)));
  }, py::arg("variant"), py::arg("n"));

  m.def("oracle_trajectory", [](const std::string& v, const py::int_& n, std::uint64_t cap) {
    return to_py(ca::oracle_trajectory(ca::map_variant_from_string(v), to_big(n), cap).iterates);
  }, py::arg("variant"), py::arg("n"), py::arg("cap") = ca::kDefaultStepCap);

  m.def("total_stopping_time", [](const py::int_& n) {
    return ca::total_stopping_time(to_big(n));
  }, py::arg("n"));

  m.def("run", [](const py::int_& n, const std::string& variant, const std::string& mode,
                  std::size_t max_rows, std::uint64_t tick_cap) {
    const auto big = to_big(n);
    const auto cfg = run_config(variant, mode, max_rows, tick_cap);
    ca::TrajectoryRecord rec;
    {
      py::gil_scoped_release release;
      rec = ca::run_single(big, cfg);
    }
    return record_dict(rec);
  }, py::arg("n"), py::arg("variant") = "ca3", py::arg("mode") = "frontier",
     py::arg("max_rows") = 100'000, py::arg("tick_cap") = 10'000'000);

  m.def("verify", [](const py::int_& n, const std::string& variant) {
    const auto r = ca::verify_against_oracle(to_big(n), ca::automaton_from_string(variant));
    py::dict d;
    d["match"] = r.match;
    d["rows_compared"] = r.rows_compared;
    d["first_divergence"] = r.first_divergence;
    return d;
  }, py::arg("n"), py::arg("variant"));

  m.def("n_efficiency", [](const py::int_& n, const std::string& variant) {
    const auto r = ca::n_efficiency(to_big(n), ca::automaton_from_string(variant));
    return py::make_tuple(r.ca_steps, r.tst, fraction_parts(r.ratio));
  }, py::arg("n"), py::arg("variant"), "(ca_steps, tst, (numerator, denominator))");

  m.def("average_efficiency", [](std::uint64_t lo, std::uint64_t hi, const std::string& variant) {
    return fraction_parts(ca::average_efficiency(lo, hi, ca::automaton_from_string(variant)).mean);
  }, py::arg("lo"), py::arg("hi"), py::arg("variant"));

  m.def("batch", [](const std::vector<py::int_>& inputs, const std::string& variant,
                    const std::string& mode, std::optional<std::vector<std::int64_t>> spacings,
                    std::int64_t guard_gap) {
    ca::BatchConfig cfg;
    for (const auto& n : inputs) cfg.inputs.push_back(to_big(n));
    cfg.mode = mode == "shared" ? ca::BatchMode::Shared : ca::BatchMode::Stacked;
    if (mode != "shared" && mode != "stacked") throw py::value_error("mode must be stacked or shared");
    cfg.spacings = std::move(spacings);
    cfg.guard_gap = guard_gap;
    const auto run = run_config(variant, "frontier", 100'000, 10'000'000);
    std::vector<ca::TrajectoryRecord> recs;
    {
      py::gil_scoped_release release;
      recs = cfg.mode == ca::BatchMode::Shared ? ca::run_shared_grid(cfg, run)
                                               : ca::run_batch_stacked(cfg, run);
    }
    py::list out;
    for (const auto& r : recs) out.append(record_dict(r));
    return out;
  }, py::arg("inputs"), py::arg("variant") = "ca3", py::arg("mode") = "stacked",
     py::arg("spacings") = py::none(), py::arg("guard_gap") = 2);

  m.def("rules", [](const std::string& variant, std::uint64_t n_max) {
    std::string text;
    for (const auto kind : ca::rule_kinds_of(ca::automaton_from_string(variant))) {
      const auto table = ca::learn_rule_table(kind, n_max);
      text += ca::dump_rule_table(table, ca::check_rule_consistency(table), n_max);
    }
    return text;
  }, py::arg("variant"), py::arg("n_max") = ca::kDefaultLearnBound);

  m.def("render", [](const py::int_& n, const std::string& variant, std::optional<std::size_t> rows,
                     const std::string& fmt) {
    const auto big = to_big(n);
    const auto a = ca::automaton_from_string(variant);
    const std::size_t r = rows ? *rows : ca::default_render_rows(big, a);
    const auto g = ca::render_grid(big, a, r);
    if (fmt == "pgm") return ca::render_pgm(g, r);
    if (fmt != "text") throw py::value_error("fmt must be text or pgm");
    return ca::render_snapshot(g, r);
  }, py::arg("n"), py::arg("variant") = "ca3", py::arg("rows") = py::none(),
     py::arg("fmt") = "text");

  m.def("classify", [](const py::int_& n, const std::string& variant, std::uint64_t cap) {
    const auto c = ca::classify_trajectory(to_big(n), ca::automaton_from_string(variant), cap);
    py::dict d;
    d["convergent"] = c.classification == ca::Classification::Convergent;
    d["steps_to_one"] = c.steps_to_one;
    d["cycle_witness"] = c.cycle_witness ? py::object(to_py(*c.cycle_witness)) : py::none();
    return d;
  }, py::arg("n"), py::arg("variant") = "ca3", py::arg("cap") = ca::kDefaultStepCap);
}
