#include <sstream>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tmlab/cli.hpp"
#include "tmlab/decider.hpp"
#include "tmlab/density.hpp"
#include "tmlab/sampler.hpp"
#include "tmlab/tm_core.hpp"
#include "tmlab/walk.hpp"

namespace py = pybind11;
using namespace tmlab;

namespace {

py::object to_py_int(const BigInt& v) { return py::module_::import("builtins").attr("int")(v.str()); }

py::object to_fraction(const Rational& r) {
  return py::module_::import("fractions")
      .attr("Fraction")(to_py_int(boost::multiprecision::numerator(r)),
                        to_py_int(boost::multiprecision::denominator(r)));
}

MachineModel model_from(const std::string& name, int a) { return MachineModel::make(parse_geometry(name), a); }

py::dict classification_dict(const Classification& c) {
  py::dict d;
  d["verdict"] = std::string(to_string(c.verdict));
  d["step"] = c.step;
  d["visited_cells"] = c.visited_cells;
  if (c.verdict == Verdict::RepeatsState) d["repeated_state"] = c.repeated_state;
  return d;
}

}  // namespace

PYBIND11_MODULE(_tmlab, m) {
  m.doc() = "Generic-case halting decider, program sampler and density experiments.";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<IncompatibleModel>(m, "IncompatibleModel", PyExc_ValueError);
  py::register_exception<TooManyPrograms>(m, "TooManyPrograms", PyExc_RuntimeError);

  py::class_<Program>(m, "Program")
      .def_property_readonly("states", &Program::states)
      .def_property_readonly("alphabet", &Program::alphabet)
      .def("serialize", [](const Program& p) { return serialize(p); })
      .def("to_json", [](const Program& p) { return to_json(p); })
      .def(py::self == py::self)
      .def("__repr__", [](const Program& p) {
        return "<Program n=" + std::to_string(p.states()) + " a=" + std::to_string(p.alphabet()) + ">";
      });

  m.def("parse_program", [](const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    return first != std::string::npos && text[first] == '{' ? program_from_json(text) : parse_program(text);
  }, py::arg("text"));

  m.def("count_programs", [](std::uint32_t n, int a) { return to_py_int(count_programs(n, a)); }, py::arg("n"),
        py::arg("a") = 2);

  m.def("derive_trial_seed", &derive_trial_seed, py::arg("master_seed"), py::arg("trial_index"));

  m.def("sample_program", [](std::uint32_t n, int a, std::uint64_t seed, std::uint64_t index) {
    auto rng = trial_stream(seed, index);
    return sample_program(n, a, rng);
  }, py::arg("n"), py::arg("a") = 2, py::arg("seed") = 0, py::arg("index") = 0);

  m.def("run", [](const Program& p, int fill, const std::string& model, std::uint64_t budget) {
    const auto r = run(p, static_cast<Symbol>(fill), model_from(model, p.alphabet()), budget);
    py::dict d;
    d["outcome"] = std::string(to_string(r.outcome));
    d["step"] = r.step;
    d["steps_executed"] = r.steps_executed;
    d["max_state_visits"] = r.max_state_visits;
    d["distinct_states"] = r.distinct_states;
    d["visited_cell_count"] = r.visited_cell_count;
    d["final_head"] = r.final_head ? py::object(py::int_(*r.final_head)) : py::object(py::none());
    return d;
  }, py::arg("program"), py::arg("fill") = 0, py::arg("model") = "oneway", py::arg("budget") = 1000);

  m.def("classify", [](const Program& p, int fill) { return classification_dict(classify(p, static_cast<Symbol>(fill))); },
        py::arg("program"), py::arg("fill") = 0);
  m.def("in_b", &in_b, py::arg("program"));
  m.def("decide_halting_on_b", [](const Program& p) { return std::string(to_string(decide_halting_on_b(p))); },
        py::arg("program"));
  m.def("has_halt_transition", &has_halt_transition, py::arg("program"));

  m.def("conservative_halting", [](const Program& p, const std::string& model, std::uint64_t budget) {
    const auto v = conservative_halting(p, model_from(model, p.alphabet()), budget);
    py::dict d;
    d["kind"] = std::string(to_string(v.kind));
    d["reason"] = std::string(to_string(v.reason));
    d["step"] = v.step;
    d["cycle_start"] = v.cycle_start;
    d["period"] = v.period;
    d["budget"] = v.budget;
    return d;
  }, py::arg("program"), py::arg("model") = "oneway", py::arg("budget") = 1000);

  m.def("finite_domain_witness", &finite_domain_witness, py::arg("program"));

  m.def("estimate_density", [](const std::string& event, std::uint32_t n, int a, const std::string& model,
                               std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    DensityEstimate e;
    {
      py::gil_scoped_release release;
      e = estimate_density(parse_event(event), n, model_from(model, a), trials, seed, workers);
    }
    py::dict d;
    d["event"] = e.event.name();
    d["n"] = e.n;
    d["a"] = e.a;
    d["model"] = std::string(to_string(e.model));
    d["trials"] = e.estimate.trials;
    d["hits"] = e.estimate.hits;
    d["p_hat"] = e.estimate.p_hat;
    d["ci_lo"] = e.estimate.ci_lo;
    d["ci_hi"] = e.estimate.ci_hi;
    d["master_seed"] = e.estimate.master_seed;
    return d;
  }, py::arg("event"), py::arg("n"), py::arg("a") = 2, py::arg("model") = "oneway", py::arg("trials") = 10000,
     py::arg("seed") = 0, py::arg("workers") = 1);

  m.def("exact_density", [](const std::string& event, std::uint32_t n, int a) {
    return to_fraction(exact_density(parse_event(event), n, a).value());
  }, py::arg("event"), py::arg("n"), py::arg("a") = 2);

  m.def("nohalt_exact_fraction", [](std::uint32_t n) {
    const auto f = nohalt_exact_fraction(n);
    return py::make_tuple(to_fraction(f.exact), f.value);
  }, py::arg("n"));

  m.def("falloff_cdf_exact", [](std::uint64_t k) {
    const auto p = falloff_cdf_exact(k);
    return py::make_tuple(p.exact ? to_fraction(*p.exact) : py::object(py::none()), p.value);
  }, py::arg("k"));

  m.def("first_passage", [](std::uint64_t m_) { return to_fraction(first_passage(m_)); }, py::arg("m"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
