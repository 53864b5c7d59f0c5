#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wao/exactlat.hpp"
#include "wao/locarith.hpp"
#include "wao/report.hpp"

namespace py = pybind11;

namespace {

py::object to_py(const wao::Int& x) {
  return py::reinterpret_steal<py::object>(PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

py::tuple run(const std::string& command, const std::string& scenario, std::optional<std::string> set,
              std::optional<std::string> tuple, int degree, std::optional<std::string> level,
              std::optional<long long> bound) {
  wao::RunOptions o;
  o.command = command;
  o.scenario = scenario;
  o.set = std::move(set);
  o.tuple = std::move(tuple);
  o.degree = degree;
  o.level = std::move(level);
  o.bound = bound;
  wao::RunResult r;
  {
    py::gil_scoped_release nogil;
    r = wao::run_command(o);
  }
  return py::make_tuple(r.exit_code, r.report.dump(), r.text);
}

py::list smith_invariants(const std::vector<std::vector<py::int_>>& rows, std::size_t cols) {
  std::size_t r = rows.size(), c = rows.empty() ? cols : rows[0].size();
  wao::IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw py::value_error("rows must have equal length");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = wao::Int(py::str(rows[i][j]).cast<std::string>());
  }
  py::list out;
  for (const auto& d : wao::snf(m).diagonal) out.append(to_py(d));
  return out;
}

long long place_arg(const py::object& p) {
  if (py::isinstance<py::str>(p)) return wao::place_of_label(p.cast<std::string>());
  return p.cast<long long>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Galois cohomology and the Brauer-Manin obstruction to weak approximation";
  m.attr("__version__") = wao::kVersion;
  m.def("run", &run, py::arg("command"), py::arg("scenario") = "", py::arg("set") = py::none(),
        py::arg("tuple") = py::none(), py::arg("degree") = 1, py::arg("level") = py::none(),
        py::arg("bound") = py::none(), "Run a CLI command; returns (exit_code, report_json, text).");
  m.def("smith_invariants", &smith_invariants, py::arg("rows"), py::arg("cols") = 0,
        "Smith normal form diagonal of an integer matrix.");
  m.def(
      "hilbert_symbol",
      [](long long a, long long b, const py::object& place) { return wao::hilbert_symbol(a, b, place_arg(place)); },
      py::arg("a"), py::arg("b"), py::arg("place"), "Hilbert symbol (a, b)_v; place is a prime, 0 or 'inf'.");
  m.def(
      "hilbert_oracle",
      [](long long a, long long b, const py::object& place) { return wao::hilbert_oracle(a, b, place_arg(place)); },
      py::arg("a"), py::arg("b"), py::arg("place"), "Hilbert symbol by searching for a local solution.");
}
