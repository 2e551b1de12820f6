// Python bindings for the core operations. Sets cross the boundary as point
// lists, fibers as lists of complex numbers, reports as JSON text.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlroth/counting.hpp"
#include "nlroth/errors.hpp"
#include "nlroth/expsums.hpp"
#include "nlroth/gowers.hpp"
#include "nlroth/grid.hpp"
#include "nlroth/harness.hpp"
#include "nlroth/kernels.hpp"
#include "nlroth/parallel.hpp"
#include "nlroth/popular.hpp"

namespace py = pybind11;
using namespace nlroth;

namespace {

CountMethod parse_method(const std::string& m) {
  if (m == "bitparallel") return CountMethod::kBitparallel;
  if (m == "naive") return CountMethod::kNaive;
  throw DomainError("method must be 'bitparallel' or 'naive'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nonlinear Roth configuration counting and diagnostics";

  static py::exception<DomainError> domain_exc(m, "DomainError", PyExc_ValueError);
  static py::exception<ValidationError> validation_exc(m, "ValidationError", PyExc_ValueError);
  static py::exception<ContractError> contract_exc(m, "ContractError", PyExc_ValueError);
  static py::exception<TaskError> task_exc(m, "TaskError", PyExc_RuntimeError);
  static py::exception<NumericalIntegrityError> numeric_exc(m, "NumericalIntegrityError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      domain_exc(e.what());
    } catch (const ValidationError& e) {
      validation_exc(e.what());
    } catch (const ContractError& e) {
      contract_exc(e.what());
    } catch (const TaskError& e) {
      task_exc(e.what());
    } catch (const NumericalIntegrityError& e) {
      numeric_exc(e.what());
    }
  });

  py::class_<GridWindow>(m, "GridWindow")
      .def(py::init<std::int64_t, std::int64_t>(), py::arg("n1"), py::arg("n2"))
      .def_property_readonly("n1", &GridWindow::n1)
      .def_property_readonly("n2", &GridWindow::n2)
      .def_property_readonly("area", &GridWindow::area)
      .def("__repr__", [](const GridWindow& w) {
        return "GridWindow(" + std::to_string(w.n1()) + ", " + std::to_string(w.n2()) + ")";
      });

  py::class_<SetIndicator>(m, "SetIndicator")
      .def(py::init([](const std::vector<Point>& pts, const GridWindow& w) { return indicator_from_points(pts, w); }),
           py::arg("points"), py::arg("window"))
      .def_static("empty", [](const GridWindow& w) { return SetIndicator(w); })
      .def_property_readonly("window", &SetIndicator::window)
      .def_property_readonly("cardinality", &SetIndicator::cardinality)
      .def_property_readonly("density", [](const SetIndicator& a) { return density(a); })
      .def("contains", &SetIndicator::contains, py::arg("x"), py::arg("y"))
      .def("points", &SetIndicator::points)
      .def("__len__", &SetIndicator::cardinality)
      .def("__eq__", &SetIndicator::operator==);

  m.def("count_for_difference",
        [](const SetIndicator& a, std::int64_t d, const std::string& method) {
          return count_for_difference(a, d, parse_method(method));
        },
        py::arg("a"), py::arg("d"), py::arg("method") = "bitparallel");
  m.def("count_profile",
        [](const SetIndicator& a, std::int64_t lo, std::int64_t hi, const std::string& method) {
          const auto p = count_profile(a, lo, hi, parse_method(method));
          std::vector<std::pair<std::int64_t, std::int64_t>> out;
          for (std::size_t i = 0; i < p.counts.size(); ++i) out.emplace_back(p.d_values[i], p.counts[i]);
          return out;
        },
        py::arg("a"), py::arg("d_lo"), py::arg("d_hi"), py::arg("method") = "bitparallel");
  m.def("lambda_indicator",
        [](const SetIndicator& a, std::int64_t n, std::int64_t q, std::int64_t scale) {
          return lambda_indicator(a, CountingParams{n, q, scale, a.window()});
        },
        py::arg("a"), py::arg("n"), py::arg("q") = 1, py::arg("m") = 0);
  m.def("blakley_roy_lhs", &blakley_roy_lhs, py::arg("a"));

  m.def("fejer",
        [](double h, std::int64_t q) {
          const Kernel k = q == 1 ? fejer(h) : stretch(fejer(h), q);
          std::vector<std::pair<std::int64_t, std::int64_t>> out;
          for (std::int64_t j = -k.radius(); j <= k.radius(); ++j)
            if (k.numerator_at(j) != 0) out.emplace_back(j * k.stride(), k.numerator_at(j));
          return py::make_tuple(out, k.denominator());
        },
        py::arg("halfwidth"), py::arg("q") = 1,
        "(list of (offset, numerator), denominator) for the Fejér kernel on q*Z.");

  m.def("gowers_power",
        [](std::vector<Complex> values, int s, std::int64_t lo) {
          return gowers_power(Fiber(lo, std::move(values)), GowersOrder(s));
        },
        py::arg("values"), py::arg("s"), py::arg("lo") = 1);
  m.def("gowers_norm",
        [](std::vector<Complex> values, int s, std::int64_t lo) {
          return gowers_norm(Fiber(lo, std::move(values)), GowersOrder(s));
        },
        py::arg("values"), py::arg("s"), py::arg("lo") = 1);

  m.def("torus_norm", [](double a) { return torus_norm(a); }, py::arg("alpha"));
  m.def("weyl_sum", [](double a, double b, std::int64_t n) { return weyl_sum(Frequency(a), Frequency(b), n); },
        py::arg("alpha"), py::arg("beta"), py::arg("n"));
  m.def("rationalize",
        [](double alpha, std::int64_t bound, double scale) -> py::object {
          const auto c = rationalize(Frequency(alpha), bound, scale);
          if (!c) return py::none();
          return py::make_tuple(c->q(), c->achieved());
        },
        py::arg("alpha"), py::arg("bound"), py::arg("scale"),
        "(q, ||q alpha|| * S) for the smallest certified q, or None.");

  m.def("brute_force_best_difference",
        [](const SetIndicator& a, std::int64_t lo, std::int64_t hi) {
          const auto b = brute_force_best_difference(a, IntInterval{lo, hi});
          return py::make_tuple(b.d, b.count);
        },
        py::arg("a"), py::arg("d_lo"), py::arg("d_hi"));
  m.def("popular_difference_search",
        [](const SetIndicator& a, double eps) {
          return report_to_json(popular_difference_search(a, eps, IncrementConfig::defaults(eps)));
        },
        py::arg("a"), py::arg("epsilon"), "Report as JSON text.");
  m.def("verify_2d_threshold",
        [](const SetIndicator& a, double eps) {
          const auto r = verify_2d_threshold(a, eps);
          py::dict d;
          d["holds"] = r.holds;
          d["witness_d"] = r.witness_d;
          d["count"] = r.count;
          d["threshold"] = r.threshold;
          d["margin"] = r.margin;
          return d;
        },
        py::arg("a"), py::arg("epsilon"));
  m.def("lift_1d", [](const std::vector<std::int64_t>& a1, std::int64_t n) { return lift_1d(a1, n); },
        py::arg("a1"), py::arg("n"));

  m.def("run_experiment",
        [](const std::string& config_text) {
          const auto r = run_experiment(parse_config(config_text));
          return py::make_tuple(r.json, r.csv);
        },
        py::arg("config"), "Runs a 'key = value' config; returns (json, csv).");
  m.def("set_threads", &set_thread_count, py::arg("n"));
  m.def("threads", &thread_count);
}
