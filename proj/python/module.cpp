#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geoindex/io.hpp"

namespace py = pybind11;
using namespace geoindex;

namespace {

const IndexGerm& curve(const GeodesicSystem& s, const std::string& name) {
    for (const auto& c : s.curves)
        if (c.name == name) return c;
    throw Error(ErrorCode::InvalidArgument, "no curve named '" + name + "'");
}

std::optional<Rational> maybe_rational(const std::optional<std::string>& text) {
    if (!text) return std::nullopt;
    return parse_rational(*text);
}

}  // namespace

PYBIND11_MODULE(_geoindex, m) {
    m.doc() = "Index iteration and common index jumps for closed geodesics on S^3";

    static py::exception<Error> error(m, "GeoindexError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(error.ptr(), (std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
        }
    });

    py::class_<GeodesicSystem>(m, "System")
        .def_static("from_json", &parse_system_text, py::arg("text"))
        .def("to_json", [](const GeodesicSystem& s) { return system_to_json(s).dump(); })
        .def_property_readonly("curve_names", [](const GeodesicSystem& s) {
            std::vector<std::string> names;
            for (const auto& c : s.curves) names.push_back(c.name);
            return names;
        })
        .def("index", [](const GeodesicSystem& s, const std::string& name, std::int64_t m) {
            return index_at(curve(s, name), m, s.budget());
        })
        .def("nullity", [](const GeodesicSystem& s, const std::string& name, std::int64_t m) {
            return nullity_at(curve(s, name), m, s.budget());
        })
        .def("mean_index", [](const GeodesicSystem& s, const std::string& name) {
            return mean_index(curve(s, name)).to_string();
        })
        .def("mbar", [](const GeodesicSystem& s) { return mbar(s.curves, s.budget()); });

    m.def(
        "jump_search",
        [](const GeodesicSystem& s, const std::string& delta, std::optional<std::string> epsilon, std::int64_t n_min,
           std::int64_t n_max, std::vector<std::string> curves) {
            std::vector<IndexGerm> germs;
            if (curves.empty()) germs = s.curves;
            for (const auto& n : curves) germs.push_back(curve(s, n));
            JumpProblem p = build_problem(germs, parse_rational(delta), maybe_rational(epsilon), 1, std::nullopt,
                                          s.budget());
            py::gil_scoped_release release;
            return certificate_to_json(search(p, n_min, n_max)).dump();
        },
        py::arg("system"), py::arg("delta"), py::arg("epsilon") = py::none(), py::arg("n_min") = 1,
        py::arg("n_max") = 10'000'000, py::arg("curves") = std::vector<std::string>{});

    m.def(
        "run_pipeline",
        [](const GeodesicSystem& s, const std::string& delta, const std::string& epsilon, std::int64_t n_min,
           std::int64_t n_max, std::int64_t p_hat) {
            SearchBudget b;
            b.delta = parse_rational(delta);
            b.epsilon = parse_rational(epsilon);
            b.n_min = n_min;
            b.n_max = n_max;
            b.p_hat = p_hat;
            py::gil_scoped_release release;
            return report_to_json(run_pipeline(s, b)).dump();
        },
        py::arg("system"), py::arg("delta") = "1/64", py::arg("epsilon") = "1/64", py::arg("n_min") = 1,
        py::arg("n_max") = 10'000'000, py::arg("p_hat") = 4);

    m.def(
        "reverify",
        [](const std::string& report) {
            ImpossibilityReport r = report_from_json(parse_json_text(report, "report"));
            py::gil_scoped_release release;
            return verification_to_json(reverify(r)).dump();
        },
        py::arg("report"));
}
