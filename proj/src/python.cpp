// Python bindings: polygraph loading, normalization and the JSON reports.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "polyrw/branchings.hpp"
#include "polyrw/cli.hpp"
#include "polyrw/diagram.hpp"
#include "polyrw/interpret.hpp"
#include "polyrw/polygraph.hpp"
#include "polyrw/rewrite.hpp"
#include "polyrw/words.hpp"

namespace py = pybind11;
using namespace polyrw;

namespace {

std::vector<Interpretation> levels_of(const Polygraph& p, const std::string& cert) {
    return cert.empty() ? std::vector<Interpretation>{} : load_certificate(cert, p);
}

bool terminating(const Polygraph& p, const std::string& cert) {
    auto levels = levels_of(p, cert);
    return !levels.empty() && check_certificate(p, levels).terminating;
}

}  // namespace

PYBIND11_MODULE(_polyrw, m) {
    m.doc() = "Rewriting on string diagrams of 3-polygraphs";

    // Later registrations are tried first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<TypeError>(m, "TypeError", PyExc_TypeError);

    py::class_<Diagram>(m, "Diagram")
        .def("__len__", &Diagram::size)
        .def("__str__", &diagram_expr)
        .def("__repr__", [](const Diagram& d) { return "Diagram(" + diagram_expr(d) + ")"; })
        .def("dump", &dump);

    py::class_<Polygraph>(m, "Polygraph")
        .def_readonly("name", &Polygraph::name)
        .def_readonly("dimension", &Polygraph::dimension)
        .def_property_readonly("generators",
                               [](const Polygraph& p) {
                                   std::vector<std::string> out;
                                   for (const auto& c : p.cells2) out.push_back(c.name);
                                   return out;
                               })
        .def_property_readonly("rules",
                               [](const Polygraph& p) {
                                   std::vector<std::string> out;
                                   for (const auto& c : p.cells3) out.push_back(c.name);
                                   for (const auto& r : p.rules) out.push_back(r.name);
                                   return out;
                               })
        .def("diagram", &parse_diagram, py::arg("expr"))
        .def("serialize", &serialize_polygraph)
        .def("validate", [](const Polygraph& p) {
            std::vector<py::dict> out;
            for (const auto& v : validate(p))
                out.push_back(py::dict(py::arg("kind") = v.kind, py::arg("cell") = v.cell,
                                       py::arg("message") = v.message));
            return out;
        });

    m.def("load", &load_polygraph, py::arg("path"));
    m.def("parse", &parse_polygraph, py::arg("text"));

    m.def(
        "normalize",
        [](const Polygraph& p, const Diagram& d, std::size_t max_steps) {
            auto r = normalize(p, d, max_steps);
            return py::make_tuple(r.result, r.trace.steps.size(), to_string(r.status));
        },
        py::arg("polygraph"), py::arg("diagram"), py::arg("max_steps") = default_max_steps,
        "Returns (normal form, step count, status).");
    m.def("is_normal", &is_normal, py::arg("polygraph"), py::arg("diagram"));
    m.def("equal_up_to_exchange", &equal_up_to_exchange, py::arg("polygraph"), py::arg("a"), py::arg("b"));

    m.def(
        "certificate_json",
        [](const Polygraph& p, const std::string& cert) { return certificate_json(check_certificate(p, levels_of(p, cert))); },
        py::arg("polygraph"), py::arg("cert"));
    m.def(
        "fdt_json",
        [](const Polygraph& p, const std::string& cert, std::size_t size_bound, std::size_t width_bound) {
            return fdt_json(fdt_report(p, terminating(p, cert), Bounds{default_max_steps, size_bound, width_bound}));
        },
        py::arg("polygraph"), py::arg("cert") = "", py::arg("size_bound") = 4, py::arg("width_bound") = 4);
    m.def(
        "word_report_json",
        [](const Polygraph& p, const std::string& cert) {
            return word_report_json(word_confluence_report(p, terminating(p, cert)));
        },
        py::arg("polygraph"), py::arg("cert") = "");

    m.def(
        "run",
        [](const std::vector<std::string>& argv) {
            // Mirrors the command line: verb first, then --flag value pairs.
            if (argv.empty()) throw Error("missing verb");
            Command c;
            c.verb = argv[0];
            for (std::size_t i = 1; i < argv.size(); ++i) {
                const std::string& a = argv[i];
                auto value = [&]() -> const std::string& {
                    if (i + 1 >= argv.size()) throw Error("missing value for " + a);
                    return argv[++i];
                };
                if (a == "--poly") c.poly = value();
                else if (a == "--cert") c.cert = value();
                else if (a == "--interp") c.interp = value();
                else if (a == "--cell") c.cell = value();
                else if (a == "--max-steps") c.max_steps = std::stoul(value());
                else if (a == "--size-bound") c.size_bound = std::stoul(value());
                else if (a == "--width-bound") c.width_bound = std::stoul(value());
                else if (a == "--output") c.output = value();
                else if (a == "--candidates") {
                    std::istringstream names(value());
                    for (std::string n; std::getline(names, n, ',');) c.candidates.push_back(n);
                }
                else if (a == "--target") c.target = value();
                else if (a == "--dvals") c.dvals = value();
                else throw Error("unknown argument " + a);
            }
            std::ostringstream out, err;
            int code = run(c, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("argv"), "Runs one CLI verb; returns (exit code, stdout, stderr).");
}
