#include "qglab/continuum.hpp"
#include "qglab/errors.hpp"
#include "qglab/lab/commands.hpp"
#include "qglab/lab/fit.hpp"
#include "qglab/quantum_graph.hpp"
#include "qglab/resolvent_compare.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qglab;

namespace {

// Reports and configs cross the boundary as JSON text; the Python side
// turns them into dicts.
std::pair<std::string, bool> run_command(const std::string& name, const std::string& config_json) {
    const auto c = lab::from_json(nlohmann::json::parse(config_json));
    py::gil_scoped_release release;
    lab::CommandResult r;
    if (name == "lemma-check")
        r = lab::run_lemma_check(c);
    else if (name == "resolvent-compare")
        r = lab::run_resolvent_compare(c);
    else if (name == "spectrum-converge")
        r = lab::run_spectrum_converge(c);
    else
        throw InvalidParameter("unknown command '" + name + "'");
    return {r.report.dump(), r.pass};
}

py::tuple triplets(const SparseOperator& op) {
    const SparseMatrixR m = op.real_matrix();
    py::array_t<long> rows(m.nonZeros()), cols(m.nonZeros());
    py::array_t<double> vals(m.nonZeros());
    auto r = rows.mutable_unchecked<1>();
    auto c = cols.mutable_unchecked<1>();
    auto v = vals.mutable_unchecked<1>();
    py::ssize_t k = 0;
    for (Eigen::Index outer = 0; outer < m.outerSize(); ++outer)
        for (SparseMatrixR::InnerIterator it(m, outer); it; ++it, ++k) {
            r(k) = it.row();
            c(k) = it.col();
            v(k) = it.value();
        }
    return py::make_tuple(rows, cols, vals, py::make_tuple(m.rows(), m.cols()));
}

} // namespace

PYBIND11_MODULE(_qglab, m) {
    m.doc() = "Lattice and quantum-graph approximations of Schroedinger operators";
    auto& base = py::register_exception<Error>(m, "QglabError");
    py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    py::class_<Potential>(m, "Potential")
        .def(py::init([](const std::string& label, const std::map<std::string, double>& params) {
                 return make_potential(label, params);
             }),
             py::arg("label"), py::arg("params") = std::map<std::string, double>{})
        .def_property_readonly("label", &Potential::label)
        .def("__call__", [](const Potential& v, const std::vector<double>& x) { return v(x); });

    py::class_<LatticeGraph, std::shared_ptr<LatticeGraph>>(m, "Lattice")
        .def(py::init([](int nu, double ell, double radius) {
                 return std::const_pointer_cast<LatticeGraph>(build_lattice(nu, ell, radius));
             }),
             py::arg("nu"), py::arg("ell"), py::arg("radius"))
        .def_property_readonly("nu", &LatticeGraph::nu)
        .def_property_readonly("ell", &LatticeGraph::ell)
        .def_property_readonly("vertex_count", &LatticeGraph::vertex_count)
        .def_property_readonly("edge_count", &LatticeGraph::edge_count)
        .def_property_readonly("stub_count", &LatticeGraph::stub_count)
        .def("points", [](const LatticeGraph& g) {
            py::array_t<double> out({static_cast<py::ssize_t>(g.vertex_count()), static_cast<py::ssize_t>(g.nu())});
            auto a = out.mutable_unchecked<2>();
            for (std::size_t v = 0; v < g.vertex_count(); ++v) {
                const auto x = g.point(v);
                for (int d = 0; d < g.nu(); ++d)
                    a(static_cast<py::ssize_t>(v), d) = x[static_cast<std::size_t>(d)];
            }
            return out;
        });

    m.def(
        "h2_triplets", [](std::shared_ptr<LatticeGraph> g, const Potential& v) { return triplets(assemble_h2(g, v)); },
        py::arg("lattice"), py::arg("potential"), "COO data (rows, cols, values, shape) of the vertex operator H2.");

    m.def(
        "secular_eigenvalues",
        [](std::shared_ptr<LatticeGraph> g, const Potential& v, double lower, double upper) {
            std::vector<double> out;
            for (const auto& e : secular_eigenvalues(g, v, Window{lower, upper}))
                out.push_back(e.lambda);
            return out;
        },
        py::arg("lattice"), py::arg("potential"), py::arg("lower"), py::arg("upper"),
        "Quantum-graph eigenvalues in (lower, upper) via the secular reduction.");

    m.def(
        "continuum_eigenvalues",
        [](int nu, double h, double radius, const Potential& v, double lower, double upper, int count,
           double tolerance) {
            ContinuumOptions o;
            o.tolerance = tolerance;
            py::list out;
            for (const auto& r : continuum_eigenvalues(make_continuum_grid(nu, h, radius), v, {lower, upper}, count, o))
                out.append(py::dict(py::arg("value") = r.value, py::arg("error_estimate") = r.error_estimate,
                                    py::arg("coarse") = r.coarse, py::arg("fine") = r.fine));
            return out;
        },
        py::arg("nu"), py::arg("h"), py::arg("radius"), py::arg("potential"), py::arg("lower"), py::arg("upper"),
        py::arg("count"), py::arg("tolerance") = 1e-3);

    m.def(
        "resolvent_difference",
        [](std::shared_ptr<LatticeGraph> g, const Potential& v, std::complex<double> z, const std::string& form) {
            if (form == "k")
                return k_form_difference(g, v, z).value;
            if (form == "istar")
                return istar_form_difference(g, v, z).value;
            if (form == "h1")
                return h1_form_difference(g, v, z).value;
            throw InvalidParameter("form must be 'k', 'istar' or 'h1'");
        },
        py::arg("lattice"), py::arg("potential"), py::arg("z"), py::arg("form") = "k",
        "Power-iteration estimate of a resolvent-difference operator norm.");

    m.def("hausdorff_distance", &hausdorff_distance, py::arg("x"), py::arg("y"));
    m.def("inverse_shift_spectra_compare", &inverse_shift_spectra_compare, py::arg("a"), py::arg("b"),
          py::arg("m_shift"));

    m.def(
        "fit_loglog",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            const auto f = lab::fit_loglog(x, y);
            return py::dict(py::arg("slope") = f.slope, py::arg("constant") = f.constant(),
                            py::arg("standard_error") = f.standard_error,
                            py::arg("ci95") = py::make_tuple(f.ci_low, f.ci_high), py::arg("points") = f.points);
        },
        py::arg("x"), py::arg("y"));

    m.def("default_config", [] { return lab::to_json(lab::ExperimentConfig{}).dump(); });
    m.def("run_command", &run_command, py::arg("name"), py::arg("config_json"));
    m.def("run_report", [](const std::string& out_dir, const std::vector<std::string>& paths) {
        const auto r = lab::run_report(out_dir, paths);
        return std::make_pair(r.report.dump(), r.pass);
    });
    m.attr("__version__") = lab::library_version();
}
