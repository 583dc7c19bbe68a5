#include "output.hpp"

#include "qglab/continuum.hpp"
#include "qglab/errors.hpp"
#include "qglab/lab/commands.hpp"
#include "qglab/quantum_graph.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace qglab::lab {

using nlohmann::json;
using namespace detail;

namespace {

struct Reference {
    std::vector<double> values;
    std::vector<double> errors;
    ContinuumGrid grid;
    Eigen::MatrixXcd vectors; ///< eigenvectors on grid h, window order
};

struct SpectrumPoint {
    std::vector<double> graph;   // nu H1 via the secular reduction
    std::vector<double> lattice; // H2
    std::optional<double> hausdorff_graph;
    std::optional<double> hausdorff_lattice;
    double projection_lattice = 0.0;
    std::optional<double> projection_continuum;
    std::size_t multiplets = 0;
};

// Values of continuum eigenvectors at the lattice vertices, if every vertex is a grid point.
std::optional<Eigen::MatrixXcd> restrict_to_lattice(const Reference& ref, const LatticeGraph& g) {
    const Eigen::Index n = ref.grid.points_per_axis();
    const auto rows = static_cast<Eigen::Index>(g.vertex_count());
    Eigen::MatrixXcd out(rows, ref.vectors.cols());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const auto x = g.point(v);
        Eigen::Index flat = 0;
        for (double xd : x) {
            const double pos = (xd + ref.grid.radius) / ref.grid.h - 1.0;
            const double r = std::round(pos);
            if (std::abs(pos - r) > 1e-6 || r < 0 || r >= static_cast<double>(n))
                return std::nullopt;
            flat = flat * n + static_cast<Eigen::Index>(r);
        }
        out.row(static_cast<Eigen::Index>(v)) = ref.vectors.row(flat);
    }
    return out;
}

SpectrumPoint spectrum_point(const ExperimentConfig& c, const Potential& v, const Reference& ref, double ell) {
    const auto g = build_lattice(c.nu, ell, c.lattice_radius(ell));
    SpectrumPoint p;
    SecularOptions so;
    so.tol = c.secular_tol;
    const auto qg = secular_eigenvalues(g, v, c.window, so);
    const auto h2 = eigenpairs(assemble_h2(g, v), c.window, static_cast<int>(g->vertex_count()));
    for (const auto& e : qg)
        p.graph.push_back(e.lambda);
    p.lattice = h2.eigenvalues;
    p.multiplets = cluster_multiplets(p.graph, 10.0 * c.secular_tol).size();

    if (!ref.values.empty() && !p.graph.empty())
        p.hausdorff_graph = inverse_shift_spectra_compare(p.graph, ref.values, c.m_shift);
    if (!ref.values.empty() && !p.lattice.empty())
        p.hausdorff_lattice = inverse_shift_spectra_compare(p.lattice, ref.values, c.m_shift);

    // I* of the graph eigenfunctions against the H2 eigenvectors, and against
    // the continuum eigenvectors sampled at the vertices
    Eigen::MatrixXcd mapped(static_cast<Eigen::Index>(g->vertex_count()), static_cast<Eigen::Index>(qg.size()));
    for (std::size_t k = 0; k < qg.size(); ++k)
        mapped.col(static_cast<Eigen::Index>(k)) = adjoint_Istar(secular_eigenfunction(qg[k])).values();
    p.projection_lattice = subspace_distance(mapped, h2.eigenvectors);
    if (ref.vectors.cols() > 0)
        if (const auto sampled = restrict_to_lattice(ref, *g))
            p.projection_continuum = subspace_distance(mapped, *sampled);
    return p;
}

} // namespace

CommandResult run_spectrum_converge(const ExperimentConfig& c) {
    validate(c);
    const std::string hash = config_hash(c);
    const auto v = c.make_potential();

    Reference ref;
    ref.grid = make_continuum_grid(c.nu, c.fine_h, c.radius);
    ContinuumOptions co;
    co.tolerance = c.richardson_tol;
    for (const auto& r : continuum_eigenvalues(ref.grid, v, c.window, 1 << 20, co)) {
        ref.values.push_back(r.value);
        ref.errors.push_back(r.error_estimate);
    }
    if (!ref.values.empty()) {
        EigenOptions eo;
        eo.dense_limit = 600;
        const auto slice =
            eigenpairs(assemble_continuum(ref.grid, v), c.window, static_cast<int>(ref.values.size()), eo);
        ref.vectors = slice.eigenvectors;
    }

    const auto points = parallel_map(c.ell_list.size(),
                                     [&](std::size_t i) { return spectrum_point(c, v, ref, c.ell_list[i]); });

    json report = report_skeleton("spectrum-converge", c);
    report["reference"] = {{"h", c.fine_h}, {"eigenvalues", ref.values}, {"error_estimates", ref.errors}};
    Csv csv({"config_hash", "nu", "ell", "operator", "index", "eigenvalue", "reference", "abs_error"});
    Csv dist({"config_hash", "nu", "ell", "quantity", "value"});
    const std::string nu = std::to_string(c.nu);
    bool pass = true;
    bool empty = ref.values.empty();

    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        const double ell = c.ell_list[i];
        const std::string es = num(ell);
        auto emit = [&](const std::string& op, const std::vector<double>& vals) {
            for (std::size_t k = 0; k < vals.size(); ++k) {
                const bool has_ref = k < ref.values.size();
                csv.row({hash, nu, es, op, std::to_string(k), num(vals[k]), has_ref ? num(ref.values[k]) : "",
                         has_ref ? num(std::abs(vals[k] - ref.values[k])) : ""});
            }
        };
        emit("graph", p.graph);
        emit("lattice", p.lattice);
        if (p.hausdorff_graph)
            dist.row({hash, nu, es, "hausdorff_graph", num(*p.hausdorff_graph)});
        if (p.hausdorff_lattice)
            dist.row({hash, nu, es, "hausdorff_lattice", num(*p.hausdorff_lattice)});
        dist.row({hash, nu, es, "projection_lattice", num(p.projection_lattice)});
        if (p.projection_continuum)
            dist.row({hash, nu, es, "projection_continuum", num(*p.projection_continuum)});
        report["records"].push_back({{"ell", ell},
                                     {"graph_eigenvalues", p.graph},
                                     {"lattice_eigenvalues", p.lattice},
                                     {"multiplets", p.multiplets},
                                     {"hausdorff_graph", p.hausdorff_graph ? json(*p.hausdorff_graph) : json(nullptr)},
                                     {"hausdorff_lattice",
                                      p.hausdorff_lattice ? json(*p.hausdorff_lattice) : json(nullptr)},
                                     {"projection_lattice", p.projection_lattice},
                                     {"projection_continuum",
                                      p.projection_continuum ? json(*p.projection_continuum) : json(nullptr)}});
        if (p.graph.empty())
            empty = true;
    }

    // monotone decrease as ell shrinks, within the noise band
    auto monotone = [&](const std::string& name, const std::vector<double>& y) {
        for (std::size_t i = 1; i < y.size(); ++i) {
            const bool ok = y[i] <= y[i - 1] + c.noise_band;
            report["checks"].push_back(check(name + " ell=" + num(c.ell_list[i]), y[i], y[i - 1] + c.noise_band, ok));
            pass = pass && ok;
        }
        const bool can_fit = static_cast<int>(y.size()) >= kMinSlopePoints &&
                             std::all_of(y.begin(), y.end(), [](double x) { return x > 0.0; });
        report["series"].push_back(series(name, c.ell_list, y, can_fit ? fit_json(fit_loglog(c.ell_list, y), 0.0) : nullptr));
    };

    if (empty) {
        report["warnings"].push_back("window contains no eigenvalues of every operator; comparison is empty");
    } else {
        const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(c.eigen_count), ref.values.size());
        for (std::size_t k = 0; k < count; ++k) {
            std::vector<double> err;
            for (const auto& p : points)
                err.push_back(k < p.graph.size() ? std::abs(p.graph[k] - ref.values[k]) : INFINITY);
            monotone("graph eigenvalue " + std::to_string(k) + " error", err);
        }
        std::vector<double> hd, pl, pc;
        bool have_pc = true;
        for (const auto& p : points) {
            hd.push_back(p.hausdorff_graph.value_or(INFINITY));
            pl.push_back(p.projection_lattice);
            have_pc = have_pc && p.projection_continuum.has_value();
            pc.push_back(p.projection_continuum.value_or(0.0));
        }
        monotone("inverse-shift hausdorff graph", hd);
        monotone("projection distance lattice", pl);
        if (have_pc)
            monotone("projection distance continuum", pc);
        else
            report["warnings"].push_back("lattice vertices are not continuum grid points; continuum subspace angle skipped");
    }
    if (static_cast<int>(c.ell_list.size()) < kMinSlopePoints)
        report["warnings"].push_back("slope unavailable: fewer than 4 ell points");
    report["pass"] = pass;

    ensure_dir(c.out_dir);
    write_text(join_path(c.out_dir, "spectrum-converge.csv"), csv.text());
    write_text(join_path(c.out_dir, "spectrum-converge-distances.csv"), dist.text());
    write_report(c, report);
    return {report, pass};
}

} // namespace qglab::lab
