#include "output.hpp"

#include "qglab/discrete_operator.hpp"
#include "qglab/errors.hpp"
#include "qglab/lab/commands.hpp"
#include "qglab/lab/probes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qglab::lab {

using nlohmann::json;
using namespace detail;

namespace {

// rounding slack for the inequality checks
constexpr double kSlack = 1e-12;

struct LemmaPoint {
    std::string rows;
    json record;
    json checks = json::array();
    json violations = json::array();
    double uniform_ikd = 0.0;
    double uniform_agap = 0.0;
    double identification = 0.0;
    bool pass = true;
};

LemmaPoint lemma_point(const ExperimentConfig& c, const std::string& hash, std::size_t index) {
    const double ell = c.ell_list[index];
    const auto g = build_lattice(c.nu, ell, c.lattice_radius(ell));
    auto rng = derived_rng(c.seed, {1, static_cast<std::uint64_t>(c.nu), index});
    const auto probes = probe_suite(g, c.probes, rng);

    LemmaPoint pt;
    Csv csv({"config_hash", "nu", "ell", "probe", "family", "check", "lhs", "bound", "pass"});
    double max_ikd = 0.0, max_agap = 0.0, max_ident = 0.0;
    double uniform_ratio = 0.0;
    int violations = 0;
    for (std::size_t q = 0; q < probes.size(); ++q) {
        const auto& probe = probes[q];
        const auto ikd = ik_defect_check(probe.function);
        const auto agap = adjoint_gap_check(probe.function);
        const auto ident = identification_defect(probe.function);
        const bool ok_ikd = ikd.lhs <= ikd.bound * (1.0 + kSlack);
        const bool ok_agap = agap.lhs <= agap.bound * (1.0 + kSlack);
        const std::string fam = family_name(probe.family);
        const std::string qs = std::to_string(q);
        csv.row({hash, std::to_string(c.nu), num(ell), qs, fam, "ik_defect", num(ikd.lhs), num(ikd.bound), ok_ikd ? "1" : "0"});
        csv.row({hash, std::to_string(c.nu), num(ell), qs, fam, "adjoint_gap", num(agap.lhs), num(agap.bound), ok_agap ? "1" : "0"});
        csv.row({hash, std::to_string(c.nu), num(ell), qs, fam, "identification", num(ident.lhs), num(ident.bound), "-"});
        max_ikd = std::max(max_ikd, ikd.lhs);
        max_agap = std::max(max_agap, agap.lhs);
        max_ident = std::max(max_ident, ident.lhs);
        if (probe.family == ProbeFamily::UniformBubble) {
            uniform_ratio = agap.lhs / agap.bound;
            pt.uniform_ikd = ikd.lhs;
            pt.uniform_agap = agap.lhs;
        }
        if (!ok_ikd || !ok_agap) {
            ++violations;
            const std::string name = "violation-nu" + std::to_string(c.nu) + "-ell" + std::to_string(index) +
                                     "-probe" + qs + ".txt";
            ensure_dir(join_path(c.out_dir, "violations"));
            std::ostringstream os;
            write_graph_function(os, probe.function);
            write_text(join_path(join_path(c.out_dir, "violations"), name), os.str());
            pt.violations.push_back({{"ell", ell},
                                     {"probe", q},
                                     {"family", fam},
                                     {"ik_defect", {ikd.lhs, ikd.bound}},
                                     {"adjoint_gap", {agap.lhs, agap.bound}},
                                     {"file", join_path("violations", name)}});
        }
    }

    // adjointness pairs are dealt round-robin over the sweep
    double adjoint_max = 0.0;
    int pairs = 0;
    auto pair_rng = derived_rng(c.seed, {2, static_cast<std::uint64_t>(c.nu), index});
    for (int q = static_cast<int>(index); q < c.adjoint_pairs; q += static_cast<int>(c.ell_list.size())) {
        const auto u = random_vertex_function(g, pair_rng);
        const auto phi = make_probe(g, ProbeFamily::Mixed, pair_rng).function;
        const auto iu = embed_I(u);
        const double err = std::abs(h1_inner(iu, phi) - h2_inner(u, adjoint_Istar(phi))) / (h1_norm(iu) * h1_norm(phi));
        adjoint_max = std::max(adjoint_max, err);
        ++pairs;
    }

    const auto v = c.make_potential();
    const auto rf = resolvent_factor_norms(g, v, c.z_list.front(), c.power);

    pt.identification = max_ident / ell;
    pt.rows = csv.text();
    const std::string tag = "[nu=" + std::to_string(c.nu) + ",ell=" + num(ell) + "]";
    const bool ok_ikd = max_ikd <= ell * (1.0 + kSlack);
    const bool ok_agap = max_agap <= ell / std::sqrt(5.0) * (1.0 + kSlack);
    const bool ok_adj = adjoint_max <= c.adjoint_tol;
    const bool ok_nonvac = uniform_ratio >= c.nonvacuity;
    pt.checks.push_back(check("ik_defect" + tag, max_ikd, ell, ok_ikd));
    pt.checks.push_back(check("adjoint_gap" + tag, max_agap, ell / std::sqrt(5.0), ok_agap));
    pt.checks.push_back(check("adjoint-gap-nonvacuity" + tag, c.nonvacuity, uniform_ratio, ok_nonvac));
    if (pairs > 0)
        pt.checks.push_back(check("adjointness" + tag, adjoint_max, c.adjoint_tol, ok_adj));
    pt.pass = violations == 0 && ok_ikd && ok_agap && ok_adj && ok_nonvac;
    pt.record = {{"ell", ell},
                 {"vertices", g->vertex_count()},
                 {"segments", g->segment_count()},
                 {"probes", probes.size()},
                 {"violations", violations},
                 {"ik_defect_max_ratio", max_ikd},
                 {"adjoint_gap_max_ratio", max_agap},
                 {"adjoint_gap_uniform_bubble_fraction", uniform_ratio},
                 {"identification_constant", pt.identification},
                 {"adjoint_pairs", pairs},
                 {"adjoint_max_defect", adjoint_max},
                 {"resolvent_factors",
                  {{"z", format_complex(c.z_list.front())},
                   {"norm_dl", rf.norm_dl},
                   {"norm_v", rf.norm_v},
                   {"bound_scale", rf.bound},
                   {"norm_dl_times_ell", rf.norm_dl * ell},
                   {"norm_v_times_ell", rf.norm_v * ell}}}};
    return pt;
}

} // namespace

CommandResult run_lemma_check(const ExperimentConfig& c) {
    validate(c);
    const std::string hash = config_hash(c);
    const auto points =
        parallel_map(c.ell_list.size(), [&](std::size_t i) { return lemma_point(c, hash, i); });

    json report = report_skeleton("lemma-check", c);
    std::string csv;
    bool pass = true;
    std::vector<double> u_ikd, u_agap, ident;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        csv += i == 0 ? p.rows : p.rows.substr(p.rows.find('\n') + 1);
        report["records"].push_back(p.record);
        for (const auto& ch : p.checks)
            report["checks"].push_back(ch);
        for (const auto& v : p.violations)
            report["violations"].push_back(v);
        pass = pass && p.pass;
        u_ikd.push_back(p.uniform_ikd);
        u_agap.push_back(p.uniform_agap);
        ident.push_back(p.identification);
    }
    if (!report.contains("violations"))
        report["violations"] = json::array();

    const auto& ells = c.ell_list;
    auto maybe_fit = [&](const std::vector<double>& y) -> json {
        if (static_cast<int>(ells.size()) < kMinSlopePoints)
            return nullptr;
        return fit_json(fit_loglog(ells, y), c.slope_threshold);
    };
    if (static_cast<int>(ells.size()) < kMinSlopePoints)
        report["warnings"].push_back("slope unavailable: fewer than 4 ell points");
    report["series"].push_back(series("ik_defect uniform bubble lhs", ells, u_ikd, maybe_fit(u_ikd)));
    report["series"].push_back(series("adjoint_gap uniform bubble lhs", ells, u_agap, maybe_fit(u_agap)));
    report["series"].push_back(series("identification constant", ells, ident, nullptr));
    const auto [lo, hi] = std::minmax_element(ident.begin(), ident.end());
    report["identification_constant_spread"] = *lo > 0.0 ? *hi / *lo : 0.0;
    report["pass"] = pass;

    ensure_dir(c.out_dir);
    write_text(join_path(c.out_dir, "lemma-check.csv"), csv);
    write_report(c, report);
    return {report, pass};
}

} // namespace qglab::lab
