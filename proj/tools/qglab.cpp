// Convergence lab: runs the identification-operator checks, resolvent-norm
// sweeps and spectral comparisons, and merges their reports.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error,
// 3 numerical failure, 4 I/O failure.

#include "qglab/errors.hpp"
#include "qglab/lab/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

using namespace qglab;
using namespace qglab::lab;

enum Exit { kPass = 0, kCheckFailed = 1, kUsage = 2, kNumerical = 3, kIo = 4 };

struct Overrides {
    std::string config;
    std::optional<int> nu;
    std::optional<std::string> ell_list;
    std::vector<std::string> z;
    std::optional<double> radius;
    std::optional<double> fine_h;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> potential;
    std::optional<std::string> window;
    std::optional<int> probes;
};

void add_overrides(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
    sub->add_option("--nu", o.nu, "lattice dimension (1..3)");
    sub->add_option("--ell-list", o.ell_list, "comma-separated, strictly decreasing edge lengths");
    sub->add_option("--z", o.z, "spectral parameter, repeatable (e.g. i, 1+2i)");
    sub->add_option("--radius", o.radius, "Dirichlet wall half-width R");
    sub->add_option("--fine-h", o.fine_h, "finest continuum grid spacing");
    sub->add_option("--seed", o.seed, "probe RNG seed");
    sub->add_option("--out-dir", o.out_dir, "output directory");
    sub->add_option("--potential", o.potential, "label[:key=value,...], e.g. well:depth=2,width=0.5");
    sub->add_option("--window", o.window, "spectral window a,b");
    sub->add_option("--probes", o.probes, "probes per ell");
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.nu)
        c.nu = *o.nu;
    if (o.ell_list)
        c.ell_list = parse_real_list(*o.ell_list);
    if (!o.z.empty()) {
        c.z_list.clear();
        for (const auto& s : o.z)
            c.z_list.push_back(parse_complex(s));
    }
    if (o.radius)
        c.radius = *o.radius;
    if (o.fine_h)
        c.fine_h = *o.fine_h;
    if (o.seed)
        c.seed = *o.seed;
    if (o.out_dir)
        c.out_dir = *o.out_dir;
    if (o.probes)
        c.probes = *o.probes;
    if (o.window) {
        const auto w = parse_real_list(*o.window);
        if (w.size() != 2)
            throw ParseError("--window needs exactly two numbers, got '" + *o.window + "'");
        c.window = Window{w[0], w[1]};
    }
    if (o.potential) {
        const auto& s = *o.potential;
        const auto colon = s.find(':');
        c.potential = s.substr(0, colon);
        c.potential_params.clear();
        if (colon != std::string::npos) {
            std::size_t pos = colon + 1;
            while (pos <= s.size()) {
                const auto comma = std::min(s.find(',', pos), s.size());
                const auto item = s.substr(pos, comma - pos);
                const auto eq = item.find('=');
                if (eq == std::string::npos)
                    throw ParseError("potential parameter '" + item + "' is not key=value");
                c.potential_params[item.substr(0, eq)] = parse_real_list(item.substr(eq + 1)).at(0);
                pos = comma + 1;
            }
        }
    }
    validate(c);
    return c;
}

int finish(const CommandResult& r) {
    std::cout << r.report.at("command").get<std::string>() << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& ch : r.report.value("checks", nlohmann::json::array()))
        if (!ch.at("pass").get<bool>())
            std::cout << "  failed " << ch.at("name").get<std::string>() << ": lhs " << ch.at("lhs").dump()
                      << " bound " << ch.at("bound").dump() << "\n";
    for (const auto& w : r.report.value("warnings", nlohmann::json::array()))
        std::cout << "  note: " << w.get<std::string>() << "\n";
    return r.pass ? kPass : kCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qglab: lattice and quantum-graph convergence lab"};
    app.set_version_flag("--version", library_version());
    app.require_subcommand(1);

    Overrides lemma, resolvent, spectrum;
    auto* l = app.add_subcommand("lemma-check", "identification-operator inequalities over a probe suite");
    add_overrides(l, lemma);
    auto* r = app.add_subcommand("resolvent-compare", "resolvent-difference norms and their rate in ell");
    add_overrides(r, resolvent);
    auto* s = app.add_subcommand("spectrum-converge", "windowed spectra against the continuum reference");
    add_overrides(s, spectrum);

    std::vector<std::string> report_paths;
    std::string report_out = "qglab-out";
    auto* rep = app.add_subcommand("report", "merge JSON reports into a summary and plot files");
    rep->add_option("reports", report_paths, "report JSON files");
    rep->add_option("--out-dir", report_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (l->parsed())
            return finish(run_lemma_check(resolve(lemma)));
        if (r->parsed())
            return finish(run_resolvent_compare(resolve(resolvent)));
        if (s->parsed())
            return finish(run_spectrum_converge(resolve(spectrum)));
        const auto res = run_report(report_out, report_paths);
        std::cout << "report: " << (res.pass ? "PASS" : "FAIL") << " (" << report_paths.size()
                  << " inputs, summary in " << report_out << ")\n";
        return kPass;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidInterval& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ShiftTooSmall& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
}
