#include "output.hpp"

#include "qglab/errors.hpp"
#include "qglab/lab/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace qglab::lab {

using nlohmann::json;
using namespace detail;

#ifndef QGLAB_VERSION
#define QGLAB_VERSION "0.0.0"
#endif

std::string library_version() { return QGLAB_VERSION; }

namespace {

std::string slug(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (std::isalnum(static_cast<unsigned char>(ch)))
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        else if (!out.empty() && out.back() != '-')
            out += '-';
    }
    while (!out.empty() && out.back() == '-')
        out.pop_back();
    return out;
}

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

// Log-log scatter of the measurements with the fitted line, if any.
std::string render_svg(const std::string& title, const std::vector<double>& x, const std::vector<double>& y,
                       const json& fit) {
    constexpr double W = 480, H = 360, L = 70, R = 20, T = 40, B = 50;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0 && y[i] > 0 && std::isfinite(y[i]))
            pts.emplace_back(std::log10(x[i]), std::log10(y[i]));
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"360\" font-family=\"sans-serif\" "
                      "font-size=\"12\">\n<rect width=\"480\" height=\"360\" fill=\"white\"/>\n";
    svg += "<text x=\"240\" y=\"22\" text-anchor=\"middle\">" + title + "</text>\n";
    if (pts.empty()) {
        svg += "<text x=\"240\" y=\"180\" text-anchor=\"middle\">no positive data</text>\n</svg>\n";
        return svg;
    }
    double x0 = pts[0].first, x1 = x0, y0 = pts[0].second, y1 = y0;
    for (const auto& [a, b] : pts) {
        x0 = std::min(x0, a);
        x1 = std::max(x1, a);
        y0 = std::min(y0, b);
        y1 = std::max(y1, b);
    }
    if (x1 - x0 < 1e-9) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (y1 - y0 < 1e-9) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double px = 0.05 * (x1 - x0), py = 0.05 * (y1 - y0);
    x0 -= px, x1 += px, y0 -= py, y1 += py;
    auto sx = [&](double a) { return L + (a - x0) / (x1 - x0) * (W - L - R); };
    auto sy = [&](double b) { return H - B - (b - y0) / (y1 - y0) * (H - T - B); };

    svg += "<line x1=\"" + fixed(L, 6) + "\" y1=\"" + fixed(H - B, 6) + "\" x2=\"" + fixed(W - R, 6) + "\" y2=\"" +
           fixed(H - B, 6) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fixed(L, 6) + "\" y1=\"" + fixed(T, 6) + "\" x2=\"" + fixed(L, 6) + "\" y2=\"" +
           fixed(H - B, 6) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double a = x0 + (x1 - x0) * i / 4.0;
        const double b = y0 + (y1 - y0) * i / 4.0;
        svg += "<text x=\"" + fixed(sx(a), 6) + "\" y=\"" + fixed(H - B + 18, 6) + "\" text-anchor=\"middle\">" +
               fixed(std::pow(10.0, a), 3) + "</text>\n";
        svg += "<text x=\"" + fixed(L - 6, 6) + "\" y=\"" + fixed(sy(b) + 4, 6) + "\" text-anchor=\"end\">" +
               fixed(std::pow(10.0, b), 3) + "</text>\n";
    }
    svg += "<text x=\"" + fixed((L + W - R) / 2, 6) + "\" y=\"" + fixed(H - 12, 6) +
           "\" text-anchor=\"middle\">ell (log scale)</text>\n";
    if (fit.is_object()) {
        const double s = fit.at("slope").get<double>();
        const double c = std::log10(fit.at("constant").get<double>());
        svg += "<line x1=\"" + fixed(sx(x0), 6) + "\" y1=\"" + fixed(sy(c + s * x0), 6) + "\" x2=\"" + fixed(sx(x1), 6) +
               "\" y2=\"" + fixed(sy(c + s * x1), 6) + "\" stroke=\"steelblue\" stroke-dasharray=\"4 3\"/>\n";
        svg += "<text x=\"" + fixed(W - R, 6) + "\" y=\"" + fixed(T + 4, 6) + "\" text-anchor=\"end\">slope " +
               fixed(s, 4) + "</text>\n";
    }
    for (const auto& [a, b] : pts)
        svg += "<circle cx=\"" + fixed(sx(a), 6) + "\" cy=\"" + fixed(sy(b), 6) + "\" r=\"3.5\" fill=\"firebrick\"/>\n";
    svg += "</svg>\n";
    return svg;
}

json load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read report '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("report '" + path + "' is not valid JSON: " + e.what());
    }
    for (const char* key : {"command", "provenance", "checks", "series", "pass"})
        if (!j.contains(key))
            throw IoError("report '" + path + "' lacks the '" + std::string(key) + "' field");
    return j;
}

} // namespace

std::string render_summary(const std::vector<std::pair<std::string, json>>& reports) {
    std::string out = "qglab summary\n";
    bool all = true;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& [name, r] = reports[i];
        const bool pass = r.at("pass").get<bool>();
        all = all && pass;
        std::size_t passed = 0, failed = 0;
        for (const auto& ch : r.at("checks"))
            (ch.at("pass").get<bool>() ? passed : failed)++;
        out += "\n[" + std::to_string(i + 1) + "] " + name + "\n";
        out += "  command: " + r.at("command").get<std::string>() + "\n";
        out += "  config: " + r.at("provenance").at("config_hash").get<std::string>() + "\n";
        out += "  result: " + std::string(pass ? "PASS" : "FAIL") + " (" + std::to_string(passed) + " checks passed, " +
               std::to_string(failed) + " failed)\n";
        for (const auto& s : r.at("series")) {
            out += "  series " + s.at("name").get<std::string>() + ":";
            const auto x = s.at("x").get<std::vector<json>>();
            const auto y = s.at("y").get<std::vector<json>>();
            for (std::size_t k = 0; k < x.size() && k < y.size(); ++k)
                out += " (" + fixed(x[k].get<double>(), 6) + ", " +
                       (y[k].is_number() ? fixed(y[k].get<double>(), 6) : std::string("n/a")) + ")";
            out += "\n";
            const auto& f = s.at("fit");
            if (f.is_object())
                out += "    slope " + fixed(f.at("slope").get<double>(), 5) + " +- " +
                       fixed(f.at("standard_error").get<double>(), 3) + " (95% CI " +
                       fixed(f.at("ci95")[0].get<double>(), 5) + " .. " + fixed(f.at("ci95")[1].get<double>(), 5) +
                       ", C = " + fixed(f.at("constant").get<double>(), 5) + ", " +
                       std::to_string(f.at("points").get<int>()) + " points)\n";
        }
        for (const auto& ch : r.at("checks"))
            if (!ch.at("pass").get<bool>())
                out += "  failed: " + ch.at("name").get<std::string>() + " (lhs " +
                       (ch.at("lhs").is_number() ? fixed(ch.at("lhs").get<double>(), 6) : std::string("n/a")) +
                       ", bound " +
                       (ch.at("bound").is_number() ? fixed(ch.at("bound").get<double>(), 6) : std::string("n/a")) +
                       ")\n";
        if (r.contains("warnings"))
            for (const auto& w : r.at("warnings"))
                out += "  note: " + w.get<std::string>() + "\n";
    }
    out += "\noverall: " + std::string(all ? "PASS" : "FAIL") + "\n";
    return out;
}

CommandResult run_report(const std::string& out_dir, const std::vector<std::string>& report_paths) {
    if (report_paths.empty())
        throw InvalidParameter("report needs at least one report file");
    std::vector<std::pair<std::string, json>> reports;
    for (const auto& p : report_paths)
        reports.emplace_back(std::filesystem::path(p).filename().string(), load_report(p));

    ensure_dir(out_dir);
    json merged{{"command", "report"}, {"inputs", json::array()}, {"figures", json::array()}};
    bool pass = true;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& [name, r] = reports[i];
        pass = pass && r.at("pass").get<bool>();
        merged["inputs"].push_back({{"file", name},
                                    {"command", r.at("command")},
                                    {"config_hash", r.at("provenance").at("config_hash")},
                                    {"pass", r.at("pass")}});
        for (const auto& s : r.at("series")) {
            const std::string base = "fig-" + std::to_string(i + 1) + "-" + slug(s.at("name").get<std::string>());
            std::vector<double> x, y;
            for (const auto& v : s.at("x"))
                x.push_back(v.get<double>());
            for (const auto& v : s.at("y"))
                y.push_back(v.is_number() ? v.get<double>() : NAN);
            const auto& fit = s.at("fit");
            Csv csv({"x", "y", "fitted"});
            for (std::size_t k = 0; k < x.size(); ++k) {
                std::string fitted;
                if (fit.is_object())
                    fitted = num(fit.at("constant").get<double>() * std::pow(x[k], fit.at("slope").get<double>()));
                csv.row({num(x[k]), num(y[k]), fitted});
            }
            write_text(join_path(out_dir, base + ".csv"), csv.text());
            write_text(join_path(out_dir, base + ".svg"), render_svg(s.at("name").get<std::string>(), x, y, fit));
            merged["figures"].push_back(base);
        }
    }
    write_text(join_path(out_dir, "summary.txt"), render_summary(reports));
    merged["pass"] = pass;
    return {merged, pass};
}

} // namespace qglab::lab
