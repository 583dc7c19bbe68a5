#include "output.hpp"

#include "qglab/errors.hpp"
#include "qglab/lab/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace qglab::lab::detail {

using nlohmann::json;

std::string num(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

Csv::Csv(std::vector<std::string> header) : columns_(header.size()) { row(header); }

void Csv::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw InvalidParameter("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(columns_));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

json check(const std::string& name, double lhs, double bound, bool pass) {
    return {{"name", name}, {"lhs", lhs}, {"bound", bound}, {"pass", pass}};
}

json fit_json(const SlopeFit& f, double threshold) {
    return {{"slope", f.slope},
            {"standard_error", f.standard_error},
            {"ci95", {f.ci_low, f.ci_high}},
            {"constant", f.constant()},
            {"points", f.points},
            {"threshold", threshold},
            {"pass", f.slope >= threshold}};
}

json series(const std::string& name, const std::vector<double>& x, const std::vector<double>& y, const json& fit) {
    return {{"name", name}, {"x", x}, {"y", y}, {"fit", fit}};
}

json report_skeleton(const std::string& command, const ExperimentConfig& c) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return {{"command", command},
            {"provenance", {{"config_hash", config_hash(c)}, {"version", library_version()}, {"generated_at", stamp}}},
            {"config", to_json(c)},
            {"records", json::array()},
            {"checks", json::array()},
            {"series", json::array()},
            {"warnings", json::array()},
            {"pass", false}};
}

void write_report(const ExperimentConfig& c, const json& report) {
    ensure_dir(c.out_dir);
    write_text(join_path(c.out_dir, report.at("command").get<std::string>() + ".json"), report.dump(2) + "\n");
}

} // namespace qglab::lab::detail
