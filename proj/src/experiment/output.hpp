#pragma once

#include "qglab/lab/config.hpp"
#include "qglab/lab/fit.hpp"

#include <json.hpp>

#include <future>
#include <string>
#include <vector>

namespace qglab::lab::detail {

/// Shortest round-trip decimal form.
std::string num(double x);

class Csv {
public:
    explicit Csv(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    const std::string& text() const noexcept { return text_; }

private:
    std::size_t columns_;
    std::string text_;
};

void ensure_dir(const std::string& dir);
void write_text(const std::string& path, const std::string& text);
std::string join_path(const std::string& dir, const std::string& name);

nlohmann::json check(const std::string& name, double lhs, double bound, bool pass);
nlohmann::json fit_json(const SlopeFit& f, double threshold);
/// A series of (ell, value) points with an optional fit.
nlohmann::json series(const std::string& name, const std::vector<double>& x, const std::vector<double>& y,
                      const nlohmann::json& fit);

nlohmann::json report_skeleton(const std::string& command, const ExperimentConfig& c);
/// Writes <command>.json into the output directory.
void write_report(const ExperimentConfig& c, const nlohmann::json& report);

/// Runs f(0..n-1) concurrently and returns the results in index order.
template <class F>
auto parallel_map(std::size_t n, F&& f) {
    using R = decltype(f(std::size_t{}));
    std::vector<std::future<R>> futures;
    futures.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        futures.push_back(std::async(std::launch::async, f, i));
    std::vector<R> out;
    out.reserve(n);
    for (auto& fut : futures)
        out.push_back(fut.get());
    return out;
}

} // namespace qglab::lab::detail
