#pragma once

#include "qglab/lab/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qglab::lab {

/// Structured report plus the overall verdict. Every command also writes
/// `<command>.json` and its CSV tables into the configured output directory.
struct CommandResult {
    nlohmann::json report;
    bool pass = false;
};

CommandResult run_lemma_check(const ExperimentConfig& c);
/// Throws InvalidParameter for real z.
CommandResult run_resolvent_compare(const ExperimentConfig& c);
CommandResult run_spectrum_converge(const ExperimentConfig& c);

/// Merges report files into summary.txt plus per-figure CSV and SVG files.
/// Throws InvalidParameter on an empty list and IoError naming a missing or
/// corrupt file.
CommandResult run_report(const std::string& out_dir, const std::vector<std::string>& report_paths);

/// Renders the deterministic text summary of already loaded reports.
std::string render_summary(const std::vector<std::pair<std::string, nlohmann::json>>& reports);

std::string library_version();

} // namespace qglab::lab
