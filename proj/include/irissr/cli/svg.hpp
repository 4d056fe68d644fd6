#pragma once

#include <filesystem>

#include "irissr/eval/eval.hpp"

namespace irissr::cli {

// Minimal self-contained SVG emitters (axes, bars, polylines); deterministic
// output for byte-identical reports.
void write_histogram_svg(const eval::ScoreHistogram& hist, const std::string& title,
                         const std::filesystem::path& path);
void write_roc_svg(const std::vector<eval::RocPoint>& roc, const std::string& title,
                   const std::filesystem::path& path);

} // namespace irissr::cli
