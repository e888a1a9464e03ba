#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "holosim/grid.hpp"
#include "holosim/stats.hpp"

namespace holosim {

struct AnalyzeOptions {
    std::filesystem::path manifest_path;
    std::filesystem::path out_dir;
};

struct AnalyzeResult {
    int runs_total = 0;
    int runs_complete = 0;
    std::vector<std::string> table_files;      // paths written, relative to out_dir
    std::vector<std::string> skipped_tables;   // "table1: <reason>"
    // "table2/stress/management_competence" -> "+" | "-" | "ns"
    std::map<std::string, std::string> signs;
};

// Runs listed complete in the manifest, loaded from its directory.
std::vector<RunArtifact> load_runs_from_manifest(const std::filesystem::path& manifest_path);

// Sign/significance of one non-intercept coefficient at the 0.05 level.
std::string sign_of(const FitResult& fit, std::size_t term);

// Full report bundle: regression tables in the published layouts, a
// coefficient sign summary, and per-run nodes/edges/DOT graph exports.
// Tables that cannot be built are recorded in skipped_tables; the bundle
// itself always completes.
AnalyzeResult analyze(const AnalyzeOptions& opts, const GridLogger& log = {});

} // namespace holosim
