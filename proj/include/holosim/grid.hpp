#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "holosim/brain.hpp"
#include "holosim/config.hpp"
#include "holosim/engine.hpp"

namespace holosim {

// One point of the 2x2x3x3 factor grid (plus a repetition index when a cell
// is replicated).
struct GridCell {
    MeanLevel mgmt_mean = MeanLevel::High;
    MeanLevel func_mean = MeanLevel::High;
    StdLevel mgmt_std = StdLevel::Low;
    StdLevel func_std = StdLevel::Low;
    int repetition = 0;

    // Directory-safe identifier, e.g. "mmean-high_fmean-low_mstd-medium_fstd-high".
    std::string id() const;
};

void to_json(json& j, const GridCell& v);
void from_json(const json& j, GridCell& v);

// All cells in deterministic order: mgmt_mean, func_mean, mgmt_std, func_std,
// repetition (innermost).
std::vector<GridCell> expand_grid(const GridOptions& options);

// Pure function of (base_seed, cell coordinates); equal inputs always give
// equal seeds and the default grid yields 36 pairwise distinct values.
std::uint64_t cell_seed(std::uint64_t base_seed, const GridCell& cell);

struct ManifestEntry {
    std::string run_id; // also the artifact directory name
    GridCell cell;
    std::uint64_t seed = 0;
    std::string status; // "complete" or "failed"
    std::string error;
    std::map<std::string, std::string> files; // filename -> sha256
};

struct Manifest {
    std::uint64_t base_seed = 0;
    std::vector<ManifestEntry> entries;

    const ManifestEntry* find(const std::string& run_id) const;
};

void to_json(json& j, const ManifestEntry& v);
void from_json(const json& j, ManifestEntry& v);
void to_json(json& j, const Manifest& v);
void from_json(const json& j, Manifest& v);

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

// True when every file the entry lists exists under out_dir/run_id with a
// matching digest.
bool manifest_entry_intact(const std::filesystem::path& out_dir, const ManifestEntry& entry);

using BrainFactory = std::function<std::unique_ptr<Brain>(const AppConfig&)>;
using GridLogger = std::function<void(const std::string&)>;

// Default factory honouring cfg.brain (deterministic or LLM-backed).
BrainFactory default_brain_factory();

// Execute the full grid under out_dir with at most `parallelism` concurrent
// cells.  Cells whose manifest entries are complete and intact are skipped;
// per-cell failures are recorded and the remaining cells continue.  Returns
// the final manifest (also persisted to out_dir/manifest.json).
Manifest run_grid(const AppConfig& cfg, const std::filesystem::path& out_dir, int parallelism,
                  const BrainFactory& factory = {}, const GridLogger& log = {});

} // namespace holosim
