#include "holosim/grid.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "holosim/artifact_io.hpp"
#include "holosim/llm_brain.hpp"
#include "holosim/rng.hpp"

namespace holosim {

std::string GridCell::id() const {
    std::string s = "mmean-" + to_string(mgmt_mean) + "_fmean-" + to_string(func_mean) +
                    "_mstd-" + to_string(mgmt_std) + "_fstd-" + to_string(func_std);
    if (repetition > 0) s += "_rep" + std::to_string(repetition);
    return s;
}

void to_json(json& j, const GridCell& v) {
    j = json{{"mgmt_mean", to_string(v.mgmt_mean)},
             {"func_mean", to_string(v.func_mean)},
             {"mgmt_std", to_string(v.mgmt_std)},
             {"func_std", to_string(v.func_std)},
             {"repetition", v.repetition}};
}

void from_json(const json& j, GridCell& v) {
    v.mgmt_mean = mean_level_from_string(j.at("mgmt_mean").get<std::string>());
    v.func_mean = mean_level_from_string(j.at("func_mean").get<std::string>());
    v.mgmt_std = std_level_from_string(j.at("mgmt_std").get<std::string>());
    v.func_std = std_level_from_string(j.at("func_std").get<std::string>());
    v.repetition = j.value("repetition", 0);
}

std::vector<GridCell> expand_grid(const GridOptions& options) {
    if (options.repetitions < 1) throw InvalidConfig("grid repetitions must be >= 1");
    static constexpr MeanLevel kMeans[] = {MeanLevel::High, MeanLevel::Low};
    static constexpr StdLevel kStds[] = {StdLevel::Low, StdLevel::Medium, StdLevel::High};
    std::vector<GridCell> cells;
    cells.reserve(static_cast<std::size_t>(36) * static_cast<std::size_t>(options.repetitions));
    for (MeanLevel mm : kMeans)
        for (MeanLevel fm : kMeans)
            for (StdLevel ms : kStds)
                for (StdLevel fs : kStds)
                    for (int rep = 0; rep < options.repetitions; ++rep)
                        cells.push_back(GridCell{mm, fm, ms, fs, rep});
    return cells;
}

std::uint64_t cell_seed(std::uint64_t base_seed, const GridCell& cell) {
    const std::string canonical = "mgmt_mean=" + to_string(cell.mgmt_mean) +
                                  ";func_mean=" + to_string(cell.func_mean) +
                                  ";mgmt_std=" + to_string(cell.mgmt_std) +
                                  ";func_std=" + to_string(cell.func_std) +
                                  ";rep=" + std::to_string(cell.repetition);
    return splitmix64(base_seed ^ fnv1a64(canonical.c_str()));
}

const ManifestEntry* Manifest::find(const std::string& run_id) const {
    for (const ManifestEntry& e : entries)
        if (e.run_id == run_id) return &e;
    return nullptr;
}

void to_json(json& j, const ManifestEntry& v) {
    j = json{{"run_id", v.run_id}, {"cell", v.cell},   {"seed", v.seed},
             {"status", v.status}, {"error", v.error}, {"files", v.files}};
}

void from_json(const json& j, ManifestEntry& v) {
    j.at("run_id").get_to(v.run_id);
    j.at("cell").get_to(v.cell);
    j.at("seed").get_to(v.seed);
    j.at("status").get_to(v.status);
    v.error = j.value("error", "");
    if (j.contains("files")) j.at("files").get_to(v.files);
}

void to_json(json& j, const Manifest& v) {
    j = json{{"base_seed", v.base_seed}, {"entries", v.entries}};
}

void from_json(const json& j, Manifest& v) {
    j.at("base_seed").get_to(v.base_seed);
    j.at("entries").get_to(v.entries);
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read manifest " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("manifest parse", e.what());
    }
    try {
        return j.get<Manifest>();
    } catch (const json::exception& e) {
        throw ValidationError("manifest schema", e.what());
    }
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
    atomic_write(path, json(manifest).dump(2) + "\n");
}

bool manifest_entry_intact(const std::filesystem::path& out_dir, const ManifestEntry& entry) {
    if (entry.files.empty()) return false;
    const std::filesystem::path dir = out_dir / entry.run_id;
    for (const auto& [name, digest] : entry.files) {
        const std::filesystem::path p = dir / name;
        std::error_code ec;
        if (!std::filesystem::exists(p, ec) || ec) return false;
        if (sha256_file(p) != digest) return false;
    }
    return true;
}

BrainFactory default_brain_factory() {
    return [](const AppConfig& cfg) -> std::unique_ptr<Brain> {
        if (cfg.brain == BrainKind::Llm) return std::make_unique<LlmBrain>(cfg.world, cfg.llm);
        return std::make_unique<DeterministicBrain>(cfg.world);
    };
}

Manifest run_grid(const AppConfig& cfg, const std::filesystem::path& out_dir, int parallelism,
                  const BrainFactory& factory, const GridLogger& log) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path manifest_path = out_dir / "manifest.json";

    Manifest previous;
    if (std::filesystem::exists(manifest_path)) previous = load_manifest(manifest_path);

    const std::vector<GridCell> cells = expand_grid(cfg.grid);
    {
        std::set<std::uint64_t> seen;
        for (const GridCell& c : cells)
            if (!seen.insert(cell_seed(cfg.grid.base_seed, c)).second)
                throw InvalidConfig("grid cell seeds collide; change base_seed");
    }

    Manifest manifest;
    manifest.base_seed = cfg.grid.base_seed;
    manifest.entries.resize(cells.size());

    struct Job {
        std::size_t slot;
        GridCell cell;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const GridCell& cell = cells[k];
        const std::uint64_t seed = cell_seed(cfg.grid.base_seed, cell);
        ManifestEntry& slot = manifest.entries[k];
        slot.run_id = cell.id();
        slot.cell = cell;
        slot.seed = seed;
        slot.status = "pending";

        const ManifestEntry* old = previous.find(slot.run_id);
        if (old != nullptr && old->status == "complete" && old->seed == seed &&
            manifest_entry_intact(out_dir, *old)) {
            slot = *old;
            if (log) log("[grid] " + slot.run_id + " intact, skipped");
        } else {
            jobs.push_back(Job{k, cell, seed});
        }
    }
    save_manifest(manifest, manifest_path);

    const BrainFactory make_brain = factory ? factory : default_brain_factory();
    std::mutex mu;
    std::atomic<std::size_t> cursor{0};

    const auto worker = [&]() {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= jobs.size()) return;
            const Job& job = jobs[k];

            ManifestEntry entry;
            entry.run_id = job.cell.id();
            entry.cell = job.cell;
            entry.seed = job.seed;
            try {
                AppConfig cell_cfg = cfg;
                cell_cfg.members.mgmt_mean_level = job.cell.mgmt_mean;
                cell_cfg.members.func_mean_level = job.cell.func_mean;
                cell_cfg.members.mgmt_std_level = job.cell.mgmt_std;
                cell_cfg.members.func_std_level = job.cell.func_std;

                const std::unique_ptr<Brain> brain = make_brain(cell_cfg);
                Simulation sim(cell_cfg, job.seed, *brain);
                const RunArtifact artifact = sim.run();
                const ArtifactFiles files = write_run_artifact(artifact, out_dir / entry.run_id);
                entry.files["config.json"] = sha256_file(files.config_json);
                entry.files["events.jsonl"] = sha256_file(files.events_jsonl);
                entry.files["snapshots.json"] = sha256_file(files.snapshots_json);
                entry.status = artifact.error.empty() ? "complete" : "failed";
                entry.error = artifact.error;
            } catch (const std::exception& e) {
                entry.status = "failed";
                entry.error = e.what();
            }

            const std::lock_guard<std::mutex> lock(mu);
            manifest.entries[job.slot] = entry;
            save_manifest(manifest, manifest_path);
            if (log)
                log("[grid] " + entry.run_id + " " + entry.status +
                    (entry.error.empty() ? "" : " (" + entry.error + ")"));
        }
    };

    const std::size_t n_threads =
        std::min<std::size_t>(std::max(parallelism, 1), std::max<std::size_t>(jobs.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t + 1 < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    return manifest;
}

} // namespace holosim
