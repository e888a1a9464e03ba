#include "holosim.h"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "holosim/artifact_io.hpp"
#include "holosim/config.hpp"
#include "holosim/grid.hpp"
#include "holosim/report.hpp"
#include "holosim/stats.hpp"

namespace {

thread_local std::string g_last_error;

struct config_impl {
    holosim::AppConfig cfg;
};

holosim_status fail(holosim_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename Fn>
holosim_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const holosim::InvalidConfig& e) {
        return fail(HOLOSIM_ERR_CONFIG, e.what());
    } catch (const holosim::ValidationError& e) {
        return fail(HOLOSIM_ERR_CONFIG, e.what());
    } catch (const holosim::BackendError& e) {
        return fail(HOLOSIM_ERR_BACKEND, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(HOLOSIM_ERR_IO, e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(HOLOSIM_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(HOLOSIM_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(HOLOSIM_ERR_RUNTIME, "unknown failure");
    }
}

holosim::GridLogger make_logger(holosim_log_fn log, void* user) {
    if (log == nullptr) return {};
    return [log, user](const std::string& line) { log(line.c_str(), user); };
}

holosim_status copy_hex(const std::string& hex, char* out, size_t len) {
    if (out == nullptr || len < hex.size() + 1)
        return fail(HOLOSIM_ERR_CONFIG, "digest buffer too small (need 65 bytes)");
    std::memcpy(out, hex.c_str(), hex.size() + 1);
    return HOLOSIM_OK;
}

} // namespace

extern "C" {

const char* holosim_version(void) { return "1.0.0"; }

const char* holosim_last_error(void) { return g_last_error.c_str(); }

holosim_status holosim_config_default(holosim_config** out) {
    return guarded([&]() -> holosim_status {
        if (out == nullptr) return fail(HOLOSIM_ERR_CONFIG, "null output handle");
        *out = reinterpret_cast<holosim_config*>(new config_impl{holosim::default_config()});
        return HOLOSIM_OK;
    });
}

holosim_status holosim_config_load(const char* path, holosim_config** out) {
    return guarded([&]() -> holosim_status {
        if (path == nullptr || out == nullptr)
            return fail(HOLOSIM_ERR_CONFIG, "null argument to holosim_config_load");
        *out = reinterpret_cast<holosim_config*>(new config_impl{holosim::load_config(path)});
        return HOLOSIM_OK;
    });
}

holosim_status holosim_config_save(const holosim_config* cfg, const char* path) {
    return guarded([&]() -> holosim_status {
        if (cfg == nullptr || path == nullptr)
            return fail(HOLOSIM_ERR_CONFIG, "null argument to holosim_config_save");
        holosim::save_config(reinterpret_cast<const config_impl*>(cfg)->cfg, path);
        return HOLOSIM_OK;
    });
}

holosim_status holosim_config_set_brain(holosim_config* cfg, const char* brain) {
    return guarded([&]() -> holosim_status {
        if (cfg == nullptr || brain == nullptr)
            return fail(HOLOSIM_ERR_CONFIG, "null argument to holosim_config_set_brain");
        reinterpret_cast<config_impl*>(cfg)->cfg.brain = holosim::brain_from_string(brain);
        return HOLOSIM_OK;
    });
}

holosim_status holosim_config_base_seed(const holosim_config* cfg, uint64_t* out) {
    return guarded([&]() -> holosim_status {
        if (cfg == nullptr || out == nullptr)
            return fail(HOLOSIM_ERR_CONFIG, "null argument to holosim_config_base_seed");
        *out = reinterpret_cast<const config_impl*>(cfg)->cfg.grid.base_seed;
        return HOLOSIM_OK;
    });
}

void holosim_config_free(holosim_config* cfg) { delete reinterpret_cast<config_impl*>(cfg); }

holosim_status holosim_run(const holosim_config* cfg, uint64_t seed, const char* out_dir,
                           holosim_log_fn log, void* user) {
    return guarded([&]() -> holosim_status {
        if (cfg == nullptr || out_dir == nullptr)
            return fail(HOLOSIM_ERR_CONFIG, "null argument to holosim_run");
        const holosim::AppConfig& app = reinterpret_cast<const config_impl*>(cfg)->cfg;
        const auto logger = make_logger(log, user);

        const std::unique_ptr<holosim::Brain> brain = holosim::default_brain_factory()(app);
        holosim::Simulation sim(app, seed, *brain);
        const holosim::RunArtifact artifact = sim.run();
        holosim::write_run_artifact(artifact, out_dir);
        if (logger)
            logger("[run] seed " + std::to_string(seed) + " -> " + std::string(out_dir) +
                   (artifact.error.empty() ? "" : " (aborted: " + artifact.error + ")"));
        if (!artifact.error.empty()) return fail(HOLOSIM_ERR_BACKEND, artifact.error);
        return HOLOSIM_OK;
    });
}

holosim_status holosim_grid(const holosim_config* cfg, const char* out_dir, int parallelism,
                            holosim_log_fn log, void* user) {
    return guarded([&]() -> holosim_status {
        if (cfg == nullptr || out_dir == nullptr)
            return fail(HOLOSIM_ERR_CONFIG, "null argument to holosim_grid");
        const holosim::AppConfig& app = reinterpret_cast<const config_impl*>(cfg)->cfg;
        const holosim::Manifest manifest =
            holosim::run_grid(app, out_dir, parallelism, {}, make_logger(log, user));
        int failed = 0;
        for (const holosim::ManifestEntry& e : manifest.entries)
            if (e.status != "complete") ++failed;
        if (failed > 0)
            return fail(HOLOSIM_ERR_RUNTIME,
                        std::to_string(failed) + " of " + std::to_string(manifest.entries.size()) +
                            " grid cells failed; see manifest.json");
        return HOLOSIM_OK;
    });
}

holosim_status holosim_analyze(const char* manifest_path, const char* out_dir, holosim_log_fn log,
                               void* user) {
    return guarded([&]() -> holosim_status {
        if (manifest_path == nullptr || out_dir == nullptr)
            return fail(HOLOSIM_ERR_CONFIG, "null argument to holosim_analyze");
        holosim::AnalyzeOptions opts;
        opts.manifest_path = manifest_path;
        opts.out_dir = out_dir;
        const holosim::AnalyzeResult result = holosim::analyze(opts, make_logger(log, user));
        const auto logger = make_logger(log, user);
        if (logger)
            logger("[analyze] " + std::to_string(result.runs_complete) + "/" +
                   std::to_string(result.runs_total) + " runs, " +
                   std::to_string(result.table_files.size()) + " report files, " +
                   std::to_string(result.skipped_tables.size()) + " insufficient");
        return HOLOSIM_OK;
    });
}

holosim_status holosim_replay(const char* events_path, char* file_hash_hex, size_t file_hash_len,
                              char* replay_hash_hex, size_t replay_hash_len, int* matched) {
    return guarded([&]() -> holosim_status {
        if (events_path == nullptr || matched == nullptr)
            return fail(HOLOSIM_ERR_CONFIG, "null argument to holosim_replay");
        *matched = 0;

        const std::filesystem::path events_file = events_path;
        if (!std::filesystem::exists(events_file))
            return fail(HOLOSIM_ERR_IO, "no such events file: " + events_file.string());
        const std::filesystem::path config_file = events_file.parent_path() / "config.json";
        if (!std::filesystem::exists(config_file))
            return fail(HOLOSIM_ERR_IO, "config.json not found next to the events log");

        std::ifstream in(config_file);
        holosim::json stored;
        in >> stored;
        const holosim::AppConfig app = stored.at("app").get<holosim::AppConfig>();
        const auto seed = stored.at("seed").get<std::uint64_t>();
        if (app.brain != holosim::BrainKind::Deterministic)
            return fail(HOLOSIM_ERR_CONFIG,
                        "replay verifies deterministic-brain artifacts only");

        const std::string file_hash = holosim::sha256_file(events_file);
        holosim::DeterministicBrain brain(app.world);
        holosim::Simulation sim(app, seed, brain);
        const holosim::RunArtifact artifact = sim.run();
        const std::string replay_hash =
            holosim::sha256_hex(holosim::events_to_jsonl(artifact.events));

        if (const holosim_status s = copy_hex(file_hash, file_hash_hex, file_hash_len);
            s != HOLOSIM_OK)
            return s;
        if (const holosim_status s = copy_hex(replay_hash, replay_hash_hex, replay_hash_len);
            s != HOLOSIM_OK)
            return s;
        *matched = file_hash == replay_hash ? 1 : 0;
        return HOLOSIM_OK;
    });
}

} // extern "C"
