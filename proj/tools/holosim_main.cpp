#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include <holosim.h>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

void stderr_logger(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

int report_failure(const char* verb) {
    std::fprintf(stderr, "holosim %s failed: %s\n", verb, holosim_last_error());
    return kExitRuntime;
}

struct ConfigHandle {
    holosim_config* ptr = nullptr;
    ~ConfigHandle() { holosim_config_free(ptr); }
};

int load_config_with_brain(const std::string& path, const std::string& brain, ConfigHandle& out) {
    if (holosim_config_load(path.c_str(), &out.ptr) != HOLOSIM_OK)
        return report_failure("config load");
    if (!brain.empty() && holosim_config_set_brain(out.ptr, brain.c_str()) != HOLOSIM_OK)
        return report_failure("brain selection");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"holosim - generative holacracy organization simulator"};
    app.require_subcommand(1);

    std::string config_path = "holosim.json";
    std::string brain;
    std::string out_dir;
    std::string manifest_path;
    std::string events_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool force = false;
    int parallel = 1;

    CLI::App* cmd_init = app.add_subcommand("init", "Write a default configuration file");
    cmd_init->add_option("--config", config_path, "Destination path")->capture_default_str();
    cmd_init->add_flag("--force", force, "Overwrite an existing file");

    CLI::App* cmd_run = app.add_subcommand("run", "Execute a single simulation run");
    cmd_run->add_option("--config", config_path, "Configuration file")->capture_default_str();
    cmd_run->add_option("--seed", seed, "Run seed (default: base_seed from config)")
        ->each([&](const std::string&) { seed_given = true; });
    cmd_run->add_option("--out", out_dir, "Artifact directory")->default_val("runs/single");
    cmd_run->add_option("--brain", brain, "deterministic or llm")
        ->check(CLI::IsMember({"deterministic", "llm"}));

    CLI::App* cmd_grid = app.add_subcommand("grid", "Run the full 36-cell factor grid");
    cmd_grid->add_option("--config", config_path, "Configuration file")->capture_default_str();
    cmd_grid->add_option("--out", out_dir, "Grid output directory")->required();
    cmd_grid->add_option("--parallel", parallel, "Concurrent cells")
        ->default_val(1)
        ->check(CLI::PositiveNumber);
    cmd_grid->add_option("--brain", brain, "deterministic or llm")
        ->check(CLI::IsMember({"deterministic", "llm"}));

    CLI::App* cmd_analyze = app.add_subcommand("analyze", "Produce tables and graph exports");
    cmd_analyze->add_option("--manifest", manifest_path, "Grid manifest.json")->required();
    cmd_analyze->add_option("--out", out_dir, "Report directory")->required();

    CLI::App* cmd_replay = app.add_subcommand("replay", "Re-run a logged simulation and compare");
    cmd_replay->add_option("--events", events_path, "events.jsonl of a recorded run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitUsage;
    }

    if (cmd_init->parsed()) {
        if (!force) {
            if (std::FILE* existing = std::fopen(config_path.c_str(), "r")) {
                std::fclose(existing);
                std::fprintf(stderr, "refusing to overwrite %s (use --force)\n",
                             config_path.c_str());
                return kExitRuntime;
            }
        }
        ConfigHandle cfg;
        if (holosim_config_default(&cfg.ptr) != HOLOSIM_OK) return report_failure("init");
        if (holosim_config_save(cfg.ptr, config_path.c_str()) != HOLOSIM_OK)
            return report_failure("init");
        std::printf("wrote %s\n", config_path.c_str());
        return kExitOk;
    }

    if (cmd_run->parsed()) {
        ConfigHandle cfg;
        if (const int rc = load_config_with_brain(config_path, brain, cfg); rc != kExitOk)
            return rc;
        if (!seed_given && holosim_config_base_seed(cfg.ptr, &seed) != HOLOSIM_OK)
            return report_failure("run");
        if (holosim_run(cfg.ptr, seed, out_dir.c_str(), stderr_logger, nullptr) != HOLOSIM_OK)
            return report_failure("run");
        std::printf("run complete: %s\n", out_dir.c_str());
        return kExitOk;
    }

    if (cmd_grid->parsed()) {
        ConfigHandle cfg;
        if (const int rc = load_config_with_brain(config_path, brain, cfg); rc != kExitOk)
            return rc;
        if (holosim_grid(cfg.ptr, out_dir.c_str(), parallel, stderr_logger, nullptr) !=
            HOLOSIM_OK)
            return report_failure("grid");
        std::printf("grid complete: %s/manifest.json\n", out_dir.c_str());
        return kExitOk;
    }

    if (cmd_analyze->parsed()) {
        if (holosim_analyze(manifest_path.c_str(), out_dir.c_str(), stderr_logger, nullptr) !=
            HOLOSIM_OK)
            return report_failure("analyze");
        std::printf("analysis written to %s\n", out_dir.c_str());
        return kExitOk;
    }

    if (cmd_replay->parsed()) {
        char file_hash[65] = {0};
        char replay_hash[65] = {0};
        int matched = 0;
        if (holosim_replay(events_path.c_str(), file_hash, sizeof file_hash, replay_hash,
                           sizeof replay_hash, &matched) != HOLOSIM_OK)
            return report_failure("replay");
        std::printf("recorded  sha256 %s\n", file_hash);
        std::printf("replayed  sha256 %s\n", replay_hash);
        if (matched == 0) {
            std::fprintf(stderr, "event log does not match its deterministic replay\n");
            return kExitRuntime;
        }
        std::printf("replay matches\n");
        return kExitOk;
    }

    return kExitUsage;
}
