#pragma once

#include <filesystem>
#include <string>

#include "holosim/domain.hpp"

namespace holosim {

// Endpoint settings for the LLM-backed brain.  The API key is never stored
// in config files; it is read from the environment at connection time.
struct LlmEndpointConfig {
    std::string base_url = "http://127.0.0.1:8080/v1";
    std::string model_name = "sim-worker-1";
    std::string api_key_env = "HOLOSIM_API_KEY";
    int timeout_ms = 30000;
    int max_retries = 3;
    int max_concurrent_requests = 4;
    double temperature = 0.2;
    std::string prompt_dir = "prompts";
};

// Grid/experiment settings shared by `run` and `grid`.
struct GridOptions {
    std::uint64_t base_seed = 42;
    int weeks = 8;
    int tasks_per_week = 4;
    int repetitions = 1;
};

struct MemberFactorConfig {
    int n_members = 20;
    MeanLevel mgmt_mean_level = MeanLevel::High;
    MeanLevel func_mean_level = MeanLevel::High;
    StdLevel mgmt_std_level = StdLevel::Low;
    StdLevel func_std_level = StdLevel::Low;
};

// Top-level configuration: exactly the five documented sections.
struct AppConfig {
    WorldEnvironment world;
    MemberFactorConfig members;
    DynamicsParams dynamics;
    GridOptions grid;
    LlmEndpointConfig llm;
    BrainKind brain = BrainKind::Deterministic; // stored under "llm.brain"

    // Collapse to the per-run view used by the engine.
    SimConfig to_sim_config(std::uint64_t seed) const;
};

void to_json(json& j, const LlmEndpointConfig& v);
void from_json(const json& j, LlmEndpointConfig& v);
void to_json(json& j, const GridOptions& v);
void from_json(const json& j, GridOptions& v);
void to_json(json& j, const MemberFactorConfig& v);
void from_json(const json& j, MemberFactorConfig& v);
void to_json(json& j, const AppConfig& v);
void from_json(const json& j, AppConfig& v);

AppConfig load_config(const std::filesystem::path& path);
void save_config(const AppConfig& cfg, const std::filesystem::path& path);

// The starter config written by `holosim init`.
AppConfig default_config();

} // namespace holosim
