#include "holosim/config.hpp"

#include <fstream>

namespace holosim {

SimConfig AppConfig::to_sim_config(std::uint64_t seed) const {
    SimConfig sim;
    sim.seed = seed;
    sim.n_members = members.n_members;
    sim.tasks_per_week = grid.tasks_per_week;
    sim.weeks = grid.weeks;
    sim.mgmt_mean_level = members.mgmt_mean_level;
    sim.func_mean_level = members.func_mean_level;
    sim.mgmt_std_level = members.mgmt_std_level;
    sim.func_std_level = members.func_std_level;
    sim.brain = brain;
    sim.dynamics = dynamics;
    return sim;
}

void to_json(json& j, const LlmEndpointConfig& v) {
    j = json{{"base_url", v.base_url},
             {"model_name", v.model_name},
             {"api_key_env", v.api_key_env},
             {"timeout_ms", v.timeout_ms},
             {"max_retries", v.max_retries},
             {"max_concurrent_requests", v.max_concurrent_requests},
             {"temperature", v.temperature},
             {"prompt_dir", v.prompt_dir}};
}

void from_json(const json& j, LlmEndpointConfig& v) {
    j.at("base_url").get_to(v.base_url);
    j.at("model_name").get_to(v.model_name);
    j.at("api_key_env").get_to(v.api_key_env);
    j.at("timeout_ms").get_to(v.timeout_ms);
    j.at("max_retries").get_to(v.max_retries);
    j.at("max_concurrent_requests").get_to(v.max_concurrent_requests);
    j.at("temperature").get_to(v.temperature);
    j.at("prompt_dir").get_to(v.prompt_dir);
}

void to_json(json& j, const GridOptions& v) {
    j = json{{"base_seed", v.base_seed},
             {"weeks", v.weeks},
             {"tasks_per_week", v.tasks_per_week},
             {"repetitions", v.repetitions}};
}

void from_json(const json& j, GridOptions& v) {
    j.at("base_seed").get_to(v.base_seed);
    j.at("weeks").get_to(v.weeks);
    j.at("tasks_per_week").get_to(v.tasks_per_week);
    j.at("repetitions").get_to(v.repetitions);
}

void to_json(json& j, const MemberFactorConfig& v) {
    j = json{{"n_members", v.n_members},
             {"mgmt_mean_level", to_string(v.mgmt_mean_level)},
             {"func_mean_level", to_string(v.func_mean_level)},
             {"mgmt_std_level", to_string(v.mgmt_std_level)},
             {"func_std_level", to_string(v.func_std_level)}};
}

void from_json(const json& j, MemberFactorConfig& v) {
    j.at("n_members").get_to(v.n_members);
    v.mgmt_mean_level = mean_level_from_string(j.at("mgmt_mean_level").get<std::string>());
    v.func_mean_level = mean_level_from_string(j.at("func_mean_level").get<std::string>());
    v.mgmt_std_level = std_level_from_string(j.at("mgmt_std_level").get<std::string>());
    v.func_std_level = std_level_from_string(j.at("func_std_level").get<std::string>());
}

void to_json(json& j, const AppConfig& v) {
    json llm = v.llm;
    llm["brain"] = to_string(v.brain);
    j = json{{"world", v.world},
             {"members", v.members},
             {"dynamics", v.dynamics},
             {"grid", v.grid},
             {"llm", std::move(llm)}};
}

void from_json(const json& j, AppConfig& v) {
    j.at("world").get_to(v.world);
    j.at("members").get_to(v.members);
    j.at("dynamics").get_to(v.dynamics);
    j.at("grid").get_to(v.grid);
    j.at("llm").get_to(v.llm);
    v.brain = brain_from_string(j.at("llm").at("brain").get<std::string>());
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("config parse", path.string() + ": " + e.what());
    }
    try {
        return j.get<AppConfig>();
    } catch (const json::exception& e) {
        throw ValidationError("config schema", path.string() + ": " + e.what());
    }
}

void save_config(const AppConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file " + path.string());
    out << json(cfg).dump(2) << '\n';
}

AppConfig default_config() { return AppConfig{}; }

} // namespace holosim
