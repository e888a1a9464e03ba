#include "holosim/llm_brain.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "holosim/artifact_io.hpp"

namespace holosim {

namespace {

constexpr int kBackoffBaseMs = 100;

const char* const kDecisionKinds[] = {"generate_members", "generate_tasks", "allocate_members",
                                      "adjust_circle",    "assign_roles",   "plan_day",
                                      "summarize_cycle"};

// Fallback instructions used when the prompt directory is absent, so `run
// --brain llm` works from any working directory.
std::string builtin_template(const std::string& kind) {
    return "You are a decision service for a simulated holacracy organization.\n"
           "Decision: " +
           kind +
           "\n"
           "Context (JSON):\n{{context}}\n\n"
           "Reply with exactly one JSON object matching the documented schema for this "
           "decision. No prose, no code fences.";
}

[[noreturn]] void schema_fail(const std::string& what) {
    throw BackendError(BackendError::Kind::SchemaInvalid, what);
}

template <typename T>
T field_as(const json& j, const char* name) {
    if (!j.contains(name)) schema_fail(std::string("reply is missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        schema_fail(std::string("reply field '") + name + "' malformed: " + e.what());
    }
}

class RealHttpClient final : public HttpJsonClient {
public:
    RealHttpClient(const std::string& base_url, int timeout_ms) {
        std::string host_part = base_url;
        const auto scheme_end = base_url.find("://");
        const std::size_t host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
        const auto slash = base_url.find('/', host_begin);
        if (slash != std::string::npos) {
            host_part = base_url.substr(0, slash);
            prefix_ = base_url.substr(slash);
            while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
        }
        client_ = std::make_unique<httplib::Client>(host_part);
        const time_t sec = timeout_ms / 1000;
        const time_t usec = static_cast<time_t>(timeout_ms % 1000) * 1000;
        client_->set_connection_timeout(sec, usec);
        client_->set_read_timeout(sec, usec);
        client_->set_write_timeout(sec, usec);
    }

    HttpReply post_json(const std::string& path, const std::string& body,
                        const std::vector<std::pair<std::string, std::string>>& headers) override {
        httplib::Headers h(headers.begin(), headers.end());
        const httplib::Result res = client_->Post(prefix_ + path, h, body, "application/json");
        HttpReply reply;
        if (!res) {
            reply.status = 0;
            reply.transport_error = httplib::to_string(res.error());
            return reply;
        }
        reply.status = res->status;
        reply.body = res->body;
        return reply;
    }

private:
    std::unique_ptr<httplib::Client> client_;
    std::string prefix_;
};

} // namespace

std::unique_ptr<HttpJsonClient> make_http_client(const std::string& base_url, int timeout_ms) {
    return std::make_unique<RealHttpClient>(base_url, timeout_ms);
}

LlmBrain::LlmBrain(const WorldEnvironment& env, const LlmEndpointConfig& cfg)
    : LlmBrain(env, cfg, make_http_client(cfg.base_url, cfg.timeout_ms)) {}

LlmBrain::LlmBrain(const WorldEnvironment& env, const LlmEndpointConfig& cfg,
                   std::unique_ptr<HttpJsonClient> client)
    : env_(env), cfg_(cfg), client_(std::move(client)) {
    if (cfg_.max_retries < 0) throw InvalidConfig("llm max_retries must be >= 0");
    if (cfg_.max_concurrent_requests < 1)
        throw InvalidConfig("llm max_concurrent_requests must be >= 1");

    std::string fingerprint;
    for (const char* kind : kDecisionKinds) {
        std::string text;
        const std::filesystem::path p = std::filesystem::path(cfg_.prompt_dir) /
                                        (std::string(kind) + ".txt");
        if (std::ifstream in(p); in) {
            std::ostringstream buf;
            buf << in.rdbuf();
            text = buf.str();
        } else {
            text = builtin_template(kind);
        }
        fingerprint += kind;
        fingerprint += '\0';
        fingerprint += text;
        fingerprint += '\0';
        templates_[kind] = std::move(text);
    }
    template_version_ = "tmpl-" + sha256_hex(fingerprint).substr(0, 12);
}

std::string LlmBrain::render_prompt(const BrainRequest& request) const {
    const auto it = templates_.find(request.decision_kind);
    std::string text =
        it != templates_.end() ? it->second : builtin_template(request.decision_kind);
    const std::string placeholder = "{{context}}";
    const std::string rendered = request.context.dump(2);
    const auto pos = text.find(placeholder);
    if (pos == std::string::npos)
        return text + "\n\nContext (JSON):\n" + rendered +
               "\n\nReply with exactly one JSON object.";
    return text.replace(pos, placeholder.size(), rendered);
}

json LlmBrain::parse_reply(const HttpReply& reply) const {
    json envelope;
    try {
        envelope = json::parse(reply.body);
    } catch (const json::exception& e) {
        schema_fail(std::string("reply body is not JSON: ") + e.what());
    }
    if (!envelope.contains("choices") || !envelope["choices"].is_array() ||
        envelope["choices"].empty())
        schema_fail("reply has no choices");
    const json& message = envelope["choices"][0].contains("message")
                              ? envelope["choices"][0]["message"]
                              : json::object();
    if (!message.contains("content")) schema_fail("first choice has no message content");
    const json& content = message["content"];
    if (content.is_object()) return content;
    if (!content.is_string()) schema_fail("message content is neither text nor an object");
    json decision;
    try {
        decision = json::parse(content.get<std::string>());
    } catch (const json::exception& e) {
        schema_fail(std::string("message content is not strict JSON: ") + e.what());
    }
    if (!decision.is_object()) schema_fail("message content is not a JSON object");
    return decision;
}

json LlmBrain::complete_with_retry(const BrainRequest& request,
                                   const std::function<void(const json&)>& validate) {
    last_call_ = CallStats{};
    const std::string prompt = render_prompt(request);

    std::vector<std::pair<std::string, std::string>> headers;
    if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key != nullptr && *key != '\0')
        headers.emplace_back("Authorization", std::string("Bearer ") + key);

    const auto post_messages = [&](const json& messages) {
        const json body = {{"model", cfg_.model_name},
                           {"messages", messages},
                           {"temperature", cfg_.temperature}};
        return client_->post_json("/chat/completions", body.dump(), headers);
    };

    const json base_messages = json::array({json{{"role", "user"}, {"content", prompt}}});
    bool repair_used = false;
    std::string last_error = "backend never reached";
    BackendError::Kind last_kind = BackendError::Kind::Timeout;

    const int attempts_allowed = cfg_.max_retries + 1;
    for (int attempt = 0; attempt < attempts_allowed; ++attempt) {
        if (attempt > 0) {
            const int delay = kBackoffBaseMs << (attempt - 1);
            last_call_.backoffs_ms.push_back(delay);
            if (sleep_ms_)
                sleep_ms_(delay);
            else
                std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        ++last_call_.attempts;
        const HttpReply reply = post_messages(base_messages);
        if (reply.status == 0) {
            last_kind = BackendError::Kind::Timeout;
            last_error = "transport failure: " + reply.transport_error;
            continue;
        }
        if (reply.status < 200 || reply.status >= 300) {
            last_kind = BackendError::Kind::HttpStatus;
            last_error = "HTTP status " + std::to_string(reply.status);
            continue;
        }
        try {
            const json decision = parse_reply(reply);
            validate(decision);
            return decision;
        } catch (const BackendError& e) {
            last_kind = BackendError::Kind::SchemaInvalid;
            last_error = e.what();
        }

        if (!repair_used) {
            // One repair round: quote the validation failure back and ask
            // for a corrected object, without consuming a retry slot.
            repair_used = true;
            ++last_call_.repairs;
            json messages = base_messages;
            messages.push_back(json{{"role", "assistant"}, {"content", reply.body}});
            messages.push_back(
                json{{"role", "user"},
                     {"content", std::string("Your previous reply failed validation: ") +
                                     last_error +
                                     ". Reply again with exactly one corrected JSON object "
                                     "and no other text."}});
            const HttpReply fixed = post_messages(messages);
            if (fixed.status == 0) {
                last_kind = BackendError::Kind::Timeout;
                last_error = "transport failure: " + fixed.transport_error;
            } else if (fixed.status < 200 || fixed.status >= 300) {
                last_kind = BackendError::Kind::HttpStatus;
                last_error = "HTTP status " + std::to_string(fixed.status);
            } else {
                try {
                    const json decision = parse_reply(fixed);
                    validate(decision);
                    return decision;
                } catch (const BackendError& e) {
                    last_kind = BackendError::Kind::SchemaInvalid;
                    last_error = e.what();
                }
            }
        }
    }
    throw BackendError(BackendError::Kind::RetriesExhausted,
                       request.decision_kind + " failed after " +
                           std::to_string(last_call_.attempts) + " attempt(s); last error: " +
                           to_string(last_kind) + ": " + last_error);
}

// ---------------------------------------------------------------------------
// Decision methods
// ---------------------------------------------------------------------------

std::vector<MemberProfile> LlmBrain::generate_members(const WorldEnvironment& env, int n,
                                                      const CompetenceConfig& cfg, RngStream&) {
    if (n < 1) throw InvalidConfig("generate_members requires n >= 1");
    const json context = {{"environment", env},
                          {"n", n},
                          {"competence",
                           {{"mgmt_mean", cfg.mgmt_mean},
                            {"mgmt_std", cfg.mgmt_std},
                            {"func_mean", cfg.func_mean},
                            {"func_std", cfg.func_std},
                            {"scale", "1..5, clamped"}}}};
    std::vector<MemberProfile> out;
    complete_with_retry({"generate_members", context}, [&](const json& r) {
        auto profiles = field_as<std::vector<MemberProfile>>(r, "members");
        validate_members_response(profiles, n);
        out = std::move(profiles);
    });
    return out;
}

std::vector<TaskSpec> LlmBrain::generate_tasks(const WorldEnvironment& env, int n_members, int m,
                                               RngStream&) {
    if (m < 1) throw InvalidConfig("generate_tasks requires m >= 1");
    if (n_members < 1) throw InvalidConfig("generate_tasks requires a non-empty organization");

    // Workloads are derived locally so the weekly balance is exact to the
    // half hour; the backend contributes the task content.
    const long long total_units = 2LL * n_members * env.hours_per_day * env.work_days_per_week;
    const long long base = total_units / m;
    const long long extra = total_units % m;

    const json context = {{"environment", env},
                          {"n_members", n_members},
                          {"m", m},
                          {"note", "provide title and description per task"}};
    std::vector<TaskSpec> out;
    complete_with_retry({"generate_tasks", context}, [&](const json& r) {
        const json items = field_as<json>(r, "tasks");
        if (!items.is_array() || static_cast<int>(items.size()) != m)
            schema_fail("expected an array of exactly " + std::to_string(m) + " tasks");
        std::vector<TaskSpec> specs;
        for (int k = 0; k < m; ++k) {
            TaskSpec t;
            t.task_id = k;
            t.title = field_as<std::string>(items[static_cast<std::size_t>(k)], "title");
            t.description =
                field_as<std::string>(items[static_cast<std::size_t>(k)], "description");
            if (t.title.empty()) schema_fail("task title empty");
            t.workload_hours = static_cast<double>(base + (k < extra ? 1 : 0)) / 2.0;
            t.deadline_week = 0;
            t.min_members = std::min(2, n_members);
            t.max_members = std::min(6, n_members);
            specs.push_back(std::move(t));
        }
        validate_tasks_response(specs, m, n_members, env.hours_per_day, env.work_days_per_week);
        out = std::move(specs);
    });
    return out;
}

std::vector<MemberId> LlmBrain::allocate_members(const TaskSpec& task,
                                                 const std::vector<MemberProfile>& profiles,
                                                 const TrustMatrix& trust,
                                                 const std::vector<int>& assignment_counts) {
    const json context = {{"task", task},
                          {"profiles", profiles},
                          {"trust", trust},
                          {"assignment_counts", assignment_counts}};
    std::vector<MemberId> out;
    complete_with_retry({"allocate_members", context}, [&](const json& r) {
        auto allocation = field_as<std::vector<MemberId>>(r, "allocation");
        validate_allocation_response(allocation, task, static_cast<int>(profiles.size()));
        out = std::move(allocation);
    });
    return out;
}

std::vector<MemberId> LlmBrain::adjust_circle(const TaskSpec& task, const TrustMatrix& trust,
                                              const std::vector<MemberId>& allocation) {
    const json context = {{"task", task}, {"trust", trust}, {"allocation", allocation}};
    std::vector<MemberId> out;
    complete_with_retry({"adjust_circle", context}, [&](const json& r) {
        auto adjusted = field_as<std::vector<MemberId>>(r, "allocation");
        validate_adjustment_response(adjusted, task, allocation);
        out = std::move(adjusted);
    });
    return out;
}

Roles LlmBrain::assign_roles(const TaskSpec& task, const std::vector<MemberId>& allocation,
                             const std::vector<MemberProfile>& profiles) {
    std::vector<MemberProfile> circle;
    for (const MemberProfile& p : profiles)
        if (std::find(allocation.begin(), allocation.end(), p.member_id) != allocation.end())
            circle.push_back(p);
    const json context = {{"task", task}, {"allocation", allocation}, {"profiles", circle}};
    Roles out;
    complete_with_retry({"assign_roles", context}, [&](const json& r) {
        Roles roles;
        roles.facilitator = field_as<MemberId>(r, "facilitator");
        roles.secretary = field_as<MemberId>(r, "secretary");
        validate_roles_response(roles, allocation);
        out = roles;
    });
    return out;
}

DayPlan LlmBrain::plan_day(const MemberProfile& profile, const MemberState& state,
                           const std::vector<TaskState>& member_tasks,
                           const std::vector<double>& completions, const PlanContext& ctx,
                           RngStream&) {
    if (member_tasks.empty()) return DayPlan{profile.member_id, {}};

    json tasks = json::array();
    for (std::size_t k = 0; k < member_tasks.size(); ++k) {
        const TaskState& t = member_tasks[k];
        json row = {{"task_id", t.spec.task_id},
                    {"title", t.spec.title},
                    {"workload_hours", t.spec.workload_hours},
                    {"hours_logged", t.total_logged()},
                    {"completion", completions.at(k)},
                    {"allocation", t.allocation},
                    {"facilitator", t.roles.facilitator},
                    {"secretary", t.roles.secretary}};
        tasks.push_back(std::move(row));
    }
    const json context = {{"profile", profile},
                          {"stress", state.stress},
                          {"memory", state.memory_digest},
                          {"tasks", tasks},
                          {"week", ctx.week},
                          {"day", ctx.day},
                          {"hours_per_day", ctx.hours_per_day},
                          {"trust_row", ctx.trust_row},
                          {"activities", {"SoloWork", "Discussion", "TacticalMeeting"}}};
    DayPlan out;
    complete_with_retry({"plan_day", context}, [&](const json& r) {
        const json items = field_as<json>(r, "entries");
        if (!items.is_array()) schema_fail("'entries' must be an array");
        DayPlan plan;
        plan.member_id = profile.member_id;
        for (const json& item : items) {
            PlanEntry e;
            e.member_id = profile.member_id;
            e.task_id = field_as<TaskId>(item, "task_id");
            e.hours = field_as<double>(item, "hours");
            if (item.contains("partners")) e.partners = field_as<std::vector<MemberId>>(item, "partners");
            if (item.contains("activity")) {
                try {
                    e.activity = activity_from_string(field_as<std::string>(item, "activity"));
                } catch (const std::exception& ex) {
                    schema_fail(std::string("unknown activity: ") + ex.what());
                }
            }
            plan.entries.push_back(std::move(e));
        }
        validate_plan_response(plan, profile, member_tasks, ctx.hours_per_day);
        out = std::move(plan);
    });
    return out;
}

MemoryDigest LlmBrain::summarize_cycle(const MemberProfile& profile,
                                       const std::vector<WorkRecord>& records, double evaluation) {
    MemoryDigest digest;
    digest.last_evaluation = evaluation;
    if (records.empty()) return digest;

    for (const WorkRecord& r : records) {
        digest.task_hours[r.task_id] += r.hours;
        for (MemberId p : r.partners) digest.partner_counts[p] += 1;
    }

    const json context = {{"profile", profile},
                          {"records", records},
                          {"evaluation", evaluation},
                          {"aggregates", digest}};
    complete_with_retry({"summarize_cycle", context}, [&](const json& r) {
        const auto text = field_as<std::string>(r, "summary");
        if (text.empty()) schema_fail("summary text empty");
        digest.text = text;
    });
    return digest;
}

} // namespace holosim
