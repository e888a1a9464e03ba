#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "holosim/brain.hpp"
#include "holosim/config.hpp"

namespace holosim {

// Outcome of one HTTP round trip.  status 0 means the request never
// completed (timeout, refused connection, broken pipe, ...).
struct HttpReply {
    int status = 0;
    std::string body;
    std::string transport_error;
};

// Minimal JSON-POST transport, injectable so tests can script replies
// without sockets.
class HttpJsonClient {
public:
    virtual ~HttpJsonClient() = default;
    virtual HttpReply post_json(const std::string& path, const std::string& body,
                                const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

// Real transport bound to base_url (scheme://host:port[/prefix]).
std::unique_ptr<HttpJsonClient> make_http_client(const std::string& base_url, int timeout_ms);

struct BrainRequest {
    std::string decision_kind; // template name, e.g. "allocate_members"
    json context;              // canonical payload rendered into the prompt
};

// Bookkeeping for the most recent completion call, exposed for tests and
// the event log.
struct CallStats {
    int attempts = 0;        // HTTP round trips excluding the repair round
    int repairs = 0;         // 0 or 1
    std::vector<int> backoffs_ms; // sleep before each retry
};

// Remote decision policy speaking the chat-completion protocol.  Every
// reply must be a single JSON object matching the decision's schema; one
// repair round quoting the validation errors is attempted before the
// regular retry loop continues.
class LlmBrain final : public Brain {
public:
    LlmBrain(const WorldEnvironment& env, const LlmEndpointConfig& cfg);
    LlmBrain(const WorldEnvironment& env, const LlmEndpointConfig& cfg,
             std::unique_ptr<HttpJsonClient> client);

    std::vector<MemberProfile> generate_members(const WorldEnvironment& env, int n,
                                                const CompetenceConfig& cfg,
                                                RngStream& rng) override;
    std::vector<TaskSpec> generate_tasks(const WorldEnvironment& env, int n_members, int m,
                                         RngStream& rng) override;
    std::vector<MemberId> allocate_members(const TaskSpec& task,
                                           const std::vector<MemberProfile>& profiles,
                                           const TrustMatrix& trust,
                                           const std::vector<int>& assignment_counts) override;
    std::vector<MemberId> adjust_circle(const TaskSpec& task, const TrustMatrix& trust,
                                        const std::vector<MemberId>& allocation) override;
    Roles assign_roles(const TaskSpec& task, const std::vector<MemberId>& allocation,
                       const std::vector<MemberProfile>& profiles) override;
    DayPlan plan_day(const MemberProfile& profile, const MemberState& state,
                     const std::vector<TaskState>& member_tasks,
                     const std::vector<double>& completions, const PlanContext& ctx,
                     RngStream& rng) override;
    MemoryDigest summarize_cycle(const MemberProfile& profile,
                                 const std::vector<WorkRecord>& records,
                                 double evaluation) override;

    std::string template_version() const override { return template_version_; }

    // Full pipeline: render prompt, call the endpoint, parse strict JSON,
    // validate; schema failures get one repair round, then exponential
    // backoff across up to max_retries further attempts.  `validate` throws
    // BackendError(SchemaInvalid) to reject a reply.
    json complete_with_retry(const BrainRequest& request,
                             const std::function<void(const json&)>& validate);

    const CallStats& last_call() const { return last_call_; }

    // Sleep granularity hook so tests do not wait on real backoff delays.
    void set_sleeper(std::function<void(int)> sleep_ms) { sleep_ms_ = std::move(sleep_ms); }

private:
    std::string render_prompt(const BrainRequest& request) const;
    json parse_reply(const HttpReply& reply) const;

    WorldEnvironment env_;
    LlmEndpointConfig cfg_;
    std::unique_ptr<HttpJsonClient> client_;
    std::map<std::string, std::string> templates_;
    std::string template_version_;
    CallStats last_call_;
    std::function<void(int)> sleep_ms_;
};

} // namespace holosim
