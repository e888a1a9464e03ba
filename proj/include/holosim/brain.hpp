#pragma once

#include <memory>
#include <vector>

#include "holosim/domain.hpp"
#include "holosim/rng.hpp"

namespace holosim {

// Raised when the remote backend fails after all retries, returns malformed
// output, or the engine rejects a response during schema validation.
class BackendError : public std::runtime_error {
public:
    enum class Kind { Timeout, HttpStatus, SchemaInvalid, RetriesExhausted };

    BackendError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

std::string to_string(BackendError::Kind k);

class AllocationInfeasible : public std::runtime_error {
public:
    explicit AllocationInfeasible(const std::string& what) : std::runtime_error(what) {}
};

// Target competence distribution for one generated organization.
struct CompetenceConfig {
    double mgmt_mean = 4.0;
    double mgmt_std = 0.3;
    double func_mean = 4.0;
    double func_std = 0.3;

    static CompetenceConfig from_levels(MeanLevel mgmt_mean, StdLevel mgmt_std,
                                        MeanLevel func_mean, StdLevel func_std);
};

double mean_level_value(MeanLevel l); // high -> 4.0, low -> 2.0
double std_level_value(StdLevel l);   // low/medium/high -> 0.3/0.6/0.9

// Share of the working day the reference policy actually commits: rises
// gently with competence so a (5,5) member fills the whole day and the
// least capable member still commits most of it.
double work_intensity(double management_competence, double functional_competence);

// Extra inputs for daily planning that are not part of the member's own
// state: the calendar position and the member's trust row.
struct PlanContext {
    int week = 0;
    int day = 0; // 1..work_days_per_week
    int hours_per_day = 8;
    std::vector<double> trust_row; // trust from this member to every id
};

// Decision-policy interface: one virtual per decision the engine delegates.
// Implementations must be deterministic functions of (inputs, rng stream).
class Brain {
public:
    virtual ~Brain() = default;

    virtual std::vector<MemberProfile> generate_members(const WorldEnvironment& env, int n,
                                                        const CompetenceConfig& cfg,
                                                        RngStream& rng) = 0;

    // Returns m specs with task_id 0..m-1 and deadline_week 0; the engine
    // renumbers ids and stamps the issue week.
    virtual std::vector<TaskSpec> generate_tasks(const WorldEnvironment& env, int n_members,
                                                 int m, RngStream& rng) = 0;

    virtual std::vector<MemberId> allocate_members(const TaskSpec& task,
                                                   const std::vector<MemberProfile>& profiles,
                                                   const TrustMatrix& trust,
                                                   const std::vector<int>& assignment_counts) = 0;

    virtual std::vector<MemberId> adjust_circle(const TaskSpec& task, const TrustMatrix& trust,
                                                const std::vector<MemberId>& allocation) = 0;

    virtual Roles assign_roles(const TaskSpec& task, const std::vector<MemberId>& allocation,
                               const std::vector<MemberProfile>& profiles) = 0;

    virtual DayPlan plan_day(const MemberProfile& profile, const MemberState& state,
                             const std::vector<TaskState>& member_tasks,
                             const std::vector<double>& completions, const PlanContext& ctx,
                             RngStream& rng) = 0;

    virtual MemoryDigest summarize_cycle(const MemberProfile& profile,
                                         const std::vector<WorkRecord>& records,
                                         double evaluation) = 0;

    // Recorded in decision events so logs identify the prompt generation.
    virtual std::string template_version() const = 0;
};

// Reference backend: pure seeded policies, no I/O.
class DeterministicBrain final : public Brain {
public:
    // Policy constants.  Scoring weights and the vote threshold shape
    // allocation; the capacity divisor sets the preferred circle size as
    // workload_hours / (hours_per_day * work_days_per_week), clamped into
    // the task bounds.
    static constexpr double kW1 = 1.0;
    static constexpr double kW2 = 0.5;
    static constexpr double kW3 = 0.25;
    static constexpr double kVoteThreshold = 0.3;

    explicit DeterministicBrain(const WorldEnvironment& env) : env_(env) {}

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

    std::string template_version() const override { return "builtin"; }

    // The greedy scoring rule, exposed for conformance testing: competence
    // average, mean trust toward already-picked members (0 when none), and
    // an assignment-count penalty.
    static double candidate_score(const MemberProfile& p, const TrustMatrix& trust,
                                  const std::vector<MemberId>& picked, int assignment_count);

private:
    WorldEnvironment env_;
};

// Structural validation the engine applies to every accepted response,
// regardless of backend.  Violations surface as BackendError{SchemaInvalid}.
void validate_members_response(const std::vector<MemberProfile>& profiles, int n);
void validate_tasks_response(const std::vector<TaskSpec>& tasks, int m, int n_members,
                             int hours_per_day, int work_days_per_week);
void validate_allocation_response(const std::vector<MemberId>& allocation, const TaskSpec& task,
                                  int n_members);
void validate_adjustment_response(const std::vector<MemberId>& adjusted, const TaskSpec& task,
                                  const std::vector<MemberId>& original);
void validate_roles_response(const Roles& roles, const std::vector<MemberId>& allocation);
void validate_plan_response(const DayPlan& plan, const MemberProfile& profile,
                            const std::vector<TaskState>& member_tasks, int hours_per_day);

} // namespace holosim
