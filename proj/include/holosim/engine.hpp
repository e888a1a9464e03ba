#pragma once

#include <functional>

#include "holosim/brain.hpp"
#include "holosim/config.hpp"
#include "holosim/domain.hpp"
#include "holosim/rng.hpp"

namespace holosim {

// Plan consolidation: mutually-listed partner entries on the same task and
// activity merge into one session; everything else stays solo.  Exposed as a
// free function because it is a pure mapping worth testing in isolation.
WorldPlan consolidate_plans(const std::vector<DayPlan>& plans);

// ---------------------------------------------------------------------------
// Weekly snapshots
// ---------------------------------------------------------------------------

struct MemberSnapshotRow {
    MemberId member_id = 0;
    double stress = 0.0;
    double evaluation = 0.5;
    int circle_count = 0;          // circles this week
    double assigned_workload = 0.0; // Σ WT_j / |a_j'| over this week's circles
    double completion_level = 0.5;  // lifetime mean per-task credit
    double avg_circle_count = 0.0;  // mean of weekly circle counts so far
    double avg_workload = 0.0;      // mean of weekly assigned workload so far
    double management_competence = 0.0;
    double functional_competence = 0.0;
};

struct TaskSnapshotRow {
    TaskId task_id = 0;
    double completion = 0.0;
    double workload_hours = 0.0;
    int circle_size = 0;
};

struct OrgSnapshotRow {
    double mean_stress = 0.0;
    double mean_completion = 0.0; // mean C_j over tasks settled this week
    int circles = 0;
    double mgmt_mean = 0.0, func_mean = 0.0;
    double mgmt_std = 0.0, func_std = 0.0;
};

struct WeekSnapshot {
    int week = 0;
    OrgSnapshotRow org;
    std::vector<MemberSnapshotRow> members;
    std::vector<TaskSnapshotRow> tasks;
    TrustMatrix trust;
};

void to_json(json& j, const MemberSnapshotRow& v);
void from_json(const json& j, MemberSnapshotRow& v);
void to_json(json& j, const TaskSnapshotRow& v);
void from_json(const json& j, TaskSnapshotRow& v);
void to_json(json& j, const OrgSnapshotRow& v);
void from_json(const json& j, OrgSnapshotRow& v);
void to_json(json& j, const WeekSnapshot& v);
void from_json(const json& j, WeekSnapshot& v);

// ---------------------------------------------------------------------------
// Run state and artifact
// ---------------------------------------------------------------------------

struct RunState {
    SimConfig config;
    WorldEnvironment env;
    std::vector<MemberProfile> profiles;
    std::vector<MemberState> states;
    std::vector<TaskState> active_tasks;
    TrustMatrix trust;
    int week = 0; // 1-based once the first week starts
    int day = 0;  // 0 construction, 1..work_days, work_days+1 evaluation
    std::int64_t next_sequence_no = 0;
    TaskId next_task_id = 1;
    bool week_evaluated = true; // settlement idempotence guard
    std::vector<EventLogEntry> events;

    // Lifetime accumulators feeding the snapshots.
    std::vector<double> credit_sum;
    std::vector<int> credit_count;
    std::vector<double> circle_count_sum;
    std::vector<double> workload_sum;
    std::vector<int> week_circle_count;
    std::vector<double> week_workload;
};

struct RunArtifact {
    json config; // resolved AppConfig + seed, as written to config.json
    std::vector<EventLogEntry> events;
    std::vector<WeekSnapshot> snapshots;
    std::string error; // non-empty when the run aborted on a backend failure
};

class Simulation {
public:
    Simulation(const AppConfig& cfg, std::uint64_t seed, Brain& brain);

    // Full pipeline: organization generation, then weeks of construction,
    // execution, evaluation.  Backend failures abort the run and surface in
    // RunArtifact::error with everything logged up to that point retained.
    RunArtifact run();

    // Stepwise interface used by tests; run() is composed from these.
    void generate_organization();
    void run_construction();
    void run_day();
    void run_evaluation();
    WeekSnapshot take_snapshot() const;

    const RunState& state() const { return state_; }
    RunState& mutable_state() { return state_; }

    // Invoked after each completed week with the events of that week and
    // its snapshot; lets callers stream the artifact to disk atomically.
    std::function<void(int week, const std::vector<EventLogEntry>&, const WeekSnapshot&)>
        week_sink;

private:
    void append_event(EventKind kind, int day, json payload);
    void execute_world_plan(const WorldPlan& wp);
    std::vector<TaskState> member_tasks_of(MemberId id) const;

    AppConfig app_;
    std::uint64_t seed_;
    Brain& brain_;
    RngSet rngs_;
    RunState state_;
    std::vector<WeekSnapshot> snapshots_;
    std::size_t week_event_start_ = 0;
};

} // namespace holosim
