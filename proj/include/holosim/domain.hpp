#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace holosim {

using json = nlohmann::json;
using MemberId = std::int64_t;
using TaskId = std::int64_t;

// ---------------------------------------------------------------------------
// Enumerations
// ---------------------------------------------------------------------------

enum class Activity { SoloWork, Discussion, TacticalMeeting };
enum class RoleKind { Facilitator, Secretary, Member };
enum class BrainKind { Deterministic, Llm };

// Two-level factor for competence means, three-level factor for spreads.
enum class MeanLevel { High, Low };
enum class StdLevel { Low, Medium, High };

std::string to_string(Activity a);
std::string to_string(RoleKind r);
std::string to_string(BrainKind b);
std::string to_string(MeanLevel l);
std::string to_string(StdLevel l);

Activity activity_from_string(const std::string& s);
RoleKind role_from_string(const std::string& s);
BrainKind brain_from_string(const std::string& s);
MeanLevel mean_level_from_string(const std::string& s);
StdLevel std_level_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Core records
// ---------------------------------------------------------------------------

struct WorldEnvironment {
    std::string org_name = "Signalpath Labs";
    std::string industry = "recruitment software";
    std::string org_goal =
        "ship the quarterly feature roadmap for the talent-matching platform";
    std::string management_mode = "holacracy";
    int work_days_per_week = 5;
    int hours_per_day = 8;
};

struct MemberProfile {
    MemberId member_id = 0;
    std::string name;
    std::string personality;
    std::string life_habits;
    std::string research_direction;
    double management_competence = 0.0; // 1..5
    double functional_competence = 0.0; // 1..5
};

struct WorkRecord {
    int day = 0; // 1..work_days_per_week, within the week it was logged
    TaskId task_id = 0;
    double hours = 0.0;
    std::vector<MemberId> partners;
    int decision_count = 0;
    std::string note;
};

// Rolling memory carried across weeks: a short narrative plus aggregate
// cooperation history, enough for a brain to condition the next cycle on.
struct MemoryDigest {
    std::string text;
    std::map<TaskId, double> task_hours;
    std::map<MemberId, int> partner_counts;
    double last_evaluation = 0.5;
};

struct MemberState {
    double stress = 0.0; // >= 0
    int assignment_count = 0;
    std::vector<WorkRecord> work_records; // current week only
    MemoryDigest memory_digest;
    double evaluation = 0.5; // latest D_i, carried forward
};

struct TaskSpec {
    TaskId task_id = 0;
    std::string title;
    std::string description;
    double workload_hours = 0.0; // WT_j, > 0
    int deadline_week = 0;       // week index by which the task settles
    int min_members = 0;
    int max_members = 0;
};

// Circle roles.  Stored as the inverse of the member->role mapping: everyone
// in the allocation is implicitly a plain Member unless named here.  A
// one-person circle holds both posts with the same id.
struct Roles {
    MemberId facilitator = -1;
    MemberId secretary = -1;
};

struct TaskState {
    TaskSpec spec;
    std::vector<MemberId> allocation; // a_j' after adjustment
    Roles roles;
    std::map<MemberId, double> hours_logged; // progress credited per member
    double completion = 0.0;                 // C_j in [0,1]
    std::map<MemberId, double> per_member_credit;

    double total_logged() const;
};

// Symmetric pairwise trust, h_ij in [0,1], h_ii fixed at 1.
class TrustMatrix {
public:
    TrustMatrix() = default;
    explicit TrustMatrix(int n, double initial = 0.5);

    int size() const { return n_; }
    double at(int i, int j) const { return h_[static_cast<std::size_t>(i) * n_ + j]; }
    void set(int i, int j, double v); // writes both (i,j) and (j,i)

    const std::vector<double>& entries() const { return h_; }

private:
    int n_ = 0;
    std::vector<double> h_;
};

// ---------------------------------------------------------------------------
// Daily planning
// ---------------------------------------------------------------------------

struct PlanEntry {
    MemberId member_id = 0;
    TaskId task_id = 0;
    double hours = 0.0;
    std::vector<MemberId> partners; // proposed collaborators, excludes self
    Activity activity = Activity::SoloWork;
};

struct DayPlan {
    MemberId member_id = 0;
    std::vector<PlanEntry> entries;
};

// One merged work session after consolidation.  `hours` is the session
// length on the wall clock; `member_hours` is each participant's personal
// time commitment for their work records.
struct WorldGroup {
    TaskId task_id = 0;
    Activity activity = Activity::SoloWork;
    std::vector<MemberId> participants;
    double hours = 0.0;
    std::map<MemberId, double> member_hours;
};

struct WorldPlan {
    std::vector<WorldGroup> groups;
};

// ---------------------------------------------------------------------------
// Event log
// ---------------------------------------------------------------------------

enum class EventKind {
    MemberGenerated,
    TaskIssued,
    Allocated,
    CircleAdjusted,
    RolesAssigned,
    PlanMade,
    PlansConsolidated,
    WorkExecuted,
    MeetingHeld,
    StressUpdated,
    TaskSettled,
    MemberEvaluated,
    TrustUpdated,
    CycleSummarized,
};

std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

struct EventLogEntry {
    int week = 0;
    int day = 0; // 0 = construction, 1..5 = execution, 6 = evaluation
    std::int64_t sequence_no = 0;
    EventKind kind = EventKind::MemberGenerated;
    json payload;
};

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct DynamicsParams {
    double w_hours = 0.05;
    double w_decisions = 0.15;
    double recovery = 0.1;
    double sensitivity_floor = 0.2;
    double trust_rate = 0.1;      // eta
    double trust_threshold = 0.7; // tau
};

struct SimConfig {
    std::uint64_t seed = 0;
    int n_members = 20;
    int tasks_per_week = 4;
    int weeks = 8;
    MeanLevel mgmt_mean_level = MeanLevel::High;
    MeanLevel func_mean_level = MeanLevel::High;
    StdLevel mgmt_std_level = StdLevel::Low;
    StdLevel func_std_level = StdLevel::Low;
    BrainKind brain = BrainKind::Deterministic;
    DynamicsParams dynamics;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

// A violation is a short machine-readable tag plus a human explanation.
struct Violation {
    std::string tag;
    std::string detail;
};

class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string tag, const std::string& detail)
        : std::runtime_error(tag + ": " + detail), tag_(std::move(tag)) {}
    const std::string& tag() const { return tag_; }

private:
    std::string tag_;
};

class InvalidConfig : public std::runtime_error {
public:
    explicit InvalidConfig(const std::string& what) : std::runtime_error(what) {}
};

// Weekly workload balance: returns WT = (N * hours_per_day * work_days) / M,
// the per-task workload that makes issued hours equal organizational
// capacity.  Throws InvalidConfig when N or M is zero.
double validate_workload_balance(const SimConfig& cfg, int hours_per_day = 8,
                                 int work_days_per_week = 5);

// Exactness check on an issued task set.  Hours are carried in half-hour
// integer units so "exactly" means integer equality, not within-epsilon.
bool workload_balance_exact(int n_members, int hours_per_day, int work_days_per_week,
                            const std::vector<double>& task_workloads);

std::vector<Violation> check_task_state(const TaskState& t, int n_members);
std::vector<Violation> check_plan(const DayPlan& plan, int hours_per_day);

void validate_task_state(const TaskState& t, int n_members);   // throws ValidationError
void validate_member_profile(const MemberProfile& p, int n_members);
void validate_task_spec(const TaskSpec& t, int n_members);

// ---------------------------------------------------------------------------
// Canonical JSON encodings (snake_case field names, stable key order)
// ---------------------------------------------------------------------------

void to_json(json& j, const WorldEnvironment& v);
void from_json(const json& j, WorldEnvironment& v);
void to_json(json& j, const MemberProfile& v);
void from_json(const json& j, MemberProfile& v);
void to_json(json& j, const WorkRecord& v);
void from_json(const json& j, WorkRecord& v);
void to_json(json& j, const MemoryDigest& v);
void from_json(const json& j, MemoryDigest& v);
void to_json(json& j, const MemberState& v);
void from_json(const json& j, MemberState& v);
void to_json(json& j, const TaskSpec& v);
void from_json(const json& j, TaskSpec& v);
void to_json(json& j, const Roles& v);
void from_json(const json& j, Roles& v);
void to_json(json& j, const TaskState& v);
void from_json(const json& j, TaskState& v);
void to_json(json& j, const TrustMatrix& v);
void from_json(const json& j, TrustMatrix& v);
void to_json(json& j, const PlanEntry& v);
void from_json(const json& j, PlanEntry& v);
void to_json(json& j, const DayPlan& v);
void from_json(const json& j, DayPlan& v);
void to_json(json& j, const EventLogEntry& v);
void from_json(const json& j, EventLogEntry& v);
void to_json(json& j, const DynamicsParams& v);
void from_json(const json& j, DynamicsParams& v);
void to_json(json& j, const SimConfig& v);
void from_json(const json& j, SimConfig& v);

// Maps keyed by ids encode as JSON objects with decimal-string keys.
json id_map_to_json(const std::map<std::int64_t, double>& m);
std::map<std::int64_t, double> id_map_from_json(const json& j);

} // namespace holosim
