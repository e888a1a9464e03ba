#include "holosim/domain.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace holosim {

// ---------------------------------------------------------------------------
// Enum <-> string
// ---------------------------------------------------------------------------

std::string to_string(Activity a) {
    switch (a) {
    case Activity::SoloWork: return "SoloWork";
    case Activity::Discussion: return "Discussion";
    case Activity::TacticalMeeting: return "TacticalMeeting";
    }
    throw std::logic_error("bad Activity");
}

std::string to_string(RoleKind r) {
    switch (r) {
    case RoleKind::Facilitator: return "Facilitator";
    case RoleKind::Secretary: return "Secretary";
    case RoleKind::Member: return "Member";
    }
    throw std::logic_error("bad RoleKind");
}

std::string to_string(BrainKind b) {
    return b == BrainKind::Deterministic ? "deterministic" : "llm";
}

std::string to_string(MeanLevel l) { return l == MeanLevel::High ? "high" : "low"; }

std::string to_string(StdLevel l) {
    switch (l) {
    case StdLevel::Low: return "low";
    case StdLevel::Medium: return "medium";
    case StdLevel::High: return "high";
    }
    throw std::logic_error("bad StdLevel");
}

Activity activity_from_string(const std::string& s) {
    if (s == "SoloWork") return Activity::SoloWork;
    if (s == "Discussion") return Activity::Discussion;
    if (s == "TacticalMeeting") return Activity::TacticalMeeting;
    throw ValidationError("enum value", "unknown activity '" + s + "'");
}

RoleKind role_from_string(const std::string& s) {
    if (s == "Facilitator") return RoleKind::Facilitator;
    if (s == "Secretary") return RoleKind::Secretary;
    if (s == "Member") return RoleKind::Member;
    throw ValidationError("enum value", "unknown role '" + s + "'");
}

BrainKind brain_from_string(const std::string& s) {
    if (s == "deterministic") return BrainKind::Deterministic;
    if (s == "llm") return BrainKind::Llm;
    throw ValidationError("enum value", "unknown brain '" + s + "'");
}

MeanLevel mean_level_from_string(const std::string& s) {
    if (s == "high") return MeanLevel::High;
    if (s == "low") return MeanLevel::Low;
    throw ValidationError("enum value", "unknown mean level '" + s + "'");
}

StdLevel std_level_from_string(const std::string& s) {
    if (s == "low") return StdLevel::Low;
    if (s == "medium") return StdLevel::Medium;
    if (s == "high") return StdLevel::High;
    throw ValidationError("enum value", "unknown std level '" + s + "'");
}

std::string to_string(EventKind k) {
    switch (k) {
    case EventKind::MemberGenerated: return "MemberGenerated";
    case EventKind::TaskIssued: return "TaskIssued";
    case EventKind::Allocated: return "Allocated";
    case EventKind::CircleAdjusted: return "CircleAdjusted";
    case EventKind::RolesAssigned: return "RolesAssigned";
    case EventKind::PlanMade: return "PlanMade";
    case EventKind::PlansConsolidated: return "PlansConsolidated";
    case EventKind::WorkExecuted: return "WorkExecuted";
    case EventKind::MeetingHeld: return "MeetingHeld";
    case EventKind::StressUpdated: return "StressUpdated";
    case EventKind::TaskSettled: return "TaskSettled";
    case EventKind::MemberEvaluated: return "MemberEvaluated";
    case EventKind::TrustUpdated: return "TrustUpdated";
    case EventKind::CycleSummarized: return "CycleSummarized";
    }
    throw std::logic_error("bad EventKind");
}

EventKind event_kind_from_string(const std::string& s) {
    static const std::map<std::string, EventKind> table = {
        {"MemberGenerated", EventKind::MemberGenerated},
        {"TaskIssued", EventKind::TaskIssued},
        {"Allocated", EventKind::Allocated},
        {"CircleAdjusted", EventKind::CircleAdjusted},
        {"RolesAssigned", EventKind::RolesAssigned},
        {"PlanMade", EventKind::PlanMade},
        {"PlansConsolidated", EventKind::PlansConsolidated},
        {"WorkExecuted", EventKind::WorkExecuted},
        {"MeetingHeld", EventKind::MeetingHeld},
        {"StressUpdated", EventKind::StressUpdated},
        {"TaskSettled", EventKind::TaskSettled},
        {"MemberEvaluated", EventKind::MemberEvaluated},
        {"TrustUpdated", EventKind::TrustUpdated},
        {"CycleSummarized", EventKind::CycleSummarized},
    };
    auto it = table.find(s);
    if (it == table.end()) throw ValidationError("enum value", "unknown event kind '" + s + "'");
    return it->second;
}

// ---------------------------------------------------------------------------
// TaskState / TrustMatrix
// ---------------------------------------------------------------------------

double TaskState::total_logged() const {
    double sum = 0.0;
    for (const auto& [id, h] : hours_logged) sum += h;
    return sum;
}

TrustMatrix::TrustMatrix(int n, double initial) : n_(n), h_(static_cast<std::size_t>(n) * n, initial) {
    for (int i = 0; i < n_; ++i) h_[static_cast<std::size_t>(i) * n_ + i] = 1.0;
}

void TrustMatrix::set(int i, int j, double v) {
    if (i == j) return; // diagonal stays 1
    h_[static_cast<std::size_t>(i) * n_ + j] = v;
    h_[static_cast<std::size_t>(j) * n_ + i] = v;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

// Hours enter the system as multiples of 0.5; converting to integer
// half-hour units makes the weekly balance an exact integer identity.
long long to_half_hours(double hours) {
    const double scaled = hours * 2.0;
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-9) return -1;
    return static_cast<long long>(rounded);
}

} // namespace

double validate_workload_balance(const SimConfig& cfg, int hours_per_day,
                                 int work_days_per_week) {
    if (cfg.n_members <= 0) throw InvalidConfig("n_members must be positive");
    if (cfg.tasks_per_week <= 0) throw InvalidConfig("tasks_per_week must be positive");
    const double wt = static_cast<double>(cfg.n_members) * hours_per_day * work_days_per_week /
                      static_cast<double>(cfg.tasks_per_week);
    if (wt <= 0) throw InvalidConfig("per-task workload must be positive");
    return wt;
}

bool workload_balance_exact(int n_members, int hours_per_day, int work_days_per_week,
                            const std::vector<double>& task_workloads) {
    const long long capacity =
        2LL * n_members * hours_per_day * work_days_per_week; // half-hour units
    long long issued = 0;
    for (double wt : task_workloads) {
        const long long units = to_half_hours(wt);
        if (units < 0) return false; // not representable as half hours
        issued += units;
    }
    return issued == capacity;
}

std::vector<Violation> check_task_state(const TaskState& t, int n_members) {
    std::vector<Violation> out;
    const auto& a = t.allocation;

    const int size = static_cast<int>(a.size());
    if (size < t.spec.min_members || size > t.spec.max_members)
        out.push_back({"allocation size", "circle of " + std::to_string(size) +
                                              " outside bounds [" + std::to_string(t.spec.min_members) +
                                              "," + std::to_string(t.spec.max_members) + "]"});

    std::set<MemberId> seen;
    for (MemberId id : a) {
        if (id < 0 || id >= n_members)
            out.push_back({"allocation bounds", "member " + std::to_string(id) + " out of range"});
        if (!seen.insert(id).second)
            out.push_back({"allocation duplicates", "member " + std::to_string(id) + " listed twice"});
    }

    const bool facilitator_ok = t.roles.facilitator >= 0 && seen.count(t.roles.facilitator) > 0;
    const bool secretary_ok = t.roles.secretary >= 0 && seen.count(t.roles.secretary) > 0;
    if (!facilitator_ok || !secretary_ok) {
        out.push_back({"role cardinality", "circle must name one facilitator and one secretary "
                                           "from its allocation"});
    } else if (t.roles.facilitator == t.roles.secretary && a.size() > 1) {
        out.push_back({"role cardinality", "facilitator and secretary may coincide only in a "
                                           "one-person circle"});
    }

    for (const auto& [id, h] : t.hours_logged) {
        if (seen.count(id) == 0)
            out.push_back({"hours by non-member", "member " + std::to_string(id) +
                                                      " logged hours without being allocated"});
        if (h < 0) out.push_back({"negative hours", "member " + std::to_string(id)});
    }

    if (t.completion < 0.0 || t.completion > 1.0)
        out.push_back({"completion range", "completion " + std::to_string(t.completion)});

    return out;
}

std::vector<Violation> check_plan(const DayPlan& plan, int hours_per_day) {
    std::vector<Violation> out;
    double total = 0.0;
    for (const auto& e : plan.entries) {
        if (e.member_id != plan.member_id)
            out.push_back({"plan owner", "entry member does not match plan owner"});
        if (e.hours <= 0)
            out.push_back({"plan hours", "non-positive hours on task " + std::to_string(e.task_id)});
        for (MemberId p : e.partners)
            if (p == plan.member_id)
                out.push_back({"plan partners", "member lists itself as partner"});
        total += e.hours;
    }
    if (total > hours_per_day + 1e-9)
        out.push_back({"plan hours", "planned " + std::to_string(total) + "h exceeds the " +
                                         std::to_string(hours_per_day) + "h day"});
    return out;
}

void validate_task_state(const TaskState& t, int n_members) {
    const auto v = check_task_state(t, n_members);
    if (!v.empty()) throw ValidationError(v.front().tag, v.front().detail);
}

void validate_member_profile(const MemberProfile& p, int n_members) {
    if (p.member_id < 0 || p.member_id >= n_members)
        throw ValidationError("member id", "id " + std::to_string(p.member_id) + " out of range");
    if (p.name.empty()) throw ValidationError("member profile", "empty name");
    if (p.personality.empty() || p.life_habits.empty() || p.research_direction.empty())
        throw ValidationError("member profile", "empty persona field");
    if (p.management_competence < 1.0 || p.management_competence > 5.0 ||
        p.functional_competence < 1.0 || p.functional_competence > 5.0)
        throw ValidationError("competence range", "competence outside [1,5]");
}

void validate_task_spec(const TaskSpec& t, int n_members) {
    if (t.title.empty() || t.description.empty())
        throw ValidationError("task text", "empty title or description");
    if (t.workload_hours <= 0)
        throw ValidationError("task workload", "workload must be positive");
    if (t.min_members < 1 || t.max_members < t.min_members || t.max_members > n_members)
        throw ValidationError("task bounds", "need 1 <= min <= max <= N");
    if (t.deadline_week < 0) throw ValidationError("task deadline", "negative deadline week");
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

json id_map_to_json(const std::map<std::int64_t, double>& m) {
    json j = json::object();
    for (const auto& [id, v] : m) j[std::to_string(id)] = v;
    return j;
}

std::map<std::int64_t, double> id_map_from_json(const json& j) {
    std::map<std::int64_t, double> m;
    for (auto it = j.begin(); it != j.end(); ++it)
        m[std::stoll(it.key())] = it.value().get<double>();
    return m;
}

namespace {

json int_map_to_json(const std::map<std::int64_t, int>& m) {
    json j = json::object();
    for (const auto& [id, v] : m) j[std::to_string(id)] = v;
    return j;
}

std::map<std::int64_t, int> int_map_from_json(const json& j) {
    std::map<std::int64_t, int> m;
    for (auto it = j.begin(); it != j.end(); ++it)
        m[std::stoll(it.key())] = it.value().get<int>();
    return m;
}

} // namespace

void to_json(json& j, const WorldEnvironment& v) {
    j = json{{"org_name", v.org_name},
             {"industry", v.industry},
             {"org_goal", v.org_goal},
             {"management_mode", v.management_mode},
             {"work_days_per_week", v.work_days_per_week},
             {"hours_per_day", v.hours_per_day}};
}

void from_json(const json& j, WorldEnvironment& v) {
    j.at("org_name").get_to(v.org_name);
    j.at("industry").get_to(v.industry);
    j.at("org_goal").get_to(v.org_goal);
    j.at("management_mode").get_to(v.management_mode);
    j.at("work_days_per_week").get_to(v.work_days_per_week);
    j.at("hours_per_day").get_to(v.hours_per_day);
}

void to_json(json& j, const MemberProfile& v) {
    j = json{{"member_id", v.member_id},
             {"name", v.name},
             {"personality", v.personality},
             {"life_habits", v.life_habits},
             {"research_direction", v.research_direction},
             {"management_competence", v.management_competence},
             {"functional_competence", v.functional_competence}};
}

void from_json(const json& j, MemberProfile& v) {
    j.at("member_id").get_to(v.member_id);
    j.at("name").get_to(v.name);
    j.at("personality").get_to(v.personality);
    j.at("life_habits").get_to(v.life_habits);
    j.at("research_direction").get_to(v.research_direction);
    j.at("management_competence").get_to(v.management_competence);
    j.at("functional_competence").get_to(v.functional_competence);
}

void to_json(json& j, const WorkRecord& v) {
    j = json{{"day", v.day},          {"task_id", v.task_id},
             {"hours", v.hours},      {"partners", v.partners},
             {"decision_count", v.decision_count}, {"note", v.note}};
}

void from_json(const json& j, WorkRecord& v) {
    j.at("day").get_to(v.day);
    j.at("task_id").get_to(v.task_id);
    j.at("hours").get_to(v.hours);
    j.at("partners").get_to(v.partners);
    j.at("decision_count").get_to(v.decision_count);
    j.at("note").get_to(v.note);
}

void to_json(json& j, const MemoryDigest& v) {
    j = json{{"text", v.text},
             {"task_hours", id_map_to_json(v.task_hours)},
             {"partner_counts", int_map_to_json(v.partner_counts)},
             {"last_evaluation", v.last_evaluation}};
}

void from_json(const json& j, MemoryDigest& v) {
    j.at("text").get_to(v.text);
    v.task_hours = id_map_from_json(j.at("task_hours"));
    v.partner_counts = int_map_from_json(j.at("partner_counts"));
    j.at("last_evaluation").get_to(v.last_evaluation);
}

void to_json(json& j, const MemberState& v) {
    j = json{{"stress", v.stress},
             {"assignment_count", v.assignment_count},
             {"work_records", v.work_records},
             {"memory_digest", v.memory_digest},
             {"evaluation", v.evaluation}};
}

void from_json(const json& j, MemberState& v) {
    j.at("stress").get_to(v.stress);
    j.at("assignment_count").get_to(v.assignment_count);
    j.at("work_records").get_to(v.work_records);
    j.at("memory_digest").get_to(v.memory_digest);
    j.at("evaluation").get_to(v.evaluation);
}

void to_json(json& j, const TaskSpec& v) {
    j = json{{"task_id", v.task_id},
             {"title", v.title},
             {"description", v.description},
             {"workload_hours", v.workload_hours},
             {"deadline_week", v.deadline_week},
             {"min_members", v.min_members},
             {"max_members", v.max_members}};
}

void from_json(const json& j, TaskSpec& v) {
    j.at("task_id").get_to(v.task_id);
    j.at("title").get_to(v.title);
    j.at("description").get_to(v.description);
    j.at("workload_hours").get_to(v.workload_hours);
    j.at("deadline_week").get_to(v.deadline_week);
    j.at("min_members").get_to(v.min_members);
    j.at("max_members").get_to(v.max_members);
}

void to_json(json& j, const Roles& v) {
    j = json{{"facilitator", v.facilitator}, {"secretary", v.secretary}};
}

void from_json(const json& j, Roles& v) {
    j.at("facilitator").get_to(v.facilitator);
    j.at("secretary").get_to(v.secretary);
}

void to_json(json& j, const TaskState& v) {
    j = json{{"spec", v.spec},
             {"allocation", v.allocation},
             {"roles", v.roles},
             {"hours_logged", id_map_to_json(v.hours_logged)},
             {"completion", v.completion},
             {"per_member_credit", id_map_to_json(v.per_member_credit)}};
}

void from_json(const json& j, TaskState& v) {
    j.at("spec").get_to(v.spec);
    j.at("allocation").get_to(v.allocation);
    j.at("roles").get_to(v.roles);
    v.hours_logged = id_map_from_json(j.at("hours_logged"));
    j.at("completion").get_to(v.completion);
    v.per_member_credit = id_map_from_json(j.at("per_member_credit"));
}

void to_json(json& j, const TrustMatrix& v) {
    json rows = json::array();
    for (int i = 0; i < v.size(); ++i) {
        json row = json::array();
        for (int k = 0; k < v.size(); ++k) row.push_back(v.at(i, k));
        rows.push_back(std::move(row));
    }
    j = json{{"entries", std::move(rows)}};
}

void from_json(const json& j, TrustMatrix& v) {
    const auto& rows = j.at("entries");
    const int n = static_cast<int>(rows.size());
    v = TrustMatrix(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (i != k) v.set(i, k, rows[i][k].get<double>());
}

void to_json(json& j, const PlanEntry& v) {
    j = json{{"member_id", v.member_id},
             {"task_id", v.task_id},
             {"hours", v.hours},
             {"partners", v.partners},
             {"activity", to_string(v.activity)}};
}

void from_json(const json& j, PlanEntry& v) {
    j.at("member_id").get_to(v.member_id);
    j.at("task_id").get_to(v.task_id);
    j.at("hours").get_to(v.hours);
    j.at("partners").get_to(v.partners);
    v.activity = activity_from_string(j.at("activity").get<std::string>());
}

void to_json(json& j, const DayPlan& v) {
    j = json{{"member_id", v.member_id}, {"entries", v.entries}};
}

void from_json(const json& j, DayPlan& v) {
    j.at("member_id").get_to(v.member_id);
    j.at("entries").get_to(v.entries);
}

void to_json(json& j, const EventLogEntry& v) {
    j = json{{"week", v.week},
             {"day", v.day},
             {"sequence_no", v.sequence_no},
             {"kind", to_string(v.kind)},
             {"payload", v.payload}};
}

void from_json(const json& j, EventLogEntry& v) {
    j.at("week").get_to(v.week);
    j.at("day").get_to(v.day);
    j.at("sequence_no").get_to(v.sequence_no);
    v.kind = event_kind_from_string(j.at("kind").get<std::string>());
    v.payload = j.at("payload");
}

void to_json(json& j, const DynamicsParams& v) {
    j = json{{"w_hours", v.w_hours},
             {"w_decisions", v.w_decisions},
             {"recovery", v.recovery},
             {"sensitivity_floor", v.sensitivity_floor},
             {"trust_rate", v.trust_rate},
             {"trust_threshold", v.trust_threshold}};
}

void from_json(const json& j, DynamicsParams& v) {
    j.at("w_hours").get_to(v.w_hours);
    j.at("w_decisions").get_to(v.w_decisions);
    j.at("recovery").get_to(v.recovery);
    j.at("sensitivity_floor").get_to(v.sensitivity_floor);
    j.at("trust_rate").get_to(v.trust_rate);
    j.at("trust_threshold").get_to(v.trust_threshold);
}

void to_json(json& j, const SimConfig& v) {
    j = json{{"seed", v.seed},
             {"n_members", v.n_members},
             {"tasks_per_week", v.tasks_per_week},
             {"weeks", v.weeks},
             {"mgmt_mean_level", to_string(v.mgmt_mean_level)},
             {"func_mean_level", to_string(v.func_mean_level)},
             {"mgmt_std_level", to_string(v.mgmt_std_level)},
             {"func_std_level", to_string(v.func_std_level)},
             {"brain", to_string(v.brain)},
             {"dynamics", v.dynamics}};
}

void from_json(const json& j, SimConfig& v) {
    j.at("seed").get_to(v.seed);
    j.at("n_members").get_to(v.n_members);
    j.at("tasks_per_week").get_to(v.tasks_per_week);
    j.at("weeks").get_to(v.weeks);
    v.mgmt_mean_level = mean_level_from_string(j.at("mgmt_mean_level").get<std::string>());
    v.func_mean_level = mean_level_from_string(j.at("func_mean_level").get<std::string>());
    v.mgmt_std_level = std_level_from_string(j.at("mgmt_std_level").get<std::string>());
    v.func_std_level = std_level_from_string(j.at("func_std_level").get<std::string>());
    v.brain = brain_from_string(j.at("brain").get<std::string>());
    j.at("dynamics").get_to(v.dynamics);
}

} // namespace holosim
