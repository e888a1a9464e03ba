#include "holosim/brain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

namespace holosim {

std::string to_string(BackendError::Kind k) {
    switch (k) {
    case BackendError::Kind::Timeout: return "Timeout";
    case BackendError::Kind::HttpStatus: return "HttpStatus";
    case BackendError::Kind::SchemaInvalid: return "SchemaInvalid";
    case BackendError::Kind::RetriesExhausted: return "RetriesExhausted";
    }
    throw std::logic_error("bad BackendError::Kind");
}

double mean_level_value(MeanLevel l) { return l == MeanLevel::High ? 4.0 : 2.0; }

double std_level_value(StdLevel l) {
    switch (l) {
    case StdLevel::Low: return 0.3;
    case StdLevel::Medium: return 0.6;
    case StdLevel::High: return 0.9;
    }
    throw std::logic_error("bad StdLevel");
}

CompetenceConfig CompetenceConfig::from_levels(MeanLevel mgmt_mean, StdLevel mgmt_std,
                                               MeanLevel func_mean, StdLevel func_std) {
    return CompetenceConfig{mean_level_value(mgmt_mean), std_level_value(mgmt_std),
                            mean_level_value(func_mean), std_level_value(func_std)};
}

double work_intensity(double management_competence, double functional_competence) {
    // Gentle slope: competence nudges the share of the day a member commits,
    // topping out at a full day for the strongest profiles.
    const double avg = (management_competence + functional_competence) / 2.0;
    return std::clamp(0.88 + 0.04 * (avg - 1.0), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Word lists for the reference backend's generated text
// ---------------------------------------------------------------------------

namespace {

constexpr std::array kFirstNames = {
    "Ada",   "Bruno",  "Carmen", "Daria", "Elio",  "Freya",  "Gustav", "Hana",
    "Ivo",   "Jolene", "Kasper", "Leila", "Mateo", "Nadia",  "Oskar",  "Priya",
    "Quinn", "Rosa",   "Stefan", "Talia", "Umar",  "Vera",   "Wendel", "Yuki",
};

constexpr std::array kLastNames = {
    "Albrecht", "Barros",  "Calloway", "Dvorak",  "Eriksen", "Fontaine", "Grieg",  "Holm",
    "Ibarra",   "Jansen",  "Kowalski", "Lindqvist", "Moreau", "Novak",   "Okafor", "Petrov",
    "Quiroga",  "Rantanen", "Sorensen", "Tanaka",  "Ueda",    "Vasquez", "Winter", "Zeman",
};

constexpr std::array kPersonalities = {
    "calm and methodical",
    "outspoken and quick to decide",
    "curious, asks many questions",
    "reserved but thorough",
    "optimistic and collaborative",
    "skeptical, insists on evidence",
    "patient mentor type",
    "restless improver of processes",
    "pragmatic deadline-keeper",
    "detail-obsessed perfectionist",
    "diplomatic consensus-builder",
    "blunt but fair reviewer",
};

constexpr std::array kLifeHabits = {
    "early riser, plans the day before standup",
    "night owl, does deep work after dinner",
    "runs every morning, keeps a paper notebook",
    "batch-cooks on Sundays, guards the calendar",
    "takes walking breaks between long sessions",
    "strict inbox-zero practitioner",
    "keeps a reading hour before bed",
    "swims twice a week, avoids late meetings",
    "gardens on weekends, offline after eight",
    "long cyclist, prefers async updates",
};

constexpr std::array kResearchDirections = {
    "candidate-ranking models",
    "resume information extraction",
    "interview scheduling optimization",
    "skills-taxonomy curation",
    "matching-engine retrieval quality",
    "recruiter workflow analytics",
    "salary-band estimation",
    "job-description generation tooling",
    "profile deduplication heuristics",
    "pipeline reliability engineering",
};

constexpr std::array kTaskVerbs = {
    "Design", "Prototype", "Refactor", "Benchmark",
    "Harden", "Optimize",  "Integrate", "Document",
};

constexpr std::array kTaskTopics = {
    "the resume parsing pipeline",
    "the candidate-ranking service",
    "the interview scheduling engine",
    "the skills taxonomy importer",
    "the recruiter analytics dashboard",
    "the matching-index rebuild job",
    "the notification relay",
    "the profile deduplication batch",
    "the salary-band estimator",
    "the job-posting ingestion feed",
};

constexpr std::array kTaskGoals = {
    "cut end-to-end latency for the recruiting team",
    "raise match precision on the weekly evaluation set",
    "remove the backlog of flaky runs",
    "prepare the next platform release",
    "bring the error budget back under target",
    "unblock the enterprise onboarding queue",
};

template <typename List>
const char* pick(const List& list, RngStream& rng) {
    return list[rng.pick_index(list.size())];
}

std::string format_hours(double h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", h);
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// DeterministicBrain
// ---------------------------------------------------------------------------

std::vector<MemberProfile> DeterministicBrain::generate_members(const WorldEnvironment& env,
                                                                int n,
                                                                const CompetenceConfig& cfg,
                                                                RngStream& rng) {
    if (n < 1) throw InvalidConfig("generate_members requires n >= 1");
    std::vector<MemberProfile> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        MemberProfile p;
        p.member_id = i;
        p.name = std::string(pick(kFirstNames, rng)) + " " + pick(kLastNames, rng);
        p.personality = pick(kPersonalities, rng);
        p.life_habits = pick(kLifeHabits, rng);
        p.research_direction = std::string("works on ") + pick(kResearchDirections, rng) +
                               " for " + env.org_name;
        p.management_competence = std::clamp(rng.normal(cfg.mgmt_mean, cfg.mgmt_std), 1.0, 5.0);
        p.functional_competence = std::clamp(rng.normal(cfg.func_mean, cfg.func_std), 1.0, 5.0);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<TaskSpec> DeterministicBrain::generate_tasks(const WorldEnvironment& env,
                                                         int n_members, int m, RngStream& rng) {
    if (m < 1) throw InvalidConfig("generate_tasks requires m >= 1");
    if (n_members < 1) throw InvalidConfig("generate_tasks requires a non-empty organization");

    // Split weekly capacity exactly: work in half-hour units, spreading the
    // remainder over the first tasks so Σ WT_j = N·hours·days to the unit.
    const long long total_units =
        2LL * n_members * env.hours_per_day * env.work_days_per_week;
    const long long base = total_units / m;
    const long long extra = total_units % m;

    std::vector<TaskSpec> out;
    out.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        TaskSpec t;
        t.task_id = k; // placeholder; engine assigns global ids
        const std::string verb = pick(kTaskVerbs, rng);
        const std::string topic = pick(kTaskTopics, rng);
        const std::string goal = pick(kTaskGoals, rng);
        t.title = verb + " " + topic;
        t.description = verb + " " + topic + " to " + goal + ", in service of the goal to " +
                        env.org_goal + ".";
        t.workload_hours = static_cast<double>(base + (k < extra ? 1 : 0)) / 2.0;
        t.deadline_week = 0; // engine stamps the issue week
        t.min_members = std::min(2, n_members);
        t.max_members = std::min(6, n_members);
        out.push_back(std::move(t));
    }
    return out;
}

double DeterministicBrain::candidate_score(const MemberProfile& p, const TrustMatrix& trust,
                                           const std::vector<MemberId>& picked,
                                           int assignment_count) {
    double trust_term = 0.0;
    if (!picked.empty()) {
        double sum = 0.0;
        for (MemberId q : picked) sum += trust.at(static_cast<int>(p.member_id), static_cast<int>(q));
        trust_term = sum / static_cast<double>(picked.size());
    }
    return kW1 * (p.management_competence + p.functional_competence) / 2.0 +
           kW2 * trust_term - kW3 * assignment_count;
}

std::vector<MemberId> DeterministicBrain::allocate_members(
    const TaskSpec& task, const std::vector<MemberProfile>& profiles, const TrustMatrix& trust,
    const std::vector<int>& assignment_counts) {
    const int n = static_cast<int>(profiles.size());
    if (task.min_members > n)
        throw AllocationInfeasible("task " + std::to_string(task.task_id) + " needs " +
                                   std::to_string(task.min_members) + " members, have " +
                                   std::to_string(n));

    // Preferred circle size tracks the task's capacity need: enough people
    // to cover the workload in one week of full-time effort, clamped to the
    // task bounds.
    const double week_hours =
        static_cast<double>(env_.hours_per_day) * env_.work_days_per_week;
    const int capacity = static_cast<int>(std::lround(task.workload_hours / week_hours));
    const int target = std::clamp(capacity, task.min_members, task.max_members);

    std::vector<MemberId> picked;
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    while (static_cast<int>(picked.size()) < target) {
        int best = -1;
        double best_score = 0.0;
        for (int i = 0; i < n; ++i) {
            if (taken[static_cast<std::size_t>(i)]) continue;
            const double s = candidate_score(profiles[static_cast<std::size_t>(i)], trust,
                                             picked, assignment_counts[static_cast<std::size_t>(i)]);
            if (best < 0 || s > best_score) {
                best = i;
                best_score = s;
            }
        }
        picked.push_back(profiles[static_cast<std::size_t>(best)].member_id);
        taken[static_cast<std::size_t>(best)] = true;
    }
    return picked;
}

std::vector<MemberId> DeterministicBrain::adjust_circle(const TaskSpec& task,
                                                        const TrustMatrix& trust,
                                                        const std::vector<MemberId>& allocation) {
    const int size = static_cast<int>(allocation.size());
    if (size <= task.min_members) return allocation;

    // Ballots are cast once against the original allocation: incumbent i
    // votes to drop j when trust falls below the threshold.  A strict
    // majority of the other incumbents is required.
    struct Marked {
        MemberId id;
        int votes;
    };
    std::vector<Marked> marked;
    for (MemberId j : allocation) {
        int drop_votes = 0;
        for (MemberId i : allocation) {
            if (i == j) continue;
            if (trust.at(static_cast<int>(i), static_cast<int>(j)) < kVoteThreshold) ++drop_votes;
        }
        if (2 * drop_votes > size - 1) marked.push_back({j, drop_votes});
    }
    std::sort(marked.begin(), marked.end(), [](const Marked& a, const Marked& b) {
        if (a.votes != b.votes) return a.votes > b.votes;
        return a.id < b.id;
    });

    std::vector<MemberId> result = allocation;
    for (const Marked& m : marked) {
        if (static_cast<int>(result.size()) - 1 < task.min_members) break;
        result.erase(std::find(result.begin(), result.end(), m.id));
    }
    return result;
}

Roles DeterministicBrain::assign_roles(const TaskSpec&, const std::vector<MemberId>& allocation,
                                       const std::vector<MemberProfile>& profiles) {
    auto profile_of = [&](MemberId id) -> const MemberProfile& {
        return profiles[static_cast<std::size_t>(id)];
    };
    auto argmax = [&](auto key, MemberId skip) {
        MemberId best = -1;
        double best_v = 0.0;
        for (MemberId id : allocation) {
            if (id == skip) continue;
            const double v = key(profile_of(id));
            if (best < 0 || v > best_v || (v == best_v && id < best)) {
                best = id;
                best_v = v;
            }
        }
        return best;
    };

    Roles r;
    r.facilitator = argmax([](const MemberProfile& p) { return p.management_competence; }, -1);
    r.secretary = allocation.size() == 1
                      ? r.facilitator
                      : argmax([](const MemberProfile& p) { return p.functional_competence; },
                               r.facilitator);
    return r;
}

DayPlan DeterministicBrain::plan_day(const MemberProfile& profile, const MemberState&,
                                     const std::vector<TaskState>& member_tasks,
                                     const std::vector<double>& completions,
                                     const PlanContext& ctx, RngStream&) {
    DayPlan plan;
    plan.member_id = profile.member_id;

    // Committed effort scales with competence; half-hour granularity.
    long long budget_units = std::llround(
        2.0 * ctx.hours_per_day *
        work_intensity(profile.management_competence, profile.functional_competence));

    // Daily tactical huddles: three half-hour syncs with the whole circle
    // for every multi-member task, budget permitting, smallest task id
    // first.  Short and frequent keeps every circle coordinating daily.
    constexpr int kHuddlesPerDay = 3;
    std::vector<PlanEntry> meetings;
    {
        std::vector<const TaskState*> multi;
        for (const TaskState& t : member_tasks)
            if (t.allocation.size() >= 2) multi.push_back(&t);
        std::sort(multi.begin(), multi.end(), [](const TaskState* a, const TaskState* b) {
            return a->spec.task_id < b->spec.task_id;
        });
        for (int round = 0; round < kHuddlesPerDay; ++round) {
            for (const TaskState* t : multi) {
                if (budget_units < 1) break;
                PlanEntry e;
                e.member_id = profile.member_id;
                e.task_id = t->spec.task_id;
                e.hours = 0.5;
                e.activity = Activity::TacticalMeeting;
                for (MemberId id : t->allocation)
                    if (id != profile.member_id) e.partners.push_back(id);
                std::sort(e.partners.begin(), e.partners.end());
                meetings.push_back(std::move(e));
                budget_units -= 1;
            }
        }
    }

    // Remaining effort goes into one focused block on the member's most
    // open task: deepest remaining workload first, any leftover spilling
    // into the next deepest (ties to the smaller task id).  As a focused
    // task fills up, the deepest-first rule rotates attention onto the
    // others, so circles drain evenly over the week without members
    // context-switching across every task every day.
    struct Open {
        const TaskState* task;
        long long remaining_units;
    };
    std::vector<Open> open;
    for (std::size_t k = 0; k < member_tasks.size(); ++k) {
        const TaskState& t = member_tasks[k];
        if (k < completions.size() && completions[k] >= 1.0) continue;
        const double remaining = t.spec.workload_hours - t.total_logged();
        const long long units = static_cast<long long>(std::llround(remaining * 2.0));
        if (units <= 0) continue;
        open.push_back({&t, units});
    }
    std::sort(open.begin(), open.end(), [](const Open& a, const Open& b) {
        if (a.remaining_units != b.remaining_units) return a.remaining_units > b.remaining_units;
        return a.task->spec.task_id < b.task->spec.task_id;
    });

    for (const Open& o : open) {
        if (budget_units < 1) break;
        const long long grant = std::min(budget_units, o.remaining_units);
        budget_units -= grant;
        PlanEntry e;
        e.member_id = profile.member_id;
        e.task_id = o.task->spec.task_id;
        e.hours = static_cast<double>(grant) / 2.0;
        e.activity = Activity::SoloWork;
        plan.entries.push_back(std::move(e));
    }

    for (PlanEntry& e : meetings) plan.entries.push_back(std::move(e));
    return plan;
}

MemoryDigest DeterministicBrain::summarize_cycle(const MemberProfile& profile,
                                                 const std::vector<WorkRecord>& records,
                                                 double evaluation) {
    MemoryDigest d;
    d.last_evaluation = evaluation;
    if (records.empty()) return d;

    double total = 0.0;
    for (const WorkRecord& r : records) {
        d.task_hours[r.task_id] += r.hours;
        for (MemberId p : r.partners) d.partner_counts[p] += 1;
        total += r.hours;
    }
    d.text = profile.name + " logged " + format_hours(total) + "h across " +
             std::to_string(d.task_hours.size()) + " task(s) with " +
             std::to_string(d.partner_counts.size()) + " partner(s).";
    return d;
}

// ---------------------------------------------------------------------------
// Engine-side response validation (applies to every backend)
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void schema_fail(const std::string& what) {
    throw BackendError(BackendError::Kind::SchemaInvalid, what);
}

} // namespace

void validate_members_response(const std::vector<MemberProfile>& profiles, int n) {
    if (static_cast<int>(profiles.size()) != n)
        schema_fail("expected " + std::to_string(n) + " member profiles, got " +
                    std::to_string(profiles.size()));
    std::set<MemberId> ids;
    for (const MemberProfile& p : profiles) {
        try {
            validate_member_profile(p, n);
        } catch (const ValidationError& e) {
            schema_fail(e.what());
        }
        if (!ids.insert(p.member_id).second) schema_fail("duplicate member_id in profiles");
    }
}

void validate_tasks_response(const std::vector<TaskSpec>& tasks, int m, int n_members,
                             int hours_per_day, int work_days_per_week) {
    if (static_cast<int>(tasks.size()) != m)
        schema_fail("expected " + std::to_string(m) + " tasks, got " +
                    std::to_string(tasks.size()));
    std::vector<double> workloads;
    for (const TaskSpec& t : tasks) {
        try {
            validate_task_spec(t, n_members);
        } catch (const ValidationError& e) {
            schema_fail(e.what());
        }
        workloads.push_back(t.workload_hours);
    }
    if (!workload_balance_exact(n_members, hours_per_day, work_days_per_week, workloads))
        schema_fail("issued workloads do not sum to weekly capacity");
}

void validate_allocation_response(const std::vector<MemberId>& allocation, const TaskSpec& task,
                                  int n_members) {
    const int size = static_cast<int>(allocation.size());
    if (size < task.min_members || size > task.max_members)
        schema_fail("allocation size " + std::to_string(size) + " outside task bounds");
    std::set<MemberId> seen;
    for (MemberId id : allocation) {
        if (id < 0 || id >= n_members) schema_fail("allocation references unknown member");
        if (!seen.insert(id).second) schema_fail("allocation lists a member twice");
    }
}

void validate_adjustment_response(const std::vector<MemberId>& adjusted, const TaskSpec& task,
                                  const std::vector<MemberId>& original) {
    if (static_cast<int>(adjusted.size()) < task.min_members)
        schema_fail("adjusted circle fell below min_members");
    const std::set<MemberId> pool(original.begin(), original.end());
    std::set<MemberId> seen;
    for (MemberId id : adjusted) {
        if (pool.count(id) == 0) schema_fail("adjustment added a member not in the circle");
        if (!seen.insert(id).second) schema_fail("adjustment lists a member twice");
    }
}

void validate_roles_response(const Roles& roles, const std::vector<MemberId>& allocation) {
    const auto in = [&](MemberId id) {
        return std::find(allocation.begin(), allocation.end(), id) != allocation.end();
    };
    if (roles.facilitator < 0 || !in(roles.facilitator)) schema_fail("facilitator not in circle");
    if (roles.secretary < 0 || !in(roles.secretary)) schema_fail("secretary not in circle");
    if (roles.facilitator == roles.secretary && allocation.size() > 1)
        schema_fail("facilitator and secretary coincide in a multi-member circle");
}

void validate_plan_response(const DayPlan& plan, const MemberProfile& profile,
                            const std::vector<TaskState>& member_tasks, int hours_per_day) {
    if (plan.member_id != profile.member_id) schema_fail("plan owner mismatch");
    double total = 0.0;
    for (const PlanEntry& e : plan.entries) {
        if (e.member_id != profile.member_id) schema_fail("plan entry owner mismatch");
        if (e.hours <= 0) schema_fail("plan entry with non-positive hours");
        const TaskState* t = nullptr;
        for (const TaskState& mt : member_tasks)
            if (mt.spec.task_id == e.task_id) t = &mt;
        if (t == nullptr) schema_fail("plan references a task the member is not allocated to");
        for (MemberId p : e.partners) {
            if (p == profile.member_id) schema_fail("plan lists the member as its own partner");
            if (std::find(t->allocation.begin(), t->allocation.end(), p) == t->allocation.end())
                schema_fail("plan partner outside the task allocation");
        }
        total += e.hours;
    }
    if (total > static_cast<double>(hours_per_day) + 1e-9)
        schema_fail("planned hours exceed the working day");
}

} // namespace holosim
