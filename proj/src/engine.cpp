#include "holosim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "holosim/dynamics.hpp"

namespace holosim {

// ---------------------------------------------------------------------------
// Snapshot JSON
// ---------------------------------------------------------------------------

void to_json(json& j, const MemberSnapshotRow& v) {
    j = json{{"member_id", v.member_id},
             {"stress", v.stress},
             {"evaluation", v.evaluation},
             {"circle_count", v.circle_count},
             {"assigned_workload", v.assigned_workload},
             {"completion_level", v.completion_level},
             {"avg_circle_count", v.avg_circle_count},
             {"avg_workload", v.avg_workload},
             {"management_competence", v.management_competence},
             {"functional_competence", v.functional_competence}};
}

void from_json(const json& j, MemberSnapshotRow& v) {
    j.at("member_id").get_to(v.member_id);
    j.at("stress").get_to(v.stress);
    j.at("evaluation").get_to(v.evaluation);
    j.at("circle_count").get_to(v.circle_count);
    j.at("assigned_workload").get_to(v.assigned_workload);
    j.at("completion_level").get_to(v.completion_level);
    j.at("avg_circle_count").get_to(v.avg_circle_count);
    j.at("avg_workload").get_to(v.avg_workload);
    j.at("management_competence").get_to(v.management_competence);
    j.at("functional_competence").get_to(v.functional_competence);
}

void to_json(json& j, const TaskSnapshotRow& v) {
    j = json{{"task_id", v.task_id},
             {"completion", v.completion},
             {"workload_hours", v.workload_hours},
             {"circle_size", v.circle_size}};
}

void from_json(const json& j, TaskSnapshotRow& v) {
    j.at("task_id").get_to(v.task_id);
    j.at("completion").get_to(v.completion);
    j.at("workload_hours").get_to(v.workload_hours);
    j.at("circle_size").get_to(v.circle_size);
}

void to_json(json& j, const OrgSnapshotRow& v) {
    j = json{{"mean_stress", v.mean_stress},
             {"mean_completion", v.mean_completion},
             {"circles", v.circles},
             {"mgmt_mean", v.mgmt_mean},
             {"func_mean", v.func_mean},
             {"mgmt_std", v.mgmt_std},
             {"func_std", v.func_std}};
}

void from_json(const json& j, OrgSnapshotRow& v) {
    j.at("mean_stress").get_to(v.mean_stress);
    j.at("mean_completion").get_to(v.mean_completion);
    j.at("circles").get_to(v.circles);
    j.at("mgmt_mean").get_to(v.mgmt_mean);
    j.at("func_mean").get_to(v.func_mean);
    j.at("mgmt_std").get_to(v.mgmt_std);
    j.at("func_std").get_to(v.func_std);
}

void to_json(json& j, const WeekSnapshot& v) {
    j = json{{"week", v.week},
             {"org", v.org},
             {"members", v.members},
             {"tasks", v.tasks},
             {"trust", v.trust}};
}

void from_json(const json& j, WeekSnapshot& v) {
    j.at("week").get_to(v.week);
    j.at("org").get_to(v.org);
    j.at("members").get_to(v.members);
    j.at("tasks").get_to(v.tasks);
    j.at("trust").get_to(v.trust);
}

// ---------------------------------------------------------------------------
// Pure helpers
// ---------------------------------------------------------------------------

WorldPlan consolidate_plans(const std::vector<DayPlan>& plans) {
    // Key = (task, activity, round); within each key, mutual partner listings
    // form the merge graph whose connected components become joint sessions.
    // The round index separates repeat sessions a member plans on the same
    // task and activity (say, several huddles a day) so each one stays its
    // own session and every planned hour reaches the timesheet.
    struct Key {
        TaskId task;
        Activity activity;
        int round;
        bool operator<(const Key& o) const {
            if (task != o.task) return task < o.task;
            if (activity != o.activity)
                return static_cast<int>(activity) < static_cast<int>(o.activity);
            return round < o.round;
        }
    };
    struct Node {
        MemberId member;
        double hours;
        std::set<MemberId> partners;
    };
    std::map<Key, std::vector<Node>> buckets;
    std::map<std::pair<MemberId, std::pair<TaskId, Activity>>, int> seen;
    for (const DayPlan& p : plans)
        for (const PlanEntry& e : p.entries) {
            const int round = seen[{e.member_id, {e.task_id, e.activity}}]++;
            buckets[{e.task_id, e.activity, round}].push_back(
                {e.member_id, e.hours, {e.partners.begin(), e.partners.end()}});
        }

    WorldPlan wp;
    for (auto& [key, nodes] : buckets) {
        std::sort(nodes.begin(), nodes.end(),
                  [](const Node& a, const Node& b) { return a.member < b.member; });
        const auto index_of = [&](MemberId id) -> int {
            for (std::size_t i = 0; i < nodes.size(); ++i)
                if (nodes[i].member == id) return static_cast<int>(i);
            return -1;
        };

        // Union mutual pairs.
        std::vector<int> parent(nodes.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (MemberId q : nodes[i].partners) {
                const int k = index_of(q);
                if (k < 0) continue;
                if (nodes[static_cast<std::size_t>(k)].partners.count(nodes[i].member) == 0)
                    continue; // unreciprocated
                parent[find(static_cast<int>(i))] = find(k);
            }
        }

        std::map<int, std::vector<const Node*>> components;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            components[find(static_cast<int>(i))].push_back(&nodes[i]);

        for (const auto& [root, group] : components) {
            WorldGroup g;
            g.task_id = key.task;
            // A one-person session is solo work regardless of what the plan
            // proposed: an unreciprocated partner listing falls back.
            g.activity = group.size() >= 2 ? key.activity : Activity::SoloWork;
            g.hours = 0.0;
            for (const Node* n : group) {
                g.participants.push_back(n->member);
                g.member_hours[n->member] = n->hours;
                g.hours = std::max(g.hours, n->hours);
            }
            std::sort(g.participants.begin(), g.participants.end());
            wp.groups.push_back(std::move(g));
        }
    }

    std::sort(wp.groups.begin(), wp.groups.end(), [](const WorldGroup& a, const WorldGroup& b) {
        if (a.task_id != b.task_id) return a.task_id < b.task_id;
        if (a.activity != b.activity)
            return static_cast<int>(a.activity) < static_cast<int>(b.activity);
        return a.participants.front() < b.participants.front();
    });
    return wp;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

Simulation::Simulation(const AppConfig& cfg, std::uint64_t seed, Brain& brain)
    : app_(cfg), seed_(seed), brain_(brain), rngs_(seed) {
    if (cfg.members.n_members < 1) throw InvalidConfig("organization must have members");
    if (cfg.world.hours_per_day < 1 || cfg.world.work_days_per_week < 1)
        throw InvalidConfig("work calendar must be non-degenerate");
    state_.config = cfg.to_sim_config(seed);
    validate_workload_balance(state_.config, cfg.world.hours_per_day,
                              cfg.world.work_days_per_week);
    state_.env = cfg.world;
}

void Simulation::append_event(EventKind kind, int day, json payload) {
    EventLogEntry e;
    e.week = state_.week;
    e.day = day;
    e.sequence_no = state_.next_sequence_no++;
    e.kind = kind;
    e.payload = std::move(payload);
    state_.events.push_back(std::move(e));
}

void Simulation::generate_organization() {
    const int n = state_.config.n_members;
    const auto cc =
        CompetenceConfig::from_levels(state_.config.mgmt_mean_level, state_.config.mgmt_std_level,
                                      state_.config.func_mean_level, state_.config.func_std_level);
    auto profiles = brain_.generate_members(state_.env, n, cc, rngs_.members);
    validate_members_response(profiles, n);
    state_.profiles = std::move(profiles);
    state_.states.assign(static_cast<std::size_t>(n), MemberState{});
    state_.trust = TrustMatrix(n);
    state_.credit_sum.assign(static_cast<std::size_t>(n), 0.0);
    state_.credit_count.assign(static_cast<std::size_t>(n), 0);
    state_.circle_count_sum.assign(static_cast<std::size_t>(n), 0.0);
    state_.workload_sum.assign(static_cast<std::size_t>(n), 0.0);
    state_.week_circle_count.assign(static_cast<std::size_t>(n), 0);
    state_.week_workload.assign(static_cast<std::size_t>(n), 0.0);

    for (const MemberProfile& p : state_.profiles)
        append_event(EventKind::MemberGenerated, 0,
                     json{{"profile", p}, {"template_version", brain_.template_version()}});
}

void Simulation::run_construction() {
    if (!state_.week_evaluated)
        throw std::logic_error("previous week not evaluated before construction");
    state_.week += 1;
    state_.day = 0;
    state_.week_evaluated = false;
    week_event_start_ = state_.events.size();

    const int n = state_.config.n_members;
    const int m = state_.config.tasks_per_week;

    auto specs = brain_.generate_tasks(state_.env, n, m, rngs_.tasks);
    validate_tasks_response(specs, m, n, state_.env.hours_per_day, state_.env.work_days_per_week);
    for (TaskSpec& s : specs) {
        s.task_id = state_.next_task_id++;
        s.deadline_week = state_.week;
        append_event(EventKind::TaskIssued, 0, json{{"spec", s}});
    }

    // Allocation is sequential so assignment counts reflect circles already
    // formed this week; the load penalty in the scoring then spreads people.
    auto assignment_counts = [&] {
        std::vector<int> q(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = state_.states[static_cast<std::size_t>(i)].assignment_count;
        return q;
    };

    std::vector<TaskState> issued;
    std::vector<std::vector<MemberId>> proposed;
    for (const TaskSpec& s : specs) {
        auto alloc = brain_.allocate_members(s, state_.profiles, state_.trust, assignment_counts());
        validate_allocation_response(alloc, s, n);
        for (MemberId id : alloc) state_.states[static_cast<std::size_t>(id)].assignment_count += 1;
        TaskState t;
        t.spec = s;
        t.allocation = alloc;
        issued.push_back(std::move(t));
        proposed.push_back(std::move(alloc));
    }

    // Coverage pass: weekly work is sized to the whole organization, so a
    // member left without any circle would strand capacity.  Unassigned
    // members join the thinnest circle that still has room, lowest id first.
    // When every circle is full, the member holding the most circles is
    // bumped from one of them to make room (they always keep at least one),
    // so nobody idles as long as total circle capacity covers the roster.
    std::vector<std::vector<MemberId>> coverage(issued.size());
    std::vector<std::vector<MemberId>> bumped(issued.size());
    auto count_of = [&](MemberId id) -> int& {
        return state_.states[static_cast<std::size_t>(id)].assignment_count;
    };
    // Joiners go round-robin over circles with room, starting from a circle
    // that rotates with the week, so repeat joiners circulate through the
    // organization instead of refreezing into one layout.
    std::size_t cursor =
        issued.empty() ? 0 : static_cast<std::size_t>(state_.week) % issued.size();
    for (int i = 0; i < n; ++i) {
        if (count_of(i) > 0) continue;
        int best = -1;
        for (std::size_t step = 0; step < issued.size(); ++step) {
            const std::size_t k = (cursor + step) % issued.size();
            if (static_cast<int>(issued[k].allocation.size()) >= issued[k].spec.max_members)
                continue;
            best = static_cast<int>(k);
            cursor = (k + 1) % issued.size();
            break;
        }
        if (best < 0) {
            // Every circle is at capacity: bump the member spread across the
            // most circles (ties: lowest member id, then earliest circle).
            // They always keep their other circles, and taking from the most
            // stretched person levels the load.
            int evict_circle = -1;
            MemberId evictee = -1;
            for (std::size_t k = 0; k < issued.size(); ++k) {
                for (MemberId j : issued[k].allocation) {
                    if (count_of(j) < 2) continue;
                    if (evictee < 0 || count_of(j) > count_of(evictee) ||
                        (count_of(j) == count_of(evictee) && j < evictee)) {
                        evictee = j;
                        evict_circle = static_cast<int>(k);
                    }
                }
            }
            if (evictee < 0) break; // capacity short of the roster; member stays idle
            auto& alloc = issued[static_cast<std::size_t>(evict_circle)].allocation;
            alloc.erase(std::find(alloc.begin(), alloc.end(), evictee));
            bumped[static_cast<std::size_t>(evict_circle)].push_back(evictee);
            count_of(evictee) -= 1;
            best = evict_circle;
        }
        issued[static_cast<std::size_t>(best)].allocation.push_back(i);
        coverage[static_cast<std::size_t>(best)].push_back(i);
        count_of(i) += 1;
    }
    for (std::size_t k = 0; k < issued.size(); ++k)
        append_event(EventKind::Allocated, 0,
                     json{{"task_id", issued[k].spec.task_id},
                          {"proposed", proposed[k]},
                          {"coverage_added", coverage[k]},
                          {"coverage_bumped", bumped[k]},
                          {"allocation", issued[k].allocation}});

    for (TaskState& t : issued) {
        auto adjusted = brain_.adjust_circle(t.spec, state_.trust, t.allocation);
        validate_adjustment_response(adjusted, t.spec, t.allocation);
        append_event(EventKind::CircleAdjusted, 0,
                     json{{"task_id", t.spec.task_id},
                          {"before", t.allocation},
                          {"after", adjusted}});
        for (MemberId id : t.allocation)
            if (std::find(adjusted.begin(), adjusted.end(), id) == adjusted.end())
                state_.states[static_cast<std::size_t>(id)].assignment_count -= 1;
        t.allocation = std::move(adjusted);
    }

    for (TaskState& t : issued) {
        auto roles = brain_.assign_roles(t.spec, t.allocation, state_.profiles);
        validate_roles_response(roles, t.allocation);
        t.roles = roles;
        append_event(EventKind::RolesAssigned, 0,
                     json{{"task_id", t.spec.task_id}, {"roles", roles}});
    }

    for (int i = 0; i < n; ++i) {
        state_.week_circle_count[static_cast<std::size_t>(i)] = 0;
        state_.week_workload[static_cast<std::size_t>(i)] = 0.0;
    }
    for (const TaskState& t : issued) {
        const double share = t.spec.workload_hours / static_cast<double>(t.allocation.size());
        for (MemberId id : t.allocation) {
            state_.week_circle_count[static_cast<std::size_t>(id)] += 1;
            state_.week_workload[static_cast<std::size_t>(id)] += share;
        }
    }
    for (int i = 0; i < n; ++i) {
        state_.circle_count_sum[static_cast<std::size_t>(i)] +=
            state_.week_circle_count[static_cast<std::size_t>(i)];
        state_.workload_sum[static_cast<std::size_t>(i)] +=
            state_.week_workload[static_cast<std::size_t>(i)];
    }

    for (TaskState& t : issued) state_.active_tasks.push_back(std::move(t));
}

std::vector<TaskState> Simulation::member_tasks_of(MemberId id) const {
    std::vector<TaskState> out;
    for (const TaskState& t : state_.active_tasks)
        if (std::find(t.allocation.begin(), t.allocation.end(), id) != t.allocation.end())
            out.push_back(t);
    return out;
}

void Simulation::run_day() {
    if (state_.week_evaluated) throw std::logic_error("run_day outside an active week");
    if (state_.day >= state_.env.work_days_per_week)
        throw std::logic_error("work week already exhausted");
    state_.day += 1;

    const int n = state_.config.n_members;
    std::vector<DayPlan> plans;
    plans.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const MemberProfile& profile = state_.profiles[static_cast<std::size_t>(i)];
        const auto tasks = member_tasks_of(i);
        std::vector<double> completions;
        completions.reserve(tasks.size());
        for (const TaskState& t : tasks) completions.push_back(completion_ratio(t));

        PlanContext ctx;
        ctx.week = state_.week;
        ctx.day = state_.day;
        ctx.hours_per_day = state_.env.hours_per_day;
        ctx.trust_row.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            ctx.trust_row[static_cast<std::size_t>(k)] = state_.trust.at(i, k);

        // Independent per-(member, week, day) stream: planning randomness
        // never depends on how much randomness other members consumed.
        RngStream sub(splitmix64(seed_ ^ fnv1a64("planning")) ^
                          splitmix64((static_cast<std::uint64_t>(state_.week) << 32) ^
                                     (static_cast<std::uint64_t>(state_.day) << 16) ^
                                     static_cast<std::uint64_t>(i)),
                      "plan_day");

        DayPlan plan = brain_.plan_day(profile, state_.states[static_cast<std::size_t>(i)], tasks,
                                       completions, ctx, sub);
        validate_plan_response(plan, profile, tasks, state_.env.hours_per_day);
        append_event(EventKind::PlanMade, state_.day,
                     json{{"plan", plan}, {"template_version", brain_.template_version()}});
        plans.push_back(std::move(plan));
    }

    WorldPlan wp = consolidate_plans(plans);
    append_event(EventKind::PlansConsolidated, state_.day,
                 json{{"groups", [&] {
                           json arr = json::array();
                           for (const WorldGroup& g : wp.groups)
                               arr.push_back(json{{"task_id", g.task_id},
                                                  {"activity", to_string(g.activity)},
                                                  {"participants", g.participants},
                                                  {"hours", g.hours},
                                                  {"member_hours", id_map_to_json(g.member_hours)}});
                           return arr;
                       }()}});
    execute_world_plan(wp);
}

void Simulation::execute_world_plan(const WorldPlan& wp) {
    const int n = state_.config.n_members;
    std::vector<double> day_hours(static_cast<std::size_t>(n), 0.0);
    std::vector<int> day_decisions(static_cast<std::size_t>(n), 0);

    for (const WorldGroup& g : wp.groups) {
        auto it = std::find_if(state_.active_tasks.begin(), state_.active_tasks.end(),
                               [&](const TaskState& t) { return t.spec.task_id == g.task_id; });
        if (it == state_.active_tasks.end())
            throw std::logic_error("world plan references unknown task");
        TaskState& t = *it;

        // A joint session advances the task once: the session length, split
        // across participants by their own committed hours, capped so logged
        // progress never exceeds the task workload.
        double committed = 0.0;
        for (const auto& [id, h] : g.member_hours) committed += h;
        const double headroom = std::max(0.0, t.spec.workload_hours - t.total_logged());
        const double progress = std::min(g.hours, headroom);
        json progress_json = json::object();
        for (const auto& [id, h] : g.member_hours) {
            const double share = committed > 0 ? progress * h / committed : 0.0;
            t.hours_logged[id] += share;
            progress_json[std::to_string(id)] = share;
        }

        const MemberId facilitator = t.roles.facilitator;
        if (facilitator >= 0) day_decisions[static_cast<std::size_t>(facilitator)] += 1;
        if (g.activity == Activity::TacticalMeeting)
            for (MemberId id : g.participants) day_decisions[static_cast<std::size_t>(id)] += 1;

        for (MemberId id : g.participants) {
            const double h = g.member_hours.at(id);
            day_hours[static_cast<std::size_t>(id)] += h;
            WorkRecord rec;
            rec.day = state_.day;
            rec.task_id = g.task_id;
            rec.hours = h;
            for (MemberId p : g.participants)
                if (p != id) rec.partners.push_back(p);
            rec.decision_count = (g.activity == Activity::TacticalMeeting ? 1 : 0) +
                                 (id == facilitator ? 1 : 0);
            rec.note = to_string(g.activity);
            state_.states[static_cast<std::size_t>(id)].work_records.push_back(std::move(rec));
        }

        append_event(g.activity == Activity::TacticalMeeting ? EventKind::MeetingHeld
                                                             : EventKind::WorkExecuted,
                     state_.day,
                     json{{"task_id", g.task_id},
                          {"activity", to_string(g.activity)},
                          {"participants", g.participants},
                          {"hours", g.hours},
                          {"member_hours", id_map_to_json(g.member_hours)},
                          {"progress", std::move(progress_json)}});
    }

    for (int i = 0; i < n; ++i) {
        MemberState& ms = state_.states[static_cast<std::size_t>(i)];
        const MemberProfile& p = state_.profiles[static_cast<std::size_t>(i)];
        const double before = ms.stress;
        ms.stress = stress_step(before, day_hours[static_cast<std::size_t>(i)],
                                day_decisions[static_cast<std::size_t>(i)],
                                p.management_competence, p.functional_competence,
                                state_.config.dynamics);
        append_event(EventKind::StressUpdated, state_.day,
                     json{{"member_id", i},
                          {"worked_hours", day_hours[static_cast<std::size_t>(i)]},
                          {"decisions", day_decisions[static_cast<std::size_t>(i)]},
                          {"stress_before", before},
                          {"stress", ms.stress}});
    }
}

void Simulation::run_evaluation() {
    if (state_.week_evaluated) return; // settling a settled week is a no-op
    const int n = state_.config.n_members;
    const int eval_day = state_.env.work_days_per_week + 1;

    std::vector<TaskState> due;
    for (const TaskState& t : state_.active_tasks)
        if (t.spec.deadline_week == state_.week) due.push_back(t);

    for (TaskState& t : due) {
        t.completion = completion_ratio(t);
        for (MemberId id : t.allocation) t.per_member_credit[id] = t.completion;
        append_event(EventKind::TaskSettled, eval_day, json{{"task", t}});
    }

    for (int i = 0; i < n; ++i) {
        std::vector<double> credits;
        for (const TaskState& t : due)
            if (auto it = t.per_member_credit.find(i); it != t.per_member_credit.end())
                credits.push_back(it->second);
        MemberState& ms = state_.states[static_cast<std::size_t>(i)];
        if (auto d = member_evaluation(credits)) {
            ms.evaluation = *d;
            state_.credit_sum[static_cast<std::size_t>(i)] +=
                std::accumulate(credits.begin(), credits.end(), 0.0);
            state_.credit_count[static_cast<std::size_t>(i)] += static_cast<int>(credits.size());
        }
        append_event(EventKind::MemberEvaluated, eval_day,
                     json{{"member_id", i},
                          {"evaluation", ms.evaluation},
                          {"settled_count", credits.size()}});
    }

    for (const TaskState& t : due)
        apply_trust_update(state_.trust, t, state_.config.dynamics);
    append_event(EventKind::TrustUpdated, eval_day, json{{"trust", state_.trust}});

    for (int i = 0; i < n; ++i) {
        MemberState& ms = state_.states[static_cast<std::size_t>(i)];
        MemoryDigest digest = brain_.summarize_cycle(state_.profiles[static_cast<std::size_t>(i)],
                                                     ms.work_records, ms.evaluation);
        ms.memory_digest = std::move(digest);
        ms.work_records.clear();
        append_event(EventKind::CycleSummarized, eval_day,
                     json{{"member_id", i},
                          {"digest", ms.memory_digest},
                          {"template_version", brain_.template_version()}});
    }

    // Settled circles disband.
    for (const TaskState& t : due)
        for (MemberId id : t.allocation)
            state_.states[static_cast<std::size_t>(id)].assignment_count -= 1;
    std::erase_if(state_.active_tasks, [&](const TaskState& t) {
        return t.spec.deadline_week == state_.week;
    });
    state_.week_evaluated = true;

    // Weekly snapshot, assembled from the settled view of this week.
    WeekSnapshot snap;
    snap.week = state_.week;
    snap.trust = state_.trust;
    double stress_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const MemberState& ms = state_.states[static_cast<std::size_t>(i)];
        const MemberProfile& p = state_.profiles[static_cast<std::size_t>(i)];
        MemberSnapshotRow row;
        row.member_id = i;
        row.stress = ms.stress;
        row.evaluation = ms.evaluation;
        row.circle_count = state_.week_circle_count[static_cast<std::size_t>(i)];
        row.assigned_workload = state_.week_workload[static_cast<std::size_t>(i)];
        row.completion_level =
            state_.credit_count[static_cast<std::size_t>(i)] > 0
                ? state_.credit_sum[static_cast<std::size_t>(i)] /
                      state_.credit_count[static_cast<std::size_t>(i)]
                : 0.5;
        row.avg_circle_count =
            state_.circle_count_sum[static_cast<std::size_t>(i)] / state_.week;
        row.avg_workload = state_.workload_sum[static_cast<std::size_t>(i)] / state_.week;
        row.management_competence = p.management_competence;
        row.functional_competence = p.functional_competence;
        stress_sum += ms.stress;
        snap.members.push_back(std::move(row));
    }
    snap.org.mean_stress = n > 0 ? stress_sum / n : 0.0;
    double completion_sum = 0.0;
    for (const TaskState& t : due) {
        completion_sum += t.completion;
        TaskSnapshotRow tr;
        tr.task_id = t.spec.task_id;
        tr.completion = t.completion;
        tr.workload_hours = t.spec.workload_hours;
        tr.circle_size = static_cast<int>(t.allocation.size());
        snap.tasks.push_back(std::move(tr));
    }
    snap.org.mean_completion = due.empty() ? 0.0 : completion_sum / static_cast<double>(due.size());
    snap.org.circles = static_cast<int>(due.size());
    double mgmt_sum = 0.0, func_sum = 0.0;
    for (const MemberProfile& p : state_.profiles) {
        mgmt_sum += p.management_competence;
        func_sum += p.functional_competence;
    }
    snap.org.mgmt_mean = mgmt_sum / n;
    snap.org.func_mean = func_sum / n;
    double mgmt_var = 0.0, func_var = 0.0;
    for (const MemberProfile& p : state_.profiles) {
        mgmt_var += (p.management_competence - snap.org.mgmt_mean) *
                    (p.management_competence - snap.org.mgmt_mean);
        func_var += (p.functional_competence - snap.org.func_mean) *
                    (p.functional_competence - snap.org.func_mean);
    }
    snap.org.mgmt_std = std::sqrt(mgmt_var / n);
    snap.org.func_std = std::sqrt(func_var / n);
    snapshots_.push_back(snap);

    if (week_sink) {
        std::vector<EventLogEntry> week_events(state_.events.begin() +
                                                   static_cast<std::ptrdiff_t>(week_event_start_),
                                               state_.events.end());
        week_sink(state_.week, week_events, snap);
    }
}

WeekSnapshot Simulation::take_snapshot() const {
    return snapshots_.empty() ? WeekSnapshot{} : snapshots_.back();
}

RunArtifact Simulation::run() {
    RunArtifact artifact;
    artifact.config = json{{"app", app_}, {"seed", seed_}};
    try {
        generate_organization();
        for (int w = 0; w < state_.config.weeks; ++w) {
            run_construction();
            for (int d = 0; d < state_.env.work_days_per_week; ++d) run_day();
            run_evaluation();
        }
    } catch (const BackendError& e) {
        artifact.error = to_string(e.kind()) + ": " + e.what();
    }
    artifact.events = state_.events;
    artifact.snapshots = snapshots_;
    return artifact;
}

} // namespace holosim
