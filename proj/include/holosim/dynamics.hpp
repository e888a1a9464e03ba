#pragma once

#include <optional>
#include <span>

#include "holosim/domain.hpp"

namespace holosim {

// Stress sensitivity from the competence pair: less competent members react
// more strongly to the same load, floored so nobody is fully immune.
double stress_sensitivity(double management_competence, double functional_competence,
                          const DynamicsParams& p);

// One day of stress evolution given that day's worked hours and decisions.
// Recovery applies multiplicatively before new load accrues; the interaction
// term makes simultaneous heavy work and heavy coordination superlinear.
double stress_step(double stress, double worked_hours, int decisions,
                   double management_competence, double functional_competence,
                   const DynamicsParams& p);

// C_j: fraction of the task workload covered by logged hours, clamped to 1.
double completion_ratio(const TaskState& t);

// D_i: plain average of the member's per-task credits for the cycle.
// No settled tasks means no evaluation this week (carry the previous one).
std::optional<double> member_evaluation(std::span<const double> credits);

// Pairwise trust nudge for one settled task: every unordered pair in the
// final allocation moves toward (completion - threshold) scaled by the rate,
// clamped to [0,1].
void apply_trust_update(TrustMatrix& h, const TaskState& settled, const DynamicsParams& p);

} // namespace holosim
