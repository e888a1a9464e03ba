#include "holosim/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace holosim {

double stress_sensitivity(double management_competence, double functional_competence,
                          const DynamicsParams& p) {
    const double raw = (10.0 - management_competence - functional_competence) / 8.0;
    return std::max(p.sensitivity_floor, raw);
}

double stress_step(double stress, double worked_hours, int decisions,
                   double management_competence, double functional_competence,
                   const DynamicsParams& p) {
    const double sens = stress_sensitivity(management_competence, functional_competence, p);
    const double load = p.w_hours * worked_hours + p.w_decisions * decisions +
                        p.w_hours * p.w_decisions * worked_hours * decisions;
    const double next = stress * (1.0 - p.recovery) + sens * load;
    return std::max(0.0, next);
}

double completion_ratio(const TaskState& t) {
    if (t.spec.workload_hours <= 0) return 0.0;
    return std::min(1.0, t.total_logged() / t.spec.workload_hours);
}

std::optional<double> member_evaluation(std::span<const double> credits) {
    if (credits.empty()) return std::nullopt;
    double sum = 0.0;
    for (double c : credits) sum += c;
    return sum / static_cast<double>(credits.size());
}

void apply_trust_update(TrustMatrix& h, const TaskState& settled, const DynamicsParams& p) {
    const double delta = p.trust_rate * (settled.completion - p.trust_threshold);
    const auto& a = settled.allocation;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const int x = static_cast<int>(a[i]);
            const int y = static_cast<int>(a[j]);
            const double next = std::clamp(h.at(x, y) + delta, 0.0, 1.0);
            h.set(x, y, next);
        }
    }
}

} // namespace holosim
