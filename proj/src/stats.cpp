#include "holosim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "holosim/netanalysis.hpp"

namespace holosim {

std::string significance_stars(double p_value) {
    if (p_value < 0.001) return "***";
    if (p_value < 0.05) return "**";
    if (p_value < 0.1) return "*";
    return "";
}

double student_t_two_sided_p(double t, double df) {
    if (!std::isfinite(t)) return 0.0;
    const boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

FitResult ols_fit(const Design& design) {
    const int n = design.n();
    const int p = design.p();
    if (p < 1) throw RankDeficient(design.outcome_name + ": empty predictor set");
    if (n <= p)
        throw TooFewRows(design.outcome_name + ": " + std::to_string(n) + " rows for " +
                         std::to_string(p) + " coefficients");
    for (const auto& row : design.rows)
        if (static_cast<int>(row.size()) != p)
            throw std::invalid_argument(design.outcome_name + ": ragged design matrix");
    if (static_cast<int>(design.rows.size()) != n)
        throw std::invalid_argument(design.outcome_name + ": row/outcome count mismatch");

    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        y(i) = design.y[static_cast<std::size_t>(i)];
        for (int j = 0; j < p; ++j)
            X(i, j) = design.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> probe(X);
    if (probe.rank() < p)
        throw RankDeficient(design.outcome_name + ": design matrix has rank " +
                            std::to_string(probe.rank()) + " < " + std::to_string(p));

    // Householder QR for the solve; (XᵀX)⁻¹ = R⁻¹R⁻ᵀ for the covariance.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd resid = y - X * beta;
    const double rss = resid.squaredNorm();
    const double sigma2 = rss / static_cast<double>(n - p);

    const Eigen::MatrixXd r_factor =
        qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r_factor.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd cov = sigma2 * (r_inv * r_inv.transpose());

    const double tss = (y.array() - y.mean()).matrix().squaredNorm();

    FitResult fit;
    fit.design_name = design.name;
    fit.outcome_name = design.outcome_name;
    fit.column_names = design.column_names;
    fit.n = n;
    fit.p = p;
    fit.sigma2 = sigma2;
    fit.r_squared = tss > 0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 0.0;
    fit.residuals.assign(resid.data(), resid.data() + n);
    for (int j = 0; j < p; ++j) {
        const double b = beta(j);
        const double s = std::sqrt(std::max(0.0, cov(j, j)));
        fit.beta.push_back(b);
        fit.se.push_back(s);
        double t;
        if (s > 0) {
            t = b / s;
        } else {
            // Exact fit: the slope is either identically zero or infinitely
            // well determined.
            t = b == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), b);
        }
        fit.tstat.push_back(t);
        fit.pvalue.push_back(t == 0 && s == 0 ? 1.0
                                              : student_t_two_sided_p(t, static_cast<double>(n - p)));
    }
    return fit;
}

// ---------------------------------------------------------------------------
// Design builders
// ---------------------------------------------------------------------------

namespace {

std::vector<const RunArtifact*> completed_runs(const std::vector<RunArtifact>& runs) {
    std::vector<const RunArtifact*> out;
    for (const RunArtifact& r : runs)
        if (!r.snapshots.empty()) out.push_back(&r);
    return out;
}

} // namespace

std::vector<Design> build_org_design(const std::vector<RunArtifact>& runs) {
    const auto usable = completed_runs(runs);
    if (usable.size() < 6)
        throw TooFewRows("organization design needs at least 6 completed runs, have " +
                         std::to_string(usable.size()));

    const std::vector<std::string> columns = {"intercept", "mgmt_mean", "func_mean", "mgmt_std",
                                              "func_std"};
    const std::vector<std::string> outcomes = {"avg_stress", "completion", "avg_circle_number"};
    std::vector<Design> designs(outcomes.size());
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        designs[k].name = "org";
        designs[k].outcome_name = outcomes[k];
        designs[k].column_names = columns;
    }

    for (const RunArtifact* run : usable) {
        const WeekSnapshot& last = run->snapshots.back();
        const std::vector<double> row = {1.0, last.org.mgmt_mean, last.org.func_mean,
                                         last.org.mgmt_std, last.org.func_std};

        // Completion pooled over every settlement in the run, not just the
        // final week's batch.
        double completion_sum = 0.0;
        int settled = 0;
        for (const WeekSnapshot& s : run->snapshots) {
            completion_sum += s.org.mean_completion * s.org.circles;
            settled += s.org.circles;
        }
        const double completion = settled > 0 ? completion_sum / settled : 0.0;

        double circle_sum = 0.0;
        for (const MemberSnapshotRow& m : last.members) circle_sum += m.avg_circle_count;
        const double avg_circles =
            last.members.empty() ? 0.0 : circle_sum / static_cast<double>(last.members.size());

        const double values[3] = {last.org.mean_stress, completion, avg_circles};
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            designs[k].y.push_back(values[k]);
            designs[k].rows.push_back(row);
        }
    }
    return designs;
}

std::vector<Design> build_individual_design(const std::vector<RunArtifact>& runs,
                                            bool include_network, PredictorVariant variant) {
    const auto usable = completed_runs(runs);

    std::vector<std::string> columns;
    if (variant == PredictorVariant::Competences)
        columns = {"intercept", "management_competence", "functional_competence"};
    else
        columns = {"intercept", "competence_mean", "competence_difference"};

    std::vector<std::string> outcomes = {"stress", "completion_level", "avg_circle_count",
                                         "avg_workload"};
    if (include_network) {
        const char* net[] = {"closeness", "betweenness", "eigenvector", "clustering",
                             "authority",  "hub",        "pagerank"};
        outcomes.insert(outcomes.end(), std::begin(net), std::end(net));
    }

    std::vector<Design> designs(outcomes.size());
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        designs[k].name = "individual";
        designs[k].outcome_name = outcomes[k];
        designs[k].column_names = columns;
    }

    for (const RunArtifact* run : usable) {
        const WeekSnapshot& last = run->snapshots.back();
        std::map<MemberId, NodeMetrics> metrics;
        if (include_network) {
            const SocialGraph g = build_graph(run->events, 1, last.week);
            metrics = compute_metrics(g);
        }
        for (const MemberSnapshotRow& m : last.members) {
            std::vector<double> row;
            if (variant == PredictorVariant::Competences)
                row = {1.0, m.management_competence, m.functional_competence};
            else
                row = {1.0, (m.management_competence + m.functional_competence) / 2.0,
                       std::abs(m.management_competence - m.functional_competence)};

            std::vector<double> values = {m.stress, m.completion_level, m.avg_circle_count,
                                          m.avg_workload};
            if (include_network) {
                const NodeMetrics& nm = metrics.at(m.member_id);
                const double net[] = {nm.closeness, nm.betweenness, nm.eigenvector, nm.clustering,
                                      nm.authority,  nm.hub,        nm.pagerank};
                values.insert(values.end(), std::begin(net), std::end(net));
            }
            for (std::size_t k = 0; k < outcomes.size(); ++k) {
                designs[k].y.push_back(values[k]);
                designs[k].rows.push_back(row);
            }
        }
    }

    const int min_rows = static_cast<int>(columns.size()) + 2;
    if (designs.empty() || designs.front().n() < min_rows)
        throw TooFewRows("individual design needs at least " + std::to_string(min_rows) +
                         " member rows, have " +
                         (designs.empty() ? std::string("0")
                                          : std::to_string(designs.front().n())));
    return designs;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

} // namespace

std::string render_table_text(const std::string& title, const std::vector<FitResult>& fits) {
    if (fits.empty()) return title + "\n  (no fits)\n";
    const auto& columns = fits.front().column_names;
    for (const FitResult& f : fits)
        if (f.column_names != columns)
            throw std::invalid_argument("table mixes fits with different predictors");

    constexpr int kTermWidth = 26;
    constexpr int kCellWidth = 18;
    std::ostringstream out;
    out << title << '\n';

    auto pad = [](const std::string& s, int width) {
        return s.size() >= static_cast<std::size_t>(width)
                   ? s + ' '
                   : s + std::string(static_cast<std::size_t>(width) - s.size(), ' ');
    };

    out << pad("", kTermWidth);
    for (const FitResult& f : fits) out << pad(f.outcome_name, kCellWidth);
    out << '\n';
    out << std::string(static_cast<std::size_t>(kTermWidth) +
                           fits.size() * static_cast<std::size_t>(kCellWidth),
                       '-')
        << '\n';

    for (std::size_t j = 0; j < columns.size(); ++j) {
        out << pad(columns[j], kTermWidth);
        for (const FitResult& f : fits)
            out << pad(fmt("%.4f", f.beta[j]) + significance_stars(f.pvalue[j]), kCellWidth);
        out << '\n';
        out << pad("", kTermWidth);
        for (const FitResult& f : fits) out << pad("(" + fmt("%.4f", f.se[j]) + ")", kCellWidth);
        out << '\n';
    }

    out << pad("N", kTermWidth);
    for (const FitResult& f : fits) out << pad(std::to_string(f.n), kCellWidth);
    out << '\n';
    out << pad("R2", kTermWidth);
    for (const FitResult& f : fits) out << pad(fmt("%.4f", f.r_squared), kCellWidth);
    out << '\n';
    out << "Significance: * p<0.1, ** p<0.05, *** p<0.001\n";
    return out.str();
}

std::string render_table_csv(const std::vector<FitResult>& fits) {
    std::ostringstream out;
    out << "design,outcome,term,coefficient,std_error,t_stat,p_value,stars,n,r_squared\n";
    for (const FitResult& f : fits) {
        for (std::size_t j = 0; j < f.column_names.size(); ++j) {
            out << f.design_name << ',' << f.outcome_name << ',' << f.column_names[j] << ','
                << fmt("%.10g", f.beta[j]) << ',' << fmt("%.10g", f.se[j]) << ','
                << fmt("%.10g", f.tstat[j]) << ',' << fmt("%.10g", f.pvalue[j]) << ','
                << significance_stars(f.pvalue[j]) << ',' << f.n << ','
                << fmt("%.10g", f.r_squared) << '\n';
        }
    }
    return out.str();
}

} // namespace holosim
