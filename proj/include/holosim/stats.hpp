#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "holosim/engine.hpp"

namespace holosim {

class RankDeficient : public std::runtime_error {
public:
    explicit RankDeficient(const std::string& what) : std::runtime_error(what) {}
};

class TooFewRows : public std::runtime_error {
public:
    explicit TooFewRows(const std::string& what) : std::runtime_error(what) {}
};

// A prepared regression: one outcome vector plus a predictor matrix whose
// first column is the intercept.
struct Design {
    std::string name;                      // family, e.g. "org" or "individual"
    std::string outcome_name;              // e.g. "avg_stress"
    std::vector<std::string> column_names; // length p, first entry "intercept"
    std::vector<double> y;                 // length n
    std::vector<std::vector<double>> rows; // n rows of length p

    int n() const { return static_cast<int>(y.size()); }
    int p() const { return static_cast<int>(column_names.size()); }
};

struct FitResult {
    std::string design_name;
    std::string outcome_name;
    std::vector<std::string> column_names;
    std::vector<double> beta;
    std::vector<double> se;
    std::vector<double> tstat;
    std::vector<double> pvalue; // two-sided, t distribution with n-p df
    std::vector<double> residuals;
    double r_squared = 0.0;
    double sigma2 = 0.0;
    int n = 0;
    int p = 0;
};

// "***" below 0.001, "**" below 0.05, "*" below 0.1, else "".
std::string significance_stars(double p_value);

// Two-sided tail probability of Student's t with the given df.
double student_t_two_sided_p(double t, double df);

FitResult ols_fit(const Design& design);

enum class PredictorVariant {
    Competences,    // management and functional competence separately
    MeanDifference, // competence mean and absolute difference
};

// One Design per organization-level outcome (average stress, completion,
// average circle number) against the realized competence moments.
std::vector<Design> build_org_design(const std::vector<RunArtifact>& runs);

// One Design per member-level outcome, pooled across runs.  With
// include_network the seven co-participation metrics join as extra outcomes.
std::vector<Design> build_individual_design(const std::vector<RunArtifact>& runs,
                                            bool include_network,
                                            PredictorVariant variant =
                                                PredictorVariant::Competences);

// Aligned text table: predictor rows (coefficient with stars over standard
// error), one column per fitted outcome; all fits must share predictors.
std::string render_table_text(const std::string& title, const std::vector<FitResult>& fits);

// Long-format CSV: one row per (outcome, term).
std::string render_table_csv(const std::vector<FitResult>& fits);

} // namespace holosim
