#include "holosim/report.hpp"

#include <sstream>

#include "holosim/artifact_io.hpp"
#include "holosim/netanalysis.hpp"

namespace holosim {

namespace {

// Pooled regressions compare organizations, so a lone run only yields the
// graph exports.
constexpr int kMinRunsForRegressions = 2;

struct TableSpec {
    std::string key;   // file stem, e.g. "table2_individual"
    std::string title; // heading of the text rendering
};

void write_text(const std::filesystem::path& path, const std::string& content) {
    atomic_write(path, content);
}

} // namespace

std::vector<RunArtifact> load_runs_from_manifest(const std::filesystem::path& manifest_path) {
    const Manifest manifest = load_manifest(manifest_path);
    const std::filesystem::path base = manifest_path.parent_path();
    std::vector<RunArtifact> runs;
    for (const ManifestEntry& e : manifest.entries) {
        if (e.status != "complete") continue;
        runs.push_back(read_run_artifact(base / e.run_id));
    }
    return runs;
}

std::string sign_of(const FitResult& fit, std::size_t term) {
    if (fit.pvalue.at(term) >= 0.05) return "ns";
    return fit.beta.at(term) > 0 ? "+" : "-";
}

AnalyzeResult analyze(const AnalyzeOptions& opts, const GridLogger& log) {
    AnalyzeResult result;
    std::filesystem::create_directories(opts.out_dir);

    const Manifest manifest = load_manifest(opts.manifest_path);
    result.runs_total = static_cast<int>(manifest.entries.size());

    const std::vector<RunArtifact> runs = load_runs_from_manifest(opts.manifest_path);
    result.runs_complete = static_cast<int>(runs.size());
    if (runs.empty()) throw TooFewRows("manifest lists no complete runs");

    // -- per-run graph exports --------------------------------------------
    const Manifest* m = &manifest;
    std::size_t run_index = 0;
    for (const ManifestEntry& e : m->entries) {
        if (e.status != "complete") continue;
        const RunArtifact& run = runs.at(run_index++);
        const std::filesystem::path dir = opts.out_dir / "graphs" / e.run_id;
        std::filesystem::create_directories(dir);
        const int last_week = run.snapshots.empty() ? 0 : run.snapshots.back().week;
        const SocialGraph g = build_graph(run.events, 1, last_week);
        std::map<MemberId, NodeMetrics> metrics = compute_metrics(g);
        const CommunityResult communities = detect_communities(g);
        for (auto& [id, nm] : metrics) nm.community = communities.labels.at(id);
        write_nodes_csv(dir / "nodes.csv", metrics);
        write_edges_csv(dir / "edges.csv", g);
        write_dot(dir / "graph.dot", g, metrics);
        if (log) log("[analyze] graph exports for " + e.run_id);
    }

    // -- regression tables -------------------------------------------------
    struct PendingTable {
        TableSpec spec;
        std::vector<Design> designs;
    };
    std::vector<PendingTable> tables;

    const auto guard = [&](const TableSpec& spec, auto build) {
        try {
            if (result.runs_complete < kMinRunsForRegressions)
                throw TooFewRows("pooled regressions need at least " +
                                 std::to_string(kMinRunsForRegressions) + " completed runs, have " +
                                 std::to_string(result.runs_complete));
            tables.push_back(PendingTable{spec, build()});
        } catch (const TooFewRows& e) {
            result.skipped_tables.push_back(spec.key + ": " + e.what());
        }
    };

    guard({"table1_org", "Organization outcomes on competence composition"},
          [&] { return build_org_design(runs); });
    guard({"table2_individual", "Member outcomes on own competences"},
          [&] { return build_individual_design(runs, false, PredictorVariant::Competences); });
    guard({"table3_individual_meandiff", "Member outcomes on competence mean and difference"},
          [&] { return build_individual_design(runs, false, PredictorVariant::MeanDifference); });
    guard({"table4_network", "Network position on own competences"},
          [&] { return build_individual_design(runs, true, PredictorVariant::Competences); });
    guard({"table5_network_meandiff", "Network position on competence mean and difference"},
          [&] { return build_individual_design(runs, true, PredictorVariant::MeanDifference); });

    std::ostringstream signs_csv;
    std::ostringstream signs_txt;
    signs_csv << "table,outcome,term,sign,coefficient,p_value\n";

    for (const PendingTable& table : tables) {
        std::vector<FitResult> fits;
        bool skipped = false;
        for (const Design& d : table.designs) {
            // Tables 4/5 fit only the seven network outcomes.
            if (table.spec.key.find("network") != std::string::npos &&
                (d.outcome_name == "stress" || d.outcome_name == "completion_level" ||
                 d.outcome_name == "avg_circle_count" || d.outcome_name == "avg_workload"))
                continue;
            try {
                fits.push_back(ols_fit(d));
            } catch (const std::exception& e) {
                result.skipped_tables.push_back(table.spec.key + "/" + d.outcome_name + ": " +
                                                e.what());
                skipped = true;
            }
        }
        if (fits.empty()) {
            if (!skipped)
                result.skipped_tables.push_back(table.spec.key + ": no outcomes to fit");
            continue;
        }

        write_text(opts.out_dir / (table.spec.key + ".txt"),
                   render_table_text(table.spec.title, fits));
        write_text(opts.out_dir / (table.spec.key + ".csv"), render_table_csv(fits));
        result.table_files.push_back(table.spec.key + ".txt");
        result.table_files.push_back(table.spec.key + ".csv");
        if (log) log("[analyze] wrote " + table.spec.key);

        for (const FitResult& fit : fits) {
            for (std::size_t j = 1; j < fit.column_names.size(); ++j) {
                const std::string sign = sign_of(fit, j);
                const std::string key =
                    table.spec.key + "/" + fit.outcome_name + "/" + fit.column_names[j];
                result.signs[key] = sign;
                signs_csv << table.spec.key << ',' << fit.outcome_name << ','
                          << fit.column_names[j] << ',' << sign << ',' << fit.beta[j] << ','
                          << fit.pvalue[j] << '\n';
                signs_txt << key << " -> " << sign << '\n';
            }
        }
    }

    for (const std::string& note : result.skipped_tables)
        signs_txt << "insufficient: " << note << '\n';

    write_text(opts.out_dir / "sign_summary.csv", signs_csv.str());
    write_text(opts.out_dir / "sign_summary.txt", signs_txt.str());
    result.table_files.push_back("sign_summary.csv");
    result.table_files.push_back("sign_summary.txt");

    json summary = {{"runs_total", result.runs_total},
                    {"runs_complete", result.runs_complete},
                    {"tables", result.table_files},
                    {"insufficient", result.skipped_tables}};
    write_text(opts.out_dir / "analysis_summary.json", summary.dump(2) + "\n");

    return result;
}

} // namespace holosim
