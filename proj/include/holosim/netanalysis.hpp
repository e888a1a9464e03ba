#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "holosim/domain.hpp"

namespace holosim {

class EmptyLog : public std::runtime_error {
public:
    explicit EmptyLog(const std::string& what) : std::runtime_error(what) {}
};

class ConvergenceFailure : public std::runtime_error {
public:
    ConvergenceFailure(const std::string& what, long iterations)
        : std::runtime_error(what + " after " + std::to_string(iterations) + " iterations"),
          iterations_(iterations) {}
    long iterations() const { return iterations_; }

private:
    long iterations_;
};

// Undirected weighted co-participation graph.  Nodes are member ids; edges
// carry strictly positive accumulated weights; no self-loops.
class SocialGraph {
public:
    struct Edge {
        int a, b; // node indices with a < b
        double weight;
    };

    SocialGraph() = default;
    explicit SocialGraph(std::vector<MemberId> nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<MemberId>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const; // ascending (a, b), cached
    MemberId node_id(int index) const { return nodes_[static_cast<std::size_t>(index)]; }
    int index_of(MemberId id) const;

    double weight(int i, int j) const;
    void add_weight(MemberId a, MemberId b, double w); // accumulates; a != b

    // Neighbor list of (node index, weight), ascending by index.
    std::vector<std::pair<int, double>> neighbors(int i) const;

    double total_weight() const; // sum over undirected edges
    double strength(int i) const; // weighted degree

    std::string built_from; // run id + week range, informational
    int week_from = 0;
    int week_to = 0;

private:
    std::vector<MemberId> nodes_;
    std::map<std::pair<int, int>, double> weight_map_; // key (min,max)
    mutable std::vector<Edge> edges_;
    mutable bool edges_dirty_ = false;
};

struct NodeMetrics {
    double closeness = 0.0;
    double betweenness = 0.0;
    double eigenvector = 0.0;
    double clustering = 0.0;
    double authority = 0.0;
    double hub = 0.0;
    double pagerank = 0.0;
    int community = -1;
};

struct CommunityResult {
    std::map<MemberId, int> labels; // dense labels 0..k-1, ordered by smallest member id
    double modularity = 0.0;
};

// Build the graph from a run's event log: every settled task adds weight
// WT_j / |a_j'| between each co-member pair; nodes come from the generated
// member set so never-allocated members appear as isolates.
SocialGraph build_graph(const std::vector<EventLogEntry>& events, int week_from, int week_to);

// The seven weighted metrics of one graph.  Community labels are filled in
// by detect_communities; compute_metrics leaves them at -1.
std::map<MemberId, NodeMetrics> compute_metrics(const SocialGraph& g);

CommunityResult detect_communities(const SocialGraph& g);

// Modularity of an arbitrary partition, shared by the detector and tests.
double partition_modularity(const SocialGraph& g, const std::vector<int>& label_of_index);

// Individual metric kernels (exposed for oracle tests).
std::vector<double> harmonic_closeness(const SocialGraph& g);
std::vector<double> betweenness_centrality(const SocialGraph& g);
std::vector<double> eigenvector_centrality(const SocialGraph& g);
std::vector<double> clustering_coefficients(const SocialGraph& g);
std::vector<double> pagerank(const SocialGraph& g, double damping = 0.85);

// Report exports.
void write_nodes_csv(const std::filesystem::path& path,
                     const std::map<MemberId, NodeMetrics>& metrics);
void write_edges_csv(const std::filesystem::path& path, const SocialGraph& g);
void write_dot(const std::filesystem::path& path, const SocialGraph& g,
               const std::map<MemberId, NodeMetrics>& metrics);

} // namespace holosim
