#include "holosim/netanalysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>

namespace holosim {

namespace {
constexpr double kDistanceTie = 1e-12; // relative tolerance for equal path lengths
constexpr double kPowerTol = 1e-10;
constexpr double kPageRankTol = 1e-13; // L1 step difference
constexpr long kPowerMaxIters = 100000;
} // namespace

// ---------------------------------------------------------------------------
// SocialGraph
// ---------------------------------------------------------------------------

SocialGraph::SocialGraph(std::vector<MemberId> nodes) : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
}

int SocialGraph::index_of(MemberId id) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id) return -1;
    return static_cast<int>(it - nodes_.begin());
}

double SocialGraph::weight(int i, int j) const {
    if (i == j) return 0.0;
    const auto it = weight_map_.find({std::min(i, j), std::max(i, j)});
    return it == weight_map_.end() ? 0.0 : it->second;
}

void SocialGraph::add_weight(MemberId a, MemberId b, double w) {
    if (a == b) throw std::logic_error("self-loop in social graph");
    if (w <= 0) throw std::logic_error("non-positive edge weight");
    const int i = index_of(a);
    const int j = index_of(b);
    if (i < 0 || j < 0) throw std::logic_error("edge endpoint not a graph node");
    weight_map_[{std::min(i, j), std::max(i, j)}] += w;
    edges_dirty_ = true;
}

std::vector<std::pair<int, double>> SocialGraph::neighbors(int i) const {
    std::vector<std::pair<int, double>> out;
    for (const auto& [key, w] : weight_map_) {
        if (key.first == i) out.emplace_back(key.second, w);
        else if (key.second == i) out.emplace_back(key.first, w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double SocialGraph::total_weight() const {
    double sum = 0.0;
    for (const auto& [key, w] : weight_map_) sum += w;
    return sum;
}

double SocialGraph::strength(int i) const {
    double sum = 0.0;
    for (const auto& [key, w] : weight_map_)
        if (key.first == i || key.second == i) sum += w;
    return sum;
}

const std::vector<SocialGraph::Edge>& SocialGraph::edges() const {
    if (edges_dirty_ || (edges_.empty() && !weight_map_.empty())) {
        edges_.clear();
        edges_.reserve(weight_map_.size());
        for (const auto& [key, w] : weight_map_) edges_.push_back({key.first, key.second, w});
        edges_dirty_ = false;
    }
    return edges_;
}

// ---------------------------------------------------------------------------
// Graph construction from the event log
// ---------------------------------------------------------------------------

SocialGraph build_graph(const std::vector<EventLogEntry>& events, int week_from, int week_to) {
    std::vector<MemberId> members;
    for (const EventLogEntry& e : events)
        if (e.kind == EventKind::MemberGenerated)
            members.push_back(e.payload.at("profile").at("member_id").get<MemberId>());
    if (members.empty()) throw EmptyLog("event log contains no generated members");

    SocialGraph g(std::move(members));
    g.week_from = week_from;
    g.week_to = week_to;

    for (const EventLogEntry& e : events) {
        if (e.kind != EventKind::TaskSettled) continue;
        if (e.week < week_from || e.week > week_to) continue;
        const json& task = e.payload.at("task");
        const auto allocation = task.at("allocation").get<std::vector<MemberId>>();
        if (allocation.size() < 2) continue;
        const double wt = task.at("spec").at("workload_hours").get<double>();
        const double w = wt / static_cast<double>(allocation.size());
        for (std::size_t i = 0; i < allocation.size(); ++i)
            for (std::size_t j = i + 1; j < allocation.size(); ++j)
                g.add_weight(allocation[i], allocation[j], w);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Shortest-path metrics (distances are inverse weights)
// ---------------------------------------------------------------------------

namespace {

struct ShortestPaths {
    std::vector<double> dist;
    std::vector<double> sigma;              // number of shortest paths
    std::vector<std::vector<int>> preds;    // predecessors on shortest paths
    std::vector<int> order;                 // settle order (ascending distance)
};

ShortestPaths dijkstra(const SocialGraph& g, int source) {
    const int n = g.size();
    ShortestPaths sp;
    sp.dist.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    sp.sigma.assign(static_cast<std::size_t>(n), 0.0);
    sp.preds.assign(static_cast<std::size_t>(n), {});
    sp.dist[static_cast<std::size_t>(source)] = 0.0;
    sp.sigma[static_cast<std::size_t>(source)] = 1.0;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, source});
    std::vector<bool> settled(static_cast<std::size_t>(n), false);

    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (settled[static_cast<std::size_t>(u)]) continue;
        settled[static_cast<std::size_t>(u)] = true;
        sp.order.push_back(u);
        for (const auto& [v, w] : g.neighbors(u)) {
            const double nd = d + 1.0 / w;
            double& dv = sp.dist[static_cast<std::size_t>(v)];
            // Unvisited nodes carry an infinite distance; a tolerance derived
            // from it would swallow every comparison.
            const double tol =
                std::isfinite(dv) ? kDistanceTie * std::max(1.0, std::max(nd, dv)) : 0.0;
            if (nd < dv - tol) {
                dv = nd;
                sp.sigma[static_cast<std::size_t>(v)] = sp.sigma[static_cast<std::size_t>(u)];
                sp.preds[static_cast<std::size_t>(v)] = {u};
                pq.push({nd, v});
            } else if (std::abs(nd - dv) <= tol) {
                sp.sigma[static_cast<std::size_t>(v)] += sp.sigma[static_cast<std::size_t>(u)];
                sp.preds[static_cast<std::size_t>(v)].push_back(u);
            }
        }
    }
    return sp;
}

} // namespace

std::vector<double> harmonic_closeness(const SocialGraph& g) {
    const int n = g.size();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int s = 0; s < n; ++s) {
        const ShortestPaths sp = dijkstra(g, s);
        double sum = 0.0;
        for (int v = 0; v < n; ++v) {
            if (v == s || !std::isfinite(sp.dist[static_cast<std::size_t>(v)])) continue;
            sum += 1.0 / sp.dist[static_cast<std::size_t>(v)];
        }
        out[static_cast<std::size_t>(s)] = sum;
    }
    return out;
}

std::vector<double> betweenness_centrality(const SocialGraph& g) {
    // Brandes' accumulation over weighted shortest paths.
    const int n = g.size();
    std::vector<double> bc(static_cast<std::size_t>(n), 0.0);
    for (int s = 0; s < n; ++s) {
        ShortestPaths sp = dijkstra(g, s);
        std::vector<double> delta(static_cast<std::size_t>(n), 0.0);
        for (auto it = sp.order.rbegin(); it != sp.order.rend(); ++it) {
            const int w = *it;
            for (int v : sp.preds[static_cast<std::size_t>(w)]) {
                delta[static_cast<std::size_t>(v)] +=
                    sp.sigma[static_cast<std::size_t>(v)] / sp.sigma[static_cast<std::size_t>(w)] *
                    (1.0 + delta[static_cast<std::size_t>(w)]);
            }
            if (w != s) bc[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
        }
    }
    // Each unordered pair was counted from both endpoints; normalize by
    // (n-1)(n-2)/2 so a middle node on a 3-path scores exactly 1.
    const double pairs = static_cast<double>(n - 1) * (n - 2) / 2.0;
    if (pairs > 0)
        for (double& v : bc) v = v / 2.0 / pairs;
    return bc;
}

namespace {

// Power iteration on (A + shift·I): the shift keeps the dominant eigenvalue
// simple even on bipartite graphs without moving the eigenvector.
std::vector<double> principal_vector(const SocialGraph& g) {
    const int n = g.size();
    if (n == 0) return {};
    double shift = 0.0;
    for (int i = 0; i < n; ++i) shift = std::max(shift, g.strength(i));
    shift = std::max(shift, 1.0);

    std::vector<double> x(static_cast<std::size_t>(n), 1.0);
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (long iter = 0; iter < kPowerMaxIters; ++iter) {
        for (int i = 0; i < n; ++i) {
            double acc = shift * x[static_cast<std::size_t>(i)];
            for (const auto& [j, w] : g.neighbors(i)) acc += w * x[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(i)] = acc;
        }
        double max_entry = 0.0;
        for (double v : y) max_entry = std::max(max_entry, std::abs(v));
        if (max_entry == 0.0) return y; // edgeless graph: all zeros
        double diff = 0.0;
        for (int i = 0; i < n; ++i) {
            y[static_cast<std::size_t>(i)] /= max_entry;
            diff = std::max(diff, std::abs(y[static_cast<std::size_t>(i)] -
                                           x[static_cast<std::size_t>(i)]));
        }
        x = y;
        if (diff < kPowerTol) return x;
    }
    throw ConvergenceFailure("eigenvector power iteration did not converge", kPowerMaxIters);
}

} // namespace

std::vector<double> eigenvector_centrality(const SocialGraph& g) { return principal_vector(g); }

std::vector<double> clustering_coefficients(const SocialGraph& g) {
    // Weighted local clustering with geometric-mean triangle intensity,
    // weights rescaled by the largest weight in the graph.
    const int n = g.size();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    double wmax = 0.0;
    for (const auto& e : g.edges()) wmax = std::max(wmax, e.weight);
    if (wmax <= 0) return out;

    for (int i = 0; i < n; ++i) {
        const auto nbrs = g.neighbors(i);
        const int k = static_cast<int>(nbrs.size());
        if (k < 2) continue;
        double acc = 0.0;
        for (int a = 0; a < k; ++a) {
            for (int b = a + 1; b < k; ++b) {
                const double wjh = g.weight(nbrs[static_cast<std::size_t>(a)].first,
                                            nbrs[static_cast<std::size_t>(b)].first);
                if (wjh <= 0) continue;
                acc += std::cbrt(nbrs[static_cast<std::size_t>(a)].second / wmax *
                                 (nbrs[static_cast<std::size_t>(b)].second / wmax) *
                                 (wjh / wmax));
            }
        }
        out[static_cast<std::size_t>(i)] = 2.0 * acc / (static_cast<double>(k) * (k - 1));
    }
    return out;
}

std::vector<double> pagerank(const SocialGraph& g, double damping) {
    const int n = g.size();
    if (n == 0) return {};
    const double uniform = 1.0 / n;
    std::vector<double> strength(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) strength[static_cast<std::size_t>(i)] = g.strength(i);

    std::vector<double> x(static_cast<std::size_t>(n), uniform);
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (long iter = 0; iter < kPowerMaxIters; ++iter) {
        // Dangling (isolated) nodes distribute their mass uniformly.
        double dangling = 0.0;
        for (int i = 0; i < n; ++i)
            if (strength[static_cast<std::size_t>(i)] <= 0)
                dangling += x[static_cast<std::size_t>(i)];
        for (int i = 0; i < n; ++i)
            y[static_cast<std::size_t>(i)] = (1.0 - damping) * uniform +
                                             damping * dangling * uniform;
        for (const auto& e : g.edges()) {
            y[static_cast<std::size_t>(e.b)] += damping * x[static_cast<std::size_t>(e.a)] *
                                                e.weight / strength[static_cast<std::size_t>(e.a)];
            y[static_cast<std::size_t>(e.a)] += damping * x[static_cast<std::size_t>(e.b)] *
                                                e.weight / strength[static_cast<std::size_t>(e.b)];
        }
        double diff = 0.0;
        for (int i = 0; i < n; ++i)
            diff += std::abs(y[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]);
        x = y;
        if (diff < kPageRankTol) {
            // Exact unit sum despite accumulated roundoff.
            double sum = 0.0;
            for (double v : x) sum += v;
            for (double& v : x) v /= sum;
            return x;
        }
    }
    throw ConvergenceFailure("pagerank iteration did not converge", kPowerMaxIters);
}

std::map<MemberId, NodeMetrics> compute_metrics(const SocialGraph& g) {
    if (g.size() == 0) throw EmptyLog("metrics requested for an empty graph");
    const auto cl = harmonic_closeness(g);
    const auto bc = betweenness_centrality(g);
    const auto ev = eigenvector_centrality(g);
    const auto cc = clustering_coefficients(g);
    const auto pr = pagerank(g);

    std::map<MemberId, NodeMetrics> out;
    for (int i = 0; i < g.size(); ++i) {
        NodeMetrics m;
        m.closeness = cl[static_cast<std::size_t>(i)];
        m.betweenness = bc[static_cast<std::size_t>(i)];
        m.eigenvector = ev[static_cast<std::size_t>(i)];
        m.clustering = cc[static_cast<std::size_t>(i)];
        // HITS on an undirected graph: authority and hub both collapse to
        // the principal eigenvector.
        m.authority = ev[static_cast<std::size_t>(i)];
        m.hub = ev[static_cast<std::size_t>(i)];
        m.pagerank = pr[static_cast<std::size_t>(i)];
        out[g.node_id(i)] = m;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Greedy modularity communities
// ---------------------------------------------------------------------------

double partition_modularity(const SocialGraph& g, const std::vector<int>& label_of_index) {
    const double m2 = 2.0 * g.total_weight();
    if (m2 <= 0) return 0.0;
    const int n = g.size();
    std::map<int, double> in_weight, tot_strength;
    for (int i = 0; i < n; ++i) tot_strength[label_of_index[static_cast<std::size_t>(i)]] += g.strength(i);
    for (const auto& e : g.edges())
        if (label_of_index[static_cast<std::size_t>(e.a)] ==
            label_of_index[static_cast<std::size_t>(e.b)])
            in_weight[label_of_index[static_cast<std::size_t>(e.a)]] += e.weight;
    double q = 0.0;
    for (const auto& [label, tot] : tot_strength) {
        const double in = in_weight.count(label) ? in_weight[label] : 0.0;
        q += 2.0 * in / m2 - (tot / m2) * (tot / m2);
    }
    return q;
}

CommunityResult detect_communities(const SocialGraph& g) {
    const int n = g.size();
    if (n == 0) throw EmptyLog("community detection on an empty graph");
    CommunityResult result;

    // Agglomerative best-ΔQ merging: each community is keyed by the
    // smallest member id it contains, which also breaks ties.
    std::vector<int> community(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) community[static_cast<std::size_t>(i)] = i;

    const double m2 = 2.0 * g.total_weight();
    if (m2 > 0) {
        std::map<std::pair<int, int>, double> between; // community pair -> weight
        std::map<int, double> strength_of;
        for (int i = 0; i < n; ++i) strength_of[i] = g.strength(i);
        for (const auto& e : g.edges()) between[{e.a, e.b}] += e.weight;

        while (true) {
            // Map iteration is ascending, so on ties the smallest community
            // pair is kept by using a strict improvement test.
            double best_dq = 0.0;
            std::pair<int, int> best_pair{-1, -1};
            for (const auto& [pair, w] : between) {
                const double dq = 2.0 * (w / m2 - (strength_of[pair.first] / m2) *
                                                      (strength_of[pair.second] / m2));
                if (dq > best_dq) {
                    best_dq = dq;
                    best_pair = pair;
                }
            }
            if (best_pair.first < 0) break;

            const auto [keep, absorb] = best_pair;
            for (int i = 0; i < n; ++i)
                if (community[static_cast<std::size_t>(i)] == absorb)
                    community[static_cast<std::size_t>(i)] = keep;
            strength_of[keep] += strength_of[absorb];
            strength_of.erase(absorb);

            std::map<std::pair<int, int>, double> next;
            for (const auto& [pair, w] : between) {
                int a = pair.first == absorb ? keep : pair.first;
                int b = pair.second == absorb ? keep : pair.second;
                if (a == b) continue;
                next[{std::min(a, b), std::max(a, b)}] += w;
            }
            between = std::move(next);
        }
    }

    // Density-compress labels in order of smallest member id.
    std::map<int, int> dense;
    for (int i = 0; i < n; ++i) {
        const int c = community[static_cast<std::size_t>(i)];
        if (dense.find(c) == dense.end()) dense[c] = static_cast<int>(dense.size());
    }
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        labels[static_cast<std::size_t>(i)] = dense[community[static_cast<std::size_t>(i)]];
        result.labels[g.node_id(i)] = labels[static_cast<std::size_t>(i)];
    }
    result.modularity = partition_modularity(g, labels);
    return result;
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

void write_nodes_csv(const std::filesystem::path& path,
                     const std::map<MemberId, NodeMetrics>& metrics) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "member_id,closeness,betweenness,eigenvector,clustering,authority,hub,pagerank,"
           "community\n";
    for (const auto& [id, m] : metrics) {
        out << id << ',' << m.closeness << ',' << m.betweenness << ',' << m.eigenvector << ','
            << m.clustering << ',' << m.authority << ',' << m.hub << ',' << m.pagerank << ','
            << m.community << '\n';
    }
}

void write_edges_csv(const std::filesystem::path& path, const SocialGraph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "src,dst,weight\n";
    for (const auto& e : g.edges())
        out << g.node_id(e.a) << ',' << g.node_id(e.b) << ',' << e.weight << '\n';
}

void write_dot(const std::filesystem::path& path, const SocialGraph& g,
               const std::map<MemberId, NodeMetrics>& metrics) {
    static const char* palette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
                                    "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#bab0ac"};
    constexpr int palette_size = 10;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "graph holosim {\n  layout=neato;\n  node [style=filled, fontcolor=white];\n";
    for (int i = 0; i < g.size(); ++i) {
        const MemberId id = g.node_id(i);
        const NodeMetrics& m = metrics.at(id);
        const double size = 0.2 + 4.0 * m.pagerank; // area tracks pagerank
        out << "  n" << id << " [label=\"" << id << "\", fillcolor=\""
            << palette[m.community >= 0 ? m.community % palette_size : 0] << "\", width="
            << size << ", height=" << size << ", fixedsize=true];\n";
    }
    double wmax = 0.0;
    for (const auto& e : g.edges()) wmax = std::max(wmax, e.weight);
    for (const auto& e : g.edges()) {
        out << "  n" << g.node_id(e.a) << " -- n" << g.node_id(e.b) << " [penwidth="
            << (wmax > 0 ? 0.5 + 4.0 * e.weight / wmax : 1.0) << "];\n";
    }
    out << "}\n";
}

} // namespace holosim
