#include "lexnet/graphmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>
#include <thread>

namespace lexnet {

namespace {

// Explicit draws instead of std::uniform_* so that results are identical
// across standard library implementations.
struct DetRng {
    std::mt19937_64 eng;
    explicit DetRng(uint64_t seed) : eng(seed) {}
    double uniform01() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    size_t below(size_t k) { return static_cast<size_t>(eng() % k); }
};

void shuffle_indices(std::vector<int>& v, DetRng& rng) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

int run_threads(int requested, size_t work_items) {
    int t = std::max(1, requested);
    return static_cast<int>(std::min<size_t>(t, std::max<size_t>(work_items, 1)));
}

}  // namespace

double density(const SemanticGraph& graph) {
    const size_t n = graph.node_count();
    if (n < 2) throw std::invalid_argument("density requires n >= 2");
    return static_cast<double>(graph.edge_count()) /
           (static_cast<double>(n) * static_cast<double>(n - 1));
}

namespace {

// BFS over out-edges; returns (sum of hop counts, number of reached nodes).
std::pair<long long, long long> bfs_distance_sum(const SemanticGraph& g, int source,
                                                 std::vector<int>& dist,
                                                 std::vector<int>& queue) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    dist[static_cast<size_t>(source)] = 0;
    queue.push_back(source);
    long long sum = 0, reached = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
        int u = queue[head];
        for (size_t e = g.offsets[static_cast<size_t>(u)];
             e < g.offsets[static_cast<size_t>(u) + 1]; ++e) {
            int v = g.targets[e];
            if (dist[static_cast<size_t>(v)] >= 0) continue;
            dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
            sum += dist[static_cast<size_t>(v)];
            ++reached;
            queue.push_back(v);
        }
    }
    return {sum, reached};
}

}  // namespace

double average_path_length(const SemanticGraph& graph, int threads) {
    const size_t n = graph.node_count();
    if (n == 0) throw std::invalid_argument("average_path_length on empty graph");

    const int nthreads = run_threads(threads, n);
    std::vector<long long> sums(static_cast<size_t>(nthreads), 0);
    std::vector<long long> counts(static_cast<size_t>(nthreads), 0);

    auto worker = [&](int t) {
        std::vector<int> dist(n), queue;
        queue.reserve(n);
        for (size_t s = static_cast<size_t>(t); s < n; s += static_cast<size_t>(nthreads)) {
            auto [sum, reached] = bfs_distance_sum(graph, static_cast<int>(s), dist, queue);
            sums[static_cast<size_t>(t)] += sum;
            counts[static_cast<size_t>(t)] += reached;
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    long long total = 0, pairs = 0;
    for (int t = 0; t < nthreads; ++t) {
        total += sums[static_cast<size_t>(t)];
        pairs += counts[static_cast<size_t>(t)];
    }
    if (pairs == 0) throw std::runtime_error("average_path_length: no reachable pair");
    return static_cast<double>(total) / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// Louvain on the symmetrized graph
// ---------------------------------------------------------------------------

namespace {

// Undirected weighted multigraph view used during community detection.
// Self-loop weights are stored once; a loop contributes twice to strength.
struct UGraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;
    std::vector<double> selfw;
    std::vector<double> strength;
    double total2 = 0.0;  // 2W

    void finalize() {
        strength.assign(static_cast<size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            double k = 2.0 * selfw[static_cast<size_t>(i)];
            for (const auto& [j, w] : adj[static_cast<size_t>(i)]) k += w;
            strength[static_cast<size_t>(i)] = k;
        }
        total2 = 0.0;
        for (double k : strength) total2 += k;
    }
};

UGraph symmetrize(const SemanticGraph& g) {
    const int n = static_cast<int>(g.node_count());
    std::map<std::pair<int, int>, double> undirected;
    for (int u = 0; u < n; ++u) {
        for (size_t e = g.offsets[static_cast<size_t>(u)];
             e < g.offsets[static_cast<size_t>(u) + 1]; ++e) {
            int v = g.targets[e];
            auto key = std::minmax(u, v);
            undirected[{key.first, key.second}] += g.weights[e];
        }
    }
    UGraph ug;
    ug.n = n;
    ug.adj.assign(static_cast<size_t>(n), {});
    ug.selfw.assign(static_cast<size_t>(n), 0.0);
    for (const auto& [key, w] : undirected) {
        ug.adj[static_cast<size_t>(key.first)].emplace_back(key.second, w);
        ug.adj[static_cast<size_t>(key.second)].emplace_back(key.first, w);
    }
    ug.finalize();
    return ug;
}

// One local-moving phase. comm is renumbered contiguously on return.
// Returns true when at least one node changed community.
bool louvain_one_level(const UGraph& g, DetRng& rng, std::vector<int>& comm) {
    const int n = g.n;
    comm.assign(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) comm[static_cast<size_t>(i)] = i;

    std::vector<double> tot(g.strength);  // sum of strengths per community
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    shuffle_indices(order, rng);

    std::vector<double> nbw(static_cast<size_t>(n), 0.0);
    std::vector<int> touched;

    bool any_move = false;
    bool moved = true;
    int passes = 0;
    while (moved && passes < 128) {
        moved = false;
        ++passes;
        for (int idx : order) {
            const int i = idx;
            const int c_old = comm[static_cast<size_t>(i)];
            const double ki = g.strength[static_cast<size_t>(i)];

            touched.clear();
            for (const auto& [j, w] : g.adj[static_cast<size_t>(i)]) {
                int c = comm[static_cast<size_t>(j)];
                if (nbw[static_cast<size_t>(c)] == 0.0) touched.push_back(c);
                nbw[static_cast<size_t>(c)] += w;
            }
            if (std::find(touched.begin(), touched.end(), c_old) == touched.end())
                touched.push_back(c_old);

            tot[static_cast<size_t>(c_old)] -= ki;

            // Candidates ranked by gain, ties toward the smallest community.
            std::sort(touched.begin(), touched.end());
            int best_c = -1;
            double best_gain = 0.0;
            for (int c : touched) {
                double gain = nbw[static_cast<size_t>(c)] -
                              tot[static_cast<size_t>(c)] * ki / g.total2;
                if (best_c < 0 || gain > best_gain) {
                    best_c = c;
                    best_gain = gain;
                }
            }

            tot[static_cast<size_t>(best_c)] += ki;
            comm[static_cast<size_t>(i)] = best_c;
            if (best_c != c_old) {
                moved = true;
                any_move = true;
            }
            for (int c : touched) nbw[static_cast<size_t>(c)] = 0.0;
        }
    }

    // Renumber by first occurrence in node index order.
    std::vector<int> relabel(static_cast<size_t>(n), -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        int& r = relabel[static_cast<size_t>(comm[static_cast<size_t>(i)])];
        if (r < 0) r = next++;
        comm[static_cast<size_t>(i)] = r;
    }
    return any_move;
}

UGraph aggregate(const UGraph& g, const std::vector<int>& comm, int n_comm) {
    UGraph out;
    out.n = n_comm;
    out.adj.assign(static_cast<size_t>(n_comm), {});
    out.selfw.assign(static_cast<size_t>(n_comm), 0.0);

    std::map<std::pair<int, int>, double> edges;
    for (int u = 0; u < g.n; ++u) {
        int cu = comm[static_cast<size_t>(u)];
        out.selfw[static_cast<size_t>(cu)] += g.selfw[static_cast<size_t>(u)];
        for (const auto& [v, w] : g.adj[static_cast<size_t>(u)]) {
            if (v < u) continue;  // each undirected edge once
            int cv = comm[static_cast<size_t>(v)];
            if (cu == cv) {
                out.selfw[static_cast<size_t>(cu)] += w;
            } else {
                auto key = std::minmax(cu, cv);
                edges[{key.first, key.second}] += w;
            }
        }
    }
    for (const auto& [key, w] : edges) {
        out.adj[static_cast<size_t>(key.first)].emplace_back(key.second, w);
        out.adj[static_cast<size_t>(key.second)].emplace_back(key.first, w);
    }
    out.finalize();
    return out;
}

}  // namespace

Partition louvain_communities(const SemanticGraph& graph, uint64_t seed) {
    if (graph.edge_count() == 0)
        throw std::invalid_argument("louvain_communities requires at least one edge");

    DetRng rng(seed);
    UGraph level = symmetrize(graph);

    std::vector<int> final_comm(graph.node_count());
    for (size_t i = 0; i < final_comm.size(); ++i) final_comm[i] = static_cast<int>(i);

    for (int depth = 0; depth < 64; ++depth) {
        std::vector<int> comm;
        bool improved = louvain_one_level(level, rng, comm);
        int n_comm = *std::max_element(comm.begin(), comm.end()) + 1;

        for (auto& c : final_comm) c = comm[static_cast<size_t>(c)];
        if (!improved || n_comm == level.n) break;
        level = aggregate(level, comm, n_comm);
    }

    // Contiguous ids in node order.
    std::vector<int> relabel(graph.node_count(), -1);
    int next = 0;
    Partition part;
    part.assignment.resize(graph.node_count());
    for (size_t i = 0; i < graph.node_count(); ++i) {
        int c = final_comm[i];
        if (relabel[static_cast<size_t>(c)] < 0) relabel[static_cast<size_t>(c)] = next++;
        part.assignment[i] = relabel[static_cast<size_t>(c)];
    }
    part.community_count = next;
    return part;
}

double modularity(const SemanticGraph& graph, const Partition& partition) {
    const size_t n = graph.node_count();
    if (partition.assignment.size() != n)
        throw std::invalid_argument("partition does not cover the graph");
    for (int c : partition.assignment)
        if (c < 0 || c >= partition.community_count)
            throw std::invalid_argument("partition has out-of-range community id");

    double w_total = 0.0;
    std::vector<double> s_out(n, 0.0), s_in(n, 0.0);
    double internal = 0.0;
    for (size_t u = 0; u < n; ++u) {
        for (size_t e = graph.offsets[u]; e < graph.offsets[u + 1]; ++e) {
            const double w = graph.weights[e];
            const size_t v = static_cast<size_t>(graph.targets[e]);
            w_total += w;
            s_out[u] += w;
            s_in[v] += w;
            if (partition.assignment[u] == partition.assignment[v]) internal += w;
        }
    }
    if (w_total == 0.0) throw std::invalid_argument("modularity on weightless graph");

    std::vector<double> sum_out(static_cast<size_t>(partition.community_count), 0.0);
    std::vector<double> sum_in(static_cast<size_t>(partition.community_count), 0.0);
    for (size_t i = 0; i < n; ++i) {
        sum_out[static_cast<size_t>(partition.assignment[i])] += s_out[i];
        sum_in[static_cast<size_t>(partition.assignment[i])] += s_in[i];
    }
    double null_model = 0.0;
    for (int c = 0; c < partition.community_count; ++c)
        null_model += sum_out[static_cast<size_t>(c)] * sum_in[static_cast<size_t>(c)];

    return internal / w_total - null_model / (w_total * w_total);
}

// ---------------------------------------------------------------------------
// Betweenness (Brandes 2001; inverse-weight distances per Opsahl et al. 2010)
// ---------------------------------------------------------------------------

namespace {

// Per-source dependency accumulation written into delta_out (size n).
void brandes_source_unweighted(const SemanticGraph& g, int source,
                               std::vector<double>& delta_out) {
    const size_t n = g.node_count();
    std::vector<int> dist(n, -1);
    std::vector<double> sigma(n, 0.0), delta(n, 0.0);
    std::vector<std::vector<int>> preds(n);
    std::vector<int> order;
    order.reserve(n);

    dist[static_cast<size_t>(source)] = 0;
    sigma[static_cast<size_t>(source)] = 1.0;
    order.push_back(source);
    for (size_t head = 0; head < order.size(); ++head) {
        int u = order[head];
        for (size_t e = g.offsets[static_cast<size_t>(u)];
             e < g.offsets[static_cast<size_t>(u) + 1]; ++e) {
            int v = g.targets[e];
            if (dist[static_cast<size_t>(v)] < 0) {
                dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
                order.push_back(v);
            }
            if (dist[static_cast<size_t>(v)] == dist[static_cast<size_t>(u)] + 1) {
                sigma[static_cast<size_t>(v)] += sigma[static_cast<size_t>(u)];
                preds[static_cast<size_t>(v)].push_back(u);
            }
        }
    }
    for (size_t i = order.size(); i > 1; --i) {
        int v = order[i - 1];
        for (int u : preds[static_cast<size_t>(v)])
            delta[static_cast<size_t>(u)] += sigma[static_cast<size_t>(u)] /
                                             sigma[static_cast<size_t>(v)] *
                                             (1.0 + delta[static_cast<size_t>(v)]);
        if (v != source) delta_out[static_cast<size_t>(v)] += delta[static_cast<size_t>(v)];
    }
}

void brandes_source_weighted(const SemanticGraph& g, int source,
                             std::vector<double>& delta_out) {
    const size_t n = g.node_count();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf), sigma(n, 0.0), delta(n, 0.0);
    std::vector<char> settled(n, 0);
    std::vector<std::vector<int>> preds(n);
    std::vector<int> order;
    order.reserve(n);

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[static_cast<size_t>(source)] = 0.0;
    sigma[static_cast<size_t>(source)] = 1.0;
    pq.emplace(0.0, source);

    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (settled[static_cast<size_t>(u)]) continue;
        settled[static_cast<size_t>(u)] = 1;
        order.push_back(u);
        for (size_t e = g.offsets[static_cast<size_t>(u)];
             e < g.offsets[static_cast<size_t>(u) + 1]; ++e) {
            int v = g.targets[e];
            double nd = du + 1.0 / g.weights[e];
            if (nd < dist[static_cast<size_t>(v)]) {
                dist[static_cast<size_t>(v)] = nd;
                sigma[static_cast<size_t>(v)] = sigma[static_cast<size_t>(u)];
                preds[static_cast<size_t>(v)].assign(1, u);
                pq.emplace(nd, v);
            } else if (nd == dist[static_cast<size_t>(v)] &&
                       !settled[static_cast<size_t>(v)]) {
                sigma[static_cast<size_t>(v)] += sigma[static_cast<size_t>(u)];
                preds[static_cast<size_t>(v)].push_back(u);
            }
        }
    }
    for (size_t i = order.size(); i > 1; --i) {
        int v = order[i - 1];
        for (int u : preds[static_cast<size_t>(v)])
            delta[static_cast<size_t>(u)] += sigma[static_cast<size_t>(u)] /
                                             sigma[static_cast<size_t>(v)] *
                                             (1.0 + delta[static_cast<size_t>(v)]);
        if (v != source) delta_out[static_cast<size_t>(v)] += delta[static_cast<size_t>(v)];
    }
}

}  // namespace

std::vector<double> betweenness(const SemanticGraph& graph, BetweennessMode mode,
                                int threads) {
    const size_t n = graph.node_count();
    if (n < 2) throw std::invalid_argument("betweenness requires n >= 2");

    std::vector<double> scores(n, 0.0);
    const int nthreads = run_threads(threads, n);
    // Sources are processed in fixed-size blocks; per-source contributions
    // are accumulated in source order so that results do not depend on the
    // thread count.
    const size_t block = 64;
    std::vector<std::vector<double>> slot(block);

    for (size_t base = 0; base < n; base += block) {
        const size_t count = std::min(block, n - base);
        auto worker = [&](int t) {
            for (size_t k = static_cast<size_t>(t); k < count;
                 k += static_cast<size_t>(nthreads)) {
                slot[k].assign(n, 0.0);
                if (mode == BetweennessMode::unweighted)
                    brandes_source_unweighted(graph, static_cast<int>(base + k), slot[k]);
                else
                    brandes_source_weighted(graph, static_cast<int>(base + k), slot[k]);
            }
        };
        if (nthreads == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
            for (auto& th : pool) th.join();
        }
        for (size_t k = 0; k < count; ++k)
            for (size_t v = 0; v < n; ++v) scores[v] += slot[k][v];
    }
    return scores;
}

SemanticGraph random_directed_gnp(const RandomGraphSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("random graph needs n >= 2");
    if (spec.p < 0.0 || spec.p > 1.0)
        throw std::invalid_argument("wiring probability must lie in [0,1]");

    DetRng rng(spec.seed);
    std::vector<std::string> names(static_cast<size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) names[static_cast<size_t>(i)] = "n" + std::to_string(i);

    std::vector<std::tuple<int, int, double>> edges;
    for (int u = 0; u < spec.n; ++u)
        for (int v = 0; v < spec.n; ++v) {
            if (u == v) continue;
            if (rng.uniform01() < spec.p) edges.emplace_back(u, v, 1.0);
        }
    return SemanticGraph::from_edges(std::move(names), std::move(edges));
}

GraphMetricsReport compute_report(const SemanticGraph& graph, uint64_t seed,
                                  BetweennessMode mode, int threads, int top_k) {
    GraphMetricsReport report;
    report.node_count = graph.node_count();
    report.edge_count = graph.edge_count();
    report.density = density(graph);

    try {
        report.average_path_length = average_path_length(graph, threads);
        report.apl_defined = true;
    } catch (const std::runtime_error&) {
        report.apl_defined = false;
        report.average_path_length = 0.0;
    }

    if (graph.edge_count() >= 1) {
        report.partition = louvain_communities(graph, seed);
        report.community_count = report.partition.community_count;
        report.modularity = modularity(graph, report.partition);
    } else {
        report.partition.assignment.assign(graph.node_count(), 0);
        for (size_t i = 0; i < graph.node_count(); ++i)
            report.partition.assignment[i] = static_cast<int>(i);
        report.partition.community_count = static_cast<int>(graph.node_count());
        report.community_count = report.partition.community_count;
        report.modularity = 0.0;
    }

    report.betweenness = betweenness(graph, mode, threads);

    std::vector<size_t> idx(graph.node_count());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (report.betweenness[a] != report.betweenness[b])
            return report.betweenness[a] > report.betweenness[b];
        return graph.nodes[a] < graph.nodes[b];
    });
    for (size_t i = 0; i < idx.size() && i < static_cast<size_t>(top_k); ++i)
        report.top_betweenness.emplace_back(graph.nodes[idx[i]],
                                            report.betweenness[idx[i]]);
    return report;
}

GraphMetricsReport benchmark_report(const RandomGraphSpec& spec, int threads) {
    SemanticGraph graph = random_directed_gnp(spec);
    // Benchmark edges all carry weight 1, where inverse-weight and
    // unweighted Brandes coincide; BFS is the cheaper route.
    return compute_report(graph, spec.seed, BetweennessMode::unweighted, threads);
}

}  // namespace lexnet
