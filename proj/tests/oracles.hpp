// Independent brute-force reference implementations used only by tests.
// These deliberately avoid the algorithms used by the library: distances come
// from Floyd-Warshall, path counts from DAG DP, betweenness from explicit
// path-share sums, and rank-test p-values from exhaustive enumeration.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "lexnet/graphmetrics.hpp"
#include "lexnet/semnet.hpp"

namespace oracle {

struct DenseGraph {
    int n = 0;
    // weight[u][v] > 0 iff edge; 0 otherwise
    std::vector<std::vector<double>> weight;

    static DenseGraph from(const lexnet::SemanticGraph& g) {
        DenseGraph d;
        d.n = static_cast<int>(g.node_count());
        d.weight.assign(static_cast<size_t>(d.n),
                        std::vector<double>(static_cast<size_t>(d.n), 0.0));
        for (size_t u = 0; u < g.node_count(); ++u)
            for (size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e)
                d.weight[u][static_cast<size_t>(g.targets[e])] = g.weights[e];
        return d;
    }
};

// All-pairs distances by Floyd-Warshall. Unweighted: every edge costs 1.
// Weighted: edge cost 1/w.
inline std::vector<std::vector<double>> all_pairs_distances(const DenseGraph& g,
                                                            bool unweighted) {
    const double inf = std::numeric_limits<double>::infinity();
    const size_t n = static_cast<size_t>(g.n);
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, inf));
    for (size_t i = 0; i < n; ++i) dist[i][i] = 0.0;
    for (size_t u = 0; u < n; ++u)
        for (size_t v = 0; v < n; ++v)
            if (g.weight[u][v] > 0.0)
                dist[u][v] = unweighted ? 1.0 : 1.0 / g.weight[u][v];
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (dist[i][k] + dist[k][j] < dist[i][j])
                    dist[i][j] = dist[i][k] + dist[k][j];
    return dist;
}

// Shortest-path counts sigma[s][t] via DP over the shortest-path DAG.
inline std::vector<std::vector<double>> path_counts(
    const DenseGraph& g, const std::vector<std::vector<double>>& dist, bool unweighted) {
    const size_t n = static_cast<size_t>(g.n);
    std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
    for (size_t s = 0; s < n; ++s) {
        // order targets by distance from s; counts propagate along the DAG
        std::vector<size_t> order;
        for (size_t t = 0; t < n; ++t)
            if (std::isfinite(dist[s][t])) order.push_back(t);
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return dist[s][a] < dist[s][b]; });
        sigma[s][s] = 1.0;
        for (size_t t : order) {
            if (t == s) continue;
            double count = 0.0;
            for (size_t u = 0; u < n; ++u) {
                if (g.weight[u][t] <= 0.0) continue;
                double cost = unweighted ? 1.0 : 1.0 / g.weight[u][t];
                if (dist[s][u] + cost == dist[s][t]) count += sigma[s][u];
            }
            sigma[s][t] = count;
        }
    }
    return sigma;
}

// Unnormalized betweenness from explicit path shares:
//   bc(v) = sum_{s!=t, v interior} sigma_sv * sigma_vt / sigma_st
inline std::vector<double> betweenness(const lexnet::SemanticGraph& g, bool unweighted) {
    DenseGraph d = DenseGraph::from(g);
    auto dist = all_pairs_distances(d, unweighted);
    auto sigma = path_counts(d, dist, unweighted);
    const size_t n = static_cast<size_t>(d.n);
    std::vector<double> bc(n, 0.0);
    for (size_t s = 0; s < n; ++s)
        for (size_t t = 0; t < n; ++t) {
            if (s == t || !std::isfinite(dist[s][t]) || sigma[s][t] == 0.0) continue;
            for (size_t v = 0; v < n; ++v) {
                if (v == s || v == t) continue;
                if (dist[s][v] + dist[v][t] == dist[s][t] && sigma[s][v] > 0.0 &&
                    sigma[v][t] > 0.0)
                    bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
            }
        }
    return bc;
}

// Mean hop count over reachable ordered pairs from Floyd-Warshall distances.
inline double average_path_length(const lexnet::SemanticGraph& g) {
    DenseGraph d = DenseGraph::from(g);
    auto dist = all_pairs_distances(d, /*unweighted=*/true);
    long long sum = 0, pairs = 0;
    for (size_t s = 0; s < static_cast<size_t>(d.n); ++s)
        for (size_t t = 0; t < static_cast<size_t>(d.n); ++t) {
            if (s == t || !std::isfinite(dist[s][t])) continue;
            sum += static_cast<long long>(dist[s][t]);
            ++pairs;
        }
    if (pairs == 0) throw std::runtime_error("oracle: no reachable pair");
    return static_cast<double>(sum) / static_cast<double>(pairs);
}

// Directed modularity straight from the definition, one term per node pair.
inline double modularity(const lexnet::SemanticGraph& g,
                         const lexnet::Partition& part) {
    DenseGraph d = DenseGraph::from(g);
    const size_t n = static_cast<size_t>(d.n);
    double w_total = 0.0;
    std::vector<double> s_out(n, 0.0), s_in(n, 0.0);
    for (size_t u = 0; u < n; ++u)
        for (size_t v = 0; v < n; ++v) {
            w_total += d.weight[u][v];
            s_out[u] += d.weight[u][v];
            s_in[v] += d.weight[u][v];
        }
    double q = 0.0;
    for (size_t u = 0; u < n; ++u)
        for (size_t v = 0; v < n; ++v)
            if (part.assignment[u] == part.assignment[v])
                q += d.weight[u][v] - s_out[u] * s_in[v] / w_total;
    return q / w_total;
}

// Best directed modularity over every partition of n nodes (restricted
// growth strings; usable for n <= 10 or so).
inline std::pair<double, std::vector<int>> best_partition_exhaustive(
    const lexnet::SemanticGraph& g) {
    const int n = static_cast<int>(g.node_count());
    std::vector<int> rgs(static_cast<size_t>(n), 0);
    std::vector<int> best;
    double best_q = -2.0;

    auto evaluate = [&]() {
        lexnet::Partition part;
        part.assignment = rgs;
        part.community_count = *std::max_element(rgs.begin(), rgs.end()) + 1;
        double q = modularity(g, part);
        if (q > best_q) {
            best_q = q;
            best = rgs;
        }
    };

    // iterate restricted growth strings
    std::vector<int> maxval(static_cast<size_t>(n), 0);
    while (true) {
        evaluate();
        int i = n - 1;
        while (i > 0) {
            if (rgs[static_cast<size_t>(i)] <= maxval[static_cast<size_t>(i - 1)]) break;
            --i;
        }
        if (i == 0) break;
        ++rgs[static_cast<size_t>(i)];
        maxval[static_cast<size_t>(i)] =
            std::max(maxval[static_cast<size_t>(i - 1)], rgs[static_cast<size_t>(i)]);
        for (int j = i + 1; j < n; ++j) {
            rgs[static_cast<size_t>(j)] = 0;
            maxval[static_cast<size_t>(j)] = maxval[static_cast<size_t>(i)];
        }
    }
    return {best_q, best};
}

// Exact two-sided rank-sum p by direct subset enumeration (no ties).
inline double wilcoxon_exact_enumeration(int na, int nb, long long w) {
    const int n = na + nb;
    std::vector<int> comb(static_cast<size_t>(na));
    for (int i = 0; i < na; ++i) comb[static_cast<size_t>(i)] = i + 1;

    long long total = 0, le = 0, ge = 0;
    while (true) {
        long long sum = 0;
        for (int v : comb) sum += v;
        ++total;
        if (sum <= w) ++le;
        if (sum >= w) ++ge;

        int i = na - 1;
        while (i >= 0 && comb[static_cast<size_t>(i)] == n - (na - 1 - i)) --i;
        if (i < 0) break;
        ++comb[static_cast<size_t>(i)];
        for (int j = i + 1; j < na; ++j)
            comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
    }
    double p = 2.0 * std::min(static_cast<double>(le) / static_cast<double>(total),
                              static_cast<double>(ge) / static_cast<double>(total));
    return std::min(1.0, p);
}

// Seeded random directed graph with weights from a given set; independent of
// the library's generator on purpose (plain LCG).
inline lexnet::SemanticGraph random_test_graph(int n, double p, uint64_t seed,
                                               const std::vector<double>& weight_choices) {
    uint64_t state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    auto next = [&]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    };
    std::vector<std::string> names(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) names[static_cast<size_t>(i)] = "v" + std::to_string(i);
    std::vector<std::tuple<int, int, double>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            if (next() < p) {
                size_t pick = static_cast<size_t>(next() * static_cast<double>(
                                                               weight_choices.size()));
                pick = std::min(pick, weight_choices.size() - 1);
                edges.emplace_back(u, v, weight_choices[pick]);
            }
        }
    return lexnet::SemanticGraph::from_edges(std::move(names), std::move(edges));
}

}  // namespace oracle
