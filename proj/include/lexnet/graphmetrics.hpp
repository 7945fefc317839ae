#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lexnet/semnet.hpp"

namespace lexnet {

struct Partition {
    std::vector<int> assignment;  // node index -> community id, contiguous from 0
    int community_count = 0;
};

struct RandomGraphSpec {
    int n = 2;
    double p = 0.0;
    uint64_t seed = 0;
};

/// m / (n*(n-1)) for a directed graph. Requires n >= 2.
double density(const SemanticGraph& graph);

/// Mean unweighted shortest-path length over reachable ordered pairs,
/// unreachable pairs excluded. Throws when no pair is reachable.
double average_path_length(const SemanticGraph& graph, int threads = 1);

/// Louvain local moving + aggregation on the symmetrized weighted graph
/// (w'_uv = w_uv + w_vu). Node visiting order is shuffled by the seeded
/// generator; modularity-gain ties break toward the smallest community id.
/// Deterministic for a fixed seed.
Partition louvain_communities(const SemanticGraph& graph, uint64_t seed);

/// Directed weighted modularity of a partition:
///   Q = (1/W) * sum_ij [w_ij - s_out_i * s_in_j / W] * delta(c_i, c_j)
double modularity(const SemanticGraph& graph, const Partition& partition);

enum class BetweennessMode { unweighted, inverse_weight };

/// Brandes betweenness on the directed graph, unnormalized. inverse_weight
/// uses edge distance 1/weight (Opsahl-style shortest paths).
std::vector<double> betweenness(const SemanticGraph& graph, BetweennessMode mode,
                                int threads = 1);

/// Erdos-Renyi G(n,p) over ordered pairs, each edge independent with
/// probability p and weight 1. Deterministic for a fixed seed.
SemanticGraph random_directed_gnp(const RandomGraphSpec& spec);

struct GraphMetricsReport {
    size_t node_count = 0;
    size_t edge_count = 0;
    double density = 0.0;
    bool apl_defined = false;  // false when no ordered pair is reachable
    double average_path_length = 0.0;
    double modularity = 0.0;
    int community_count = 0;
    Partition partition;
    std::vector<double> betweenness;  // node index -> score
    std::vector<std::pair<std::string, double>> top_betweenness;
};

/// Full macro/meso/micro report for one graph.
GraphMetricsReport compute_report(const SemanticGraph& graph, uint64_t seed,
                                  BetweennessMode mode = BetweennessMode::inverse_weight,
                                  int threads = 1, int top_k = 5);

/// compute_report over one sampled G(n,p) graph.
GraphMetricsReport benchmark_report(const RandomGraphSpec& spec, int threads = 1);

}  // namespace lexnet
