#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "lexnet/textprep.hpp"

namespace lexnet {

enum class Window { sentence, whole_text };

/// Sparse directed counts of ordered term pairs. Terms are indexed in
/// first-appearance order; counts holds no self-pairs and no zero cells.
struct CooccurrenceMatrix {
    std::vector<std::string> terms;
    std::unordered_map<std::string, int> term_id;
    std::map<std::pair<int, int>, long long> counts;

    int intern(const std::string& term);
    long long total_count() const;
};

/// Scan each window (sentence or whole document) of the filtered token
/// stream; every ordered occurrence pair of distinct terms adds one count.
CooccurrenceMatrix cooccurrence_matrix(const std::vector<PreparedText>& texts, Window window);

/// Cell-wise sum; used to combine per-shard partial matrices.
CooccurrenceMatrix merge_matrices(const std::vector<CooccurrenceMatrix>& parts);

/// CSV triples "source,target,count" sorted by term names.
void write_matrix_csv(const CooccurrenceMatrix& matrix, const std::string& path);
CooccurrenceMatrix load_matrix_csv(const std::string& path);

/// Directed weighted graph in CSR form. Node order is lexicographic in the
/// term name, so any construction path yields an identical graph.
/// node_frequency is the node's total incident edge weight (out + in).
struct SemanticGraph {
    std::vector<std::string> nodes;
    std::vector<double> node_frequency;
    std::vector<size_t> offsets;  // size nodes.size()+1
    std::vector<int> targets;
    std::vector<double> weights;

    size_t node_count() const { return nodes.size(); }
    size_t edge_count() const { return targets.size(); }

    /// Edges need not be sorted; they are CSR-packed in (source,target) order.
    /// Node names are taken as given (not re-sorted).
    static SemanticGraph from_edges(std::vector<std::string> node_names,
                                    std::vector<std::tuple<int, int, double>> edges);
};

/// Throws std::invalid_argument when the matrix has no cells. Terms with no
/// incident edge are dropped.
SemanticGraph build_graph(const CooccurrenceMatrix& matrix);

/// Top-k terms by post-filter frequency; ties broken lexicographically.
std::vector<std::pair<std::string, long long>> term_frequencies(
    const std::vector<PreparedText>& texts, int k);

}  // namespace lexnet
