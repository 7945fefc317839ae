#include "lexnet/semnet.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lexnet {

int CooccurrenceMatrix::intern(const std::string& term) {
    auto it = term_id.find(term);
    if (it != term_id.end()) return it->second;
    int id = static_cast<int>(terms.size());
    terms.push_back(term);
    term_id.emplace(term, id);
    return id;
}

long long CooccurrenceMatrix::total_count() const {
    long long total = 0;
    for (const auto& [cell, count] : counts) total += count;
    return total;
}

namespace {

void scan_window(CooccurrenceMatrix& matrix, const std::vector<const Token*>& window) {
    // Every ordered occurrence pair (earlier -> later) of distinct terms
    // contributes one count.
    for (size_t i = 0; i + 1 < window.size(); ++i) {
        int src = matrix.intern(window[i]->surface);
        for (size_t j = i + 1; j < window.size(); ++j) {
            int dst = matrix.intern(window[j]->surface);
            if (src == dst) continue;
            ++matrix.counts[{src, dst}];
        }
    }
}

}  // namespace

CooccurrenceMatrix cooccurrence_matrix(const std::vector<PreparedText>& texts,
                                       Window window) {
    CooccurrenceMatrix matrix;
    std::vector<const Token*> scope;
    for (const auto& text : texts) {
        if (window == Window::sentence) {
            for (const auto& sentence : text.filtered_sentences) {
                scope.clear();
                for (const auto& t : sentence) scope.push_back(&t);
                scan_window(matrix, scope);
            }
        } else {
            scope.clear();
            for (const auto& sentence : text.filtered_sentences)
                for (const auto& t : sentence) scope.push_back(&t);
            scan_window(matrix, scope);
        }
    }
    return matrix;
}

CooccurrenceMatrix merge_matrices(const std::vector<CooccurrenceMatrix>& parts) {
    CooccurrenceMatrix merged;
    for (const auto& part : parts) {
        for (const auto& [cell, count] : part.counts) {
            int src = merged.intern(part.terms[cell.first]);
            int dst = merged.intern(part.terms[cell.second]);
            merged.counts[{src, dst}] += count;
        }
    }
    return merged;
}

void write_matrix_csv(const CooccurrenceMatrix& matrix, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);

    std::vector<std::tuple<std::string, std::string, long long>> rows;
    rows.reserve(matrix.counts.size());
    for (const auto& [cell, count] : matrix.counts)
        rows.emplace_back(matrix.terms[cell.first], matrix.terms[cell.second], count);
    std::sort(rows.begin(), rows.end());

    out << "source,target,count\n";
    for (const auto& [src, dst, count] : rows)
        out << src << ',' << dst << ',' << count << "\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

CooccurrenceMatrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "source,target,count")
        throw std::runtime_error(path + ": expected header \"source,target,count\"");

    CooccurrenceMatrix matrix;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t c1 = line.find(',');
        size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad row");
        std::string src = line.substr(0, c1);
        std::string dst = line.substr(c1 + 1, c2 - c1 - 1);
        long long count = 0;
        try {
            count = std::stoll(line.substr(c2 + 1));
        } catch (...) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad count");
        }
        if (src.empty() || dst.empty() || src == dst || count < 1)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": invalid cell");
        matrix.counts[{matrix.intern(src), matrix.intern(dst)}] += count;
    }
    return matrix;
}

SemanticGraph SemanticGraph::from_edges(std::vector<std::string> node_names,
                                        std::vector<std::tuple<int, int, double>> edges) {
    SemanticGraph g;
    g.nodes = std::move(node_names);
    const size_t n = g.nodes.size();

    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
    });

    g.offsets.assign(n + 1, 0);
    g.targets.reserve(edges.size());
    g.weights.reserve(edges.size());
    g.node_frequency.assign(n, 0.0);

    for (const auto& [src, dst, w] : edges) {
        g.offsets[static_cast<size_t>(src) + 1]++;
        g.node_frequency[static_cast<size_t>(src)] += w;
        g.node_frequency[static_cast<size_t>(dst)] += w;
    }
    for (size_t i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
    for (const auto& [src, dst, w] : edges) {
        g.targets.push_back(dst);
        g.weights.push_back(w);
    }
    return g;
}

SemanticGraph build_graph(const CooccurrenceMatrix& matrix) {
    if (matrix.counts.empty()) throw std::invalid_argument("no co-occurrences");

    // Graph node order is lexicographic in the term name so that matrices
    // built in any insertion order produce the identical graph.
    std::vector<std::string> used;
    for (const auto& [cell, count] : matrix.counts) {
        used.push_back(matrix.terms[cell.first]);
        used.push_back(matrix.terms[cell.second]);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());

    std::unordered_map<std::string, int> index;
    for (size_t i = 0; i < used.size(); ++i) index.emplace(used[i], static_cast<int>(i));

    std::vector<std::tuple<int, int, double>> edges;
    edges.reserve(matrix.counts.size());
    for (const auto& [cell, count] : matrix.counts)
        edges.emplace_back(index.at(matrix.terms[cell.first]),
                           index.at(matrix.terms[cell.second]),
                           static_cast<double>(count));
    return SemanticGraph::from_edges(std::move(used), std::move(edges));
}

std::vector<std::pair<std::string, long long>> term_frequencies(
    const std::vector<PreparedText>& texts, int k) {
    if (k < 1) throw std::invalid_argument("term_frequencies: k must be >= 1");

    std::unordered_map<std::string, long long> freq;
    for (const auto& text : texts)
        for (const auto& sentence : text.filtered_sentences)
            for (const auto& t : sentence) ++freq[t.surface];

    std::vector<std::pair<std::string, long long>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > static_cast<size_t>(k)) ranked.resize(static_cast<size_t>(k));
    return ranked;
}

}  // namespace lexnet
