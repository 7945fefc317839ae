#include <fstream>
#include <stdexcept>

#include "format_util.hpp"
#include "lexnet/pipeline.hpp"

namespace lexnet {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

double normalizer(size_t n) {
    if (n < 3) return 0.0;
    return 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
}

void write_graphml(const SemanticGraph& g, const GraphMetricsReport& metrics,
                   std::ostream& out) {
    using detail::fmt_double;
    const double norm = normalizer(g.node_count());

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\""
        << " xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\""
        << " xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns"
        << " http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
        << "  <key id=\"frequency\" for=\"node\" attr.name=\"frequency\""
        << " attr.type=\"double\"/>\n"
        << "  <key id=\"community\" for=\"node\" attr.name=\"community\""
        << " attr.type=\"int\"/>\n"
        << "  <key id=\"betweenness\" for=\"node\" attr.name=\"betweenness\""
        << " attr.type=\"double\"/>\n"
        << "  <key id=\"betweenness_normalized\" for=\"node\""
        << " attr.name=\"betweenness_normalized\" attr.type=\"double\"/>\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\""
        << " attr.type=\"double\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"directed\">\n";

    for (size_t i = 0; i < g.node_count(); ++i) {
        out << "    <node id=\"" << xml_escape(g.nodes[i]) << "\">\n"
            << "      <data key=\"frequency\">" << fmt_double(g.node_frequency[i])
            << "</data>\n"
            << "      <data key=\"community\">"
            << (i < metrics.partition.assignment.size() ? metrics.partition.assignment[i]
                                                        : 0)
            << "</data>\n"
            << "      <data key=\"betweenness\">"
            << fmt_double(i < metrics.betweenness.size() ? metrics.betweenness[i] : 0.0)
            << "</data>\n"
            << "      <data key=\"betweenness_normalized\">"
            << fmt_double(
                   (i < metrics.betweenness.size() ? metrics.betweenness[i] : 0.0) * norm)
            << "</data>\n"
            << "    </node>\n";
    }
    for (size_t u = 0; u < g.node_count(); ++u) {
        for (size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
            out << "    <edge source=\"" << xml_escape(g.nodes[u]) << "\" target=\""
                << xml_escape(g.nodes[static_cast<size_t>(g.targets[e])]) << "\">"
                << "<data key=\"weight\">" << fmt_double(g.weights[e])
                << "</data></edge>\n";
        }
    }
    out << "  </graph>\n</graphml>\n";
}

void write_dot(const SemanticGraph& g, const GraphMetricsReport& metrics,
               std::ostream& out) {
    using detail::fmt_double;
    const double norm = normalizer(g.node_count());

    out << "digraph G {\n";
    for (size_t i = 0; i < g.node_count(); ++i) {
        out << "  \"" << dot_escape(g.nodes[i]) << "\" [frequency="
            << fmt_double(g.node_frequency[i]) << ", community="
            << (i < metrics.partition.assignment.size() ? metrics.partition.assignment[i]
                                                        : 0)
            << ", betweenness="
            << fmt_double(i < metrics.betweenness.size() ? metrics.betweenness[i] : 0.0)
            << ", betweenness_normalized="
            << fmt_double(
                   (i < metrics.betweenness.size() ? metrics.betweenness[i] : 0.0) * norm)
            << "];\n";
    }
    for (size_t u = 0; u < g.node_count(); ++u) {
        for (size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
            out << "  \"" << dot_escape(g.nodes[u]) << "\" -> \""
                << dot_escape(g.nodes[static_cast<size_t>(g.targets[e])])
                << "\" [weight=" << fmt_double(g.weights[e]) << "];\n";
        }
    }
    out << "}\n";
}

}  // namespace

void export_graph(const SemanticGraph& graph, const GraphMetricsReport& metrics,
                  GraphFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (format == GraphFormat::graphml)
        write_graphml(graph, metrics, out);
    else
        write_dot(graph, metrics, out);
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace lexnet
