#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lexnet/corpus.hpp"
#include "lexnet/graphmetrics.hpp"
#include "lexnet/lexmetrics.hpp"
#include "lexnet/semnet.hpp"
#include "lexnet/stats.hpp"
#include "lexnet/textprep.hpp"

namespace lexnet {

enum class ExportFormat { csv, json, graphml, dot };
enum class GraphFormat { graphml, dot };

struct PipelineConfig {
    std::string input_path;
    CorpusFormat input_format = CorpusFormat::csv;
    std::string out_dir;

    std::optional<std::string> stopword_file;  // replaces the bundled list
    std::vector<std::string> extra_drop;       // added to {"journal","journals"}
    bool drop_numeric = false;
    bool merge_plural_singular = false;

    Window jms_window = Window::sentence;  // titles always use whole_text
    double slice_fraction = 0.10;          // must lie in (0, 0.5]
    uint64_t seed = 42;
    std::vector<RandomGraphSpec> benchmarks;  // empty -> matched to each network, p=0.05
    std::vector<GroupKey> group_keys = {GroupKey::access, GroupKey::quartile};
    std::set<ExportFormat> formats = {ExportFormat::csv, ExportFormat::json,
                                      ExportFormat::graphml};
    PAdjust adjust = PAdjust::none;
    int min_country_n = 1;
    int threads = 1;
};

struct RecordScores {
    std::string id;
    LexScores scores;
};

struct GroupSummary {
    std::string group_key;    // "overall", "access", "quartile"
    std::string group_value;  // "", "open_access", "Q1", "missing", ...
    std::string metric;       // "fkgl" or "yules_k"
    DescriptiveSummary summary;
};

struct NetworkAnalysis {
    std::string name;  // "titles", "jms_top", "jms_bottom"
    CooccurrenceMatrix matrix;
    SemanticGraph graph;
    GraphMetricsReport metrics;
    std::vector<std::pair<std::string, long long>> top_terms;
};

struct BenchmarkAnalysis {
    std::string name;
    RandomGraphSpec spec;
    GraphMetricsReport metrics;
};

struct StatTest {
    std::string family;  // "shapiro", "wilcoxon_access", "kruskal_quartile", ...
    std::string metric;  // "fkgl" or "yules_k"
    TestResult result;
};

struct SkippedAnalysis {
    std::string name;
    std::string reason;
};

struct CountryMedianRow {
    std::string country;
    size_t n = 0;
    double median_fkgl = 0.0;
    double median_k = 0.0;
    bool below_min_n = false;
};

struct ReportBundle {
    std::string input_name;  // basename of the input file
    uint64_t seed = 0;
    double fraction = 0.0;
    Window window = Window::sentence;
    std::vector<RecordScores> scores;
    std::vector<GroupSummary> summaries;
    std::vector<NetworkAnalysis> networks;
    std::vector<BenchmarkAnalysis> benchmarks;
    std::vector<StatTest> tests;
    std::vector<SkippedAnalysis> skipped;
    std::vector<CountryMedianRow> country_medians;
};

class PipelineError : public std::runtime_error {
  public:
    PipelineError(const std::string& stage, const std::string& what)
        : std::runtime_error("[" + stage + "] " + what), stage_(stage) {}
    const std::string& stage() const { return stage_; }

  private:
    std::string stage_;
};

/// End-to-end study over one corpus file. Purely in-memory; combine with
/// write_bundle to produce the output directory.
ReportBundle run_pipeline(const PipelineConfig& config);

/// Serialize every configured artifact under config.out_dir. On failure the
/// files created by this call are removed before the error propagates.
void write_bundle(const ReportBundle& bundle, const PipelineConfig& config);

/// GraphML or DOT with node frequency/community/betweenness attributes and
/// edge weights.
void export_graph(const SemanticGraph& graph, const GraphMetricsReport& metrics,
                  GraphFormat format, const std::string& path);

/// Per-country medians of both scores over records with a country present.
/// Countries with fewer than min_n records are flagged. Scores are matched
/// to records by id.
std::vector<CountryMedianRow> country_medians(const Corpus& corpus,
                                              const std::vector<RecordScores>& scores,
                                              int min_n = 1);

StopPolicy make_stop_policy(const PipelineConfig& config);

}  // namespace lexnet
