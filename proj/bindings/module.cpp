#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lexnet/pipeline.hpp"

namespace py = pybind11;
using namespace lexnet;

namespace {

std::vector<Token> tokens_from_strings(const std::vector<std::string>& words) {
    std::vector<Token> tokens;
    tokens.reserve(words.size());
    for (size_t i = 0; i < words.size(); ++i) {
        Token t;
        t.surface = words[i];
        t.index = static_cast<int>(i);
        tokens.push_back(std::move(t));
    }
    return tokens;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Corpus analytics: lexical scores, co-occurrence networks, "
              "graph metrics and nonparametric tests";

    // ---- textprep ----------------------------------------------------------
    py::class_<Token>(m, "Token")
        .def_readonly("surface", &Token::surface)
        .def_readonly("sentence", &Token::sentence)
        .def_readonly("index", &Token::index)
        .def("__repr__",
             [](const Token& t) { return "Token('" + t.surface + "')"; });

    py::class_<StopPolicy>(m, "StopPolicy")
        .def(py::init<>())
        .def_readwrite("stopwords", &StopPolicy::stopwords)
        .def_readwrite("extra_drop", &StopPolicy::extra_drop)
        .def_readwrite("drop_numeric", &StopPolicy::drop_numeric)
        .def_readwrite("merge_plural_singular", &StopPolicy::merge_plural_singular);

    m.def("default_stop_policy", &default_stop_policy);
    m.def("split_sentences",
          py::overload_cast<const std::string&>(&split_sentences), py::arg("text"));
    m.def("tokenize", &tokenize, py::arg("sentence"), py::arg("policy") = StopPolicy{});
    m.def("apply_stoppolicy", &apply_stoppolicy, py::arg("tokens"), py::arg("policy"));
    m.def("count_syllables",
          [](const std::string& w) { return count_syllables(w); }, py::arg("word"));

    py::class_<PreparedText>(m, "PreparedText")
        .def_readonly("sentences", &PreparedText::sentences)
        .def_readonly("filtered_sentences", &PreparedText::filtered_sentences)
        .def_readonly("word_count", &PreparedText::word_count)
        .def_readonly("sentence_count", &PreparedText::sentence_count)
        .def_readonly("syllable_count", &PreparedText::syllable_count);

    m.def("prepare", &prepare, py::arg("text"), py::arg("policy"));

    // ---- lexmetrics ---------------------------------------------------------
    py::class_<FrequencySpectrum>(m, "FrequencySpectrum")
        .def_readonly("n_tokens", &FrequencySpectrum::n_tokens)
        .def_readonly("n_types", &FrequencySpectrum::n_types)
        .def_readonly("spectrum", &FrequencySpectrum::spectrum);

    py::class_<LexScores>(m, "LexScores")
        .def_readonly("fkgl", &LexScores::fkgl)
        .def_readonly("yules_k", &LexScores::yules_k);

    m.def("fkgl", &fkgl, py::arg("prepared"));
    m.def("frequency_spectrum",
          [](const std::vector<std::string>& words) {
              return frequency_spectrum(tokens_from_strings(words));
          },
          py::arg("tokens"));
    m.def("yules_k", &yules_k, py::arg("spectrum"));
    m.def("yules_k_of",
          [](const std::vector<std::string>& words) {
              return yules_k(frequency_spectrum(tokens_from_strings(words)));
          },
          py::arg("tokens"), "Yule's K straight from a token list");
    m.def("score_text", &score_text, py::arg("text"), py::arg("policy"));

    // ---- semnet ---------------------------------------------------------------
    py::enum_<Window>(m, "Window")
        .value("sentence", Window::sentence)
        .value("whole_text", Window::whole_text);

    py::class_<CooccurrenceMatrix>(m, "CooccurrenceMatrix")
        .def_readonly("terms", &CooccurrenceMatrix::terms)
        .def_property_readonly("counts",
                               [](const CooccurrenceMatrix& mat) {
                                   std::map<std::pair<std::string, std::string>, long long>
                                       named;
                                   for (const auto& [cell, count] : mat.counts)
                                       named[{mat.terms[cell.first],
                                              mat.terms[cell.second]}] = count;
                                   return named;
                               })
        .def("total_count", &CooccurrenceMatrix::total_count);

    m.def("cooccurrence_matrix", &cooccurrence_matrix, py::arg("texts"),
          py::arg("window"));
    m.def("merge_matrices", &merge_matrices, py::arg("parts"));
    m.def("write_matrix_csv", &write_matrix_csv, py::arg("matrix"), py::arg("path"));
    m.def("load_matrix_csv", &load_matrix_csv, py::arg("path"));

    py::class_<SemanticGraph>(m, "SemanticGraph")
        .def_readonly("nodes", &SemanticGraph::nodes)
        .def_readonly("node_frequency", &SemanticGraph::node_frequency)
        .def_property_readonly("n", &SemanticGraph::node_count)
        .def_property_readonly("m", &SemanticGraph::edge_count)
        .def("edges",
             [](const SemanticGraph& g) {
                 std::vector<std::tuple<std::string, std::string, double>> out;
                 for (size_t u = 0; u < g.node_count(); ++u)
                     for (size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e)
                         out.emplace_back(g.nodes[u],
                                          g.nodes[static_cast<size_t>(g.targets[e])],
                                          g.weights[e]);
                 return out;
             });

    m.def("build_graph", &build_graph, py::arg("matrix"));
    m.def("term_frequencies", &term_frequencies, py::arg("texts"), py::arg("k"));

    // ---- graphmetrics ----------------------------------------------------------
    py::class_<Partition>(m, "Partition")
        .def_readonly("assignment", &Partition::assignment)
        .def_readonly("community_count", &Partition::community_count);

    py::class_<RandomGraphSpec>(m, "RandomGraphSpec")
        .def(py::init([](int n, double p, uint64_t seed) {
                 return RandomGraphSpec{n, p, seed};
             }),
             py::arg("n"), py::arg("p"), py::arg("seed") = 0)
        .def_readwrite("n", &RandomGraphSpec::n)
        .def_readwrite("p", &RandomGraphSpec::p)
        .def_readwrite("seed", &RandomGraphSpec::seed);

    py::enum_<BetweennessMode>(m, "BetweennessMode")
        .value("unweighted", BetweennessMode::unweighted)
        .value("inverse_weight", BetweennessMode::inverse_weight);

    py::class_<GraphMetricsReport>(m, "GraphMetricsReport")
        .def_readonly("node_count", &GraphMetricsReport::node_count)
        .def_readonly("edge_count", &GraphMetricsReport::edge_count)
        .def_readonly("density", &GraphMetricsReport::density)
        .def_readonly("apl_defined", &GraphMetricsReport::apl_defined)
        .def_readonly("average_path_length", &GraphMetricsReport::average_path_length)
        .def_readonly("modularity", &GraphMetricsReport::modularity)
        .def_readonly("community_count", &GraphMetricsReport::community_count)
        .def_readonly("partition", &GraphMetricsReport::partition)
        .def_readonly("betweenness", &GraphMetricsReport::betweenness)
        .def_readonly("top_betweenness", &GraphMetricsReport::top_betweenness);

    m.def("density", &density, py::arg("graph"));
    m.def("average_path_length", &average_path_length, py::arg("graph"),
          py::arg("threads") = 1);
    m.def("louvain_communities", &louvain_communities, py::arg("graph"), py::arg("seed"));
    m.def("modularity", &modularity, py::arg("graph"), py::arg("partition"));
    m.def("betweenness", &betweenness, py::arg("graph"),
          py::arg("mode") = BetweennessMode::inverse_weight, py::arg("threads") = 1);
    m.def("random_directed_gnp", &random_directed_gnp, py::arg("spec"));
    m.def("compute_report", &compute_report, py::arg("graph"), py::arg("seed"),
          py::arg("mode") = BetweennessMode::inverse_weight, py::arg("threads") = 1,
          py::arg("top_k") = 5);
    m.def("benchmark_report", &benchmark_report, py::arg("spec"), py::arg("threads") = 1);

    // ---- stats ----------------------------------------------------------------
    py::class_<DescriptiveSummary>(m, "DescriptiveSummary")
        .def_readonly("min", &DescriptiveSummary::min)
        .def_readonly("q1", &DescriptiveSummary::q1)
        .def_readonly("median", &DescriptiveSummary::median)
        .def_readonly("mean", &DescriptiveSummary::mean)
        .def_readonly("q3", &DescriptiveSummary::q3)
        .def_readonly("max", &DescriptiveSummary::max)
        .def_readonly("iqr", &DescriptiveSummary::iqr)
        .def_readonly("n", &DescriptiveSummary::n);

    py::class_<TestResult>(m, "TestResult")
        .def_property_readonly("test",
                               [](const TestResult& r) { return to_string(r.test); })
        .def_readonly("statistic", &TestResult::statistic)
        .def_readonly("p_value", &TestResult::p_value)
        .def_readonly("effect_size", &TestResult::effect_size)
        .def_readonly("group_labels", &TestResult::group_labels)
        .def_readonly("n", &TestResult::n);

    py::enum_<PAdjust>(m, "PAdjust")
        .value("none", PAdjust::none)
        .value("holm", PAdjust::holm);

    m.def("describe",
          [](const std::vector<double>& v) { return describe(v); }, py::arg("values"));
    m.def("pearson",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              return pearson(x, y);
          },
          py::arg("x"), py::arg("y"));
    m.def("shapiro_wilk",
          [](const std::vector<double>& v) { return shapiro_wilk(v); },
          py::arg("values"));
    m.def("wilcoxon_rank_sum",
          [](const std::vector<double>& a, const std::vector<double>& b) {
              return wilcoxon_rank_sum(a, b);
          },
          py::arg("a"), py::arg("b"));
    m.def("kruskal_wallis", &kruskal_wallis, py::arg("groups"),
          py::arg("labels") = std::vector<std::string>{});
    m.def("dunn_pairwise", &dunn_pairwise, py::arg("groups"),
          py::arg("adjust") = PAdjust::none,
          py::arg("labels") = std::vector<std::string>{});

    // ---- corpus + pipeline ------------------------------------------------------
    py::enum_<CorpusFormat>(m, "CorpusFormat")
        .value("csv", CorpusFormat::csv)
        .value("jsonl", CorpusFormat::jsonl);

    py::class_<JournalRecord>(m, "JournalRecord")
        .def(py::init<>())
        .def_readwrite("id", &JournalRecord::id)
        .def_readwrite("title", &JournalRecord::title)
        .def_readwrite("mission", &JournalRecord::mission)
        .def_readwrite("sjr", &JournalRecord::sjr)
        .def_readwrite("h_index", &JournalRecord::h_index)
        .def_readwrite("coverage_years", &JournalRecord::coverage_years);

    py::class_<Corpus>(m, "Corpus")
        .def_readonly("records", &Corpus::records)
        .def_readonly("source_path", &Corpus::source_path)
        .def("__len__", &Corpus::size);

    m.def("load_corpus",
          [](const std::string& path, CorpusFormat fmt, bool strict) {
              return load_corpus(path, fmt, strict);
          },
          py::arg("path"), py::arg("format") = CorpusFormat::csv,
          py::arg("strict") = true);

    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("input_path", &PipelineConfig::input_path)
        .def_readwrite("input_format", &PipelineConfig::input_format)
        .def_readwrite("out_dir", &PipelineConfig::out_dir)
        .def_readwrite("extra_drop", &PipelineConfig::extra_drop)
        .def_readwrite("drop_numeric", &PipelineConfig::drop_numeric)
        .def_readwrite("merge_plural_singular", &PipelineConfig::merge_plural_singular)
        .def_readwrite("jms_window", &PipelineConfig::jms_window)
        .def_readwrite("slice_fraction", &PipelineConfig::slice_fraction)
        .def_readwrite("seed", &PipelineConfig::seed)
        .def_readwrite("min_country_n", &PipelineConfig::min_country_n)
        .def_readwrite("threads", &PipelineConfig::threads);

    py::class_<ReportBundle>(m, "ReportBundle")
        .def_property_readonly("record_count",
                               [](const ReportBundle& b) { return b.scores.size(); })
        .def_property_readonly("network_names",
                               [](const ReportBundle& b) {
                                   std::vector<std::string> names;
                                   for (const auto& n : b.networks)
                                       names.push_back(n.name);
                                   return names;
                               })
        .def_property_readonly("test_count",
                               [](const ReportBundle& b) { return b.tests.size(); });

    m.def("run_pipeline", &run_pipeline, py::arg("config"));
    m.def("write_bundle", &write_bundle, py::arg("bundle"), py::arg("config"));
}
