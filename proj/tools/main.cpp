#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexnet/pipeline.hpp"

namespace fs = std::filesystem;
using namespace lexnet;

namespace {

struct InputOptions {
    std::string path;
    bool jsonl = false;
    bool lenient = false;
    std::string diagnostics_json;
};

void add_input_options(CLI::App* cmd, InputOptions& opts) {
    cmd->add_option("--input", opts.path, "Corpus file (CSV or JSON-lines)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_flag("--jsonl", opts.jsonl, "Input is JSON-lines instead of CSV");
    cmd->add_flag("--lenient", opts.lenient,
                  "Keep going when rows fail validation (errors go to stderr)");
    cmd->add_option("--diagnostics-json", opts.diagnostics_json,
                    "Write row-level diagnostics to this file as JSON");
}

struct TextOptions {
    std::string stopword_file;
    std::vector<std::string> drop;
    bool drop_numeric = false;
    bool merge_plurals = false;
};

void add_text_options(CLI::App* cmd, TextOptions& opts) {
    cmd->add_option("--stopwords", opts.stopword_file,
                    "Stopword list file replacing the bundled one")
        ->check(CLI::ExistingFile);
    cmd->add_option("--drop", opts.drop,
                    "Extra low-information words to drop (comma separated)")
        ->delimiter(',');
    cmd->add_flag("--drop-numeric", opts.drop_numeric, "Drop purely numeric tokens");
    cmd->add_flag("--merge-plurals", opts.merge_plurals,
                  "Naive plural/singular merge of tokens");
}

Corpus load_with_diagnostics(const InputOptions& opts) {
    LoadReport report;
    Corpus corpus;
    try {
        corpus = load_corpus(opts.path, opts.jsonl ? CorpusFormat::jsonl : CorpusFormat::csv,
                             !opts.lenient, &report);
    } catch (...) {
        for (const auto& e : report.errors)
            std::cerr << opts.path << ": row " << e.row
                      << (e.field.empty() ? "" : " field " + e.field) << ": " << e.reason
                      << "\n";
        throw;
    }
    for (const auto& e : report.errors)
        std::cerr << opts.path << ": row " << e.row
                  << (e.field.empty() ? "" : " field " + e.field) << ": " << e.reason
                  << "\n";
    if (!opts.diagnostics_json.empty()) {
        nlohmann::ordered_json diag = nlohmann::ordered_json::array();
        for (const auto& e : report.errors)
            diag.push_back({{"row", e.row}, {"field", e.field}, {"reason", e.reason}});
        std::ofstream out(opts.diagnostics_json, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + opts.diagnostics_json);
        out << diag.dump(2) << "\n";
    }
    return corpus;
}

StopPolicy policy_from(const TextOptions& opts) {
    StopPolicy policy = default_stop_policy();
    if (!opts.stopword_file.empty()) policy.stopwords = load_wordlist(opts.stopword_file);
    for (const auto& w : opts.drop) policy.extra_drop.insert(w);
    policy.drop_numeric = opts.drop_numeric;
    policy.merge_plural_singular = opts.merge_plurals;
    return policy;
}

void print_metrics(const std::string& name, const GraphMetricsReport& m) {
    std::printf("%s: n=%zu m=%zu density=%.4f", name.c_str(), m.node_count, m.edge_count,
                m.density);
    if (m.apl_defined)
        std::printf(" apl=%.2f", m.average_path_length);
    else
        std::printf(" apl=undefined");
    std::printf(" clusters=%d modularity=%.3f\n", m.community_count, m.modularity);
    for (const auto& [term, score] : m.top_betweenness)
        std::printf("  betweenness %-24s %.2f\n", term.c_str(), score);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corpus analytics: lexical scores, semantic co-occurrence networks,\n"
                 "random-graph benchmarks and nonparametric group comparisons."};
    app.require_subcommand(1);

    // ---- analyze ----------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "Run the full pipeline");
    InputOptions a_in;
    TextOptions a_text;
    PipelineConfig config;
    std::vector<std::string> a_formats = {"csv", "json", "graphml"};
    std::vector<std::string> a_benchmarks;
    std::string a_window = "sentence", a_adjust = "none";
    add_input_options(analyze, a_in);
    add_text_options(analyze, a_text);
    analyze->add_option("--out", config.out_dir, "Output directory")->required();
    analyze->add_option("--seed", config.seed, "Random seed");
    analyze->add_option("--fraction", config.slice_fraction,
                        "Top/bottom slice fraction in (0, 0.5]");
    analyze->add_option("--window", a_window, "JMS co-occurrence window")
        ->check(CLI::IsMember({"sentence", "text"}));
    analyze->add_option("--format", a_formats, "Output formats")
        ->delimiter(',')
        ->check(CLI::IsMember({"csv", "json", "graphml", "dot"}));
    analyze->add_option("--adjust", a_adjust, "Dunn p-value adjustment")
        ->check(CLI::IsMember({"none", "holm"}));
    analyze->add_option("--threads", config.threads, "Worker threads");
    analyze->add_option("--min-country-n", config.min_country_n,
                        "Flag countries with fewer records than this");
    analyze->add_option("--benchmark", a_benchmarks,
                        "Extra benchmark spec n:p[:seed] (repeatable); overrides the\n"
                        "default network-matched benchmarks");

    // ---- score ------------------------------------------------------------
    auto* score = app.add_subcommand("score", "FKGL and Yule's K per record");
    InputOptions s_in;
    TextOptions s_text;
    std::string s_out, s_format = "csv";
    add_input_options(score, s_in);
    add_text_options(score, s_text);
    score->add_option("--out", s_out, "Output file (default: table on stdout)");
    score->add_option("--format", s_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // ---- network ----------------------------------------------------------
    auto* network = app.add_subcommand("network",
                                       "Build one co-occurrence network and its metrics");
    InputOptions n_in;
    TextOptions n_text;
    std::string n_column = "mission", n_window = "sentence", n_out;
    std::vector<std::string> n_formats = {"graphml"};
    uint64_t n_seed = 42;
    int n_threads = 1, n_top = 20;
    add_input_options(network, n_in);
    add_text_options(network, n_text);
    network->add_option("--column", n_column, "Text column to analyze")
        ->check(CLI::IsMember({"title", "mission"}));
    network->add_option("--window", n_window, "Co-occurrence window")
        ->check(CLI::IsMember({"sentence", "text"}));
    network->add_option("--out", n_out, "Output directory for exports");
    network->add_option("--format", n_formats, "Export formats")
        ->delimiter(',')
        ->check(CLI::IsMember({"csv", "graphml", "dot"}));
    network->add_option("--seed", n_seed, "Louvain seed");
    network->add_option("--threads", n_threads, "Worker threads");
    network->add_option("--top", n_top, "Length of the term-frequency table");

    // ---- benchmark --------------------------------------------------------
    auto* benchmark = app.add_subcommand("benchmark", "Random directed G(n,p) report");
    RandomGraphSpec b_spec{608, 0.05, 42};
    std::string b_out, b_format = "json";
    int b_threads = 1;
    benchmark->add_option("--n", b_spec.n, "Node count")->required();
    benchmark->add_option("--p", b_spec.p, "Wiring probability");
    benchmark->add_option("--seed", b_spec.seed, "Generator seed");
    benchmark->add_option("--threads", b_threads, "Worker threads");
    benchmark->add_option("--out", b_out, "Output file (default: stdout summary)");
    benchmark->add_option("--format", b_format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));

    // ---- compare ----------------------------------------------------------
    auto* compare = app.add_subcommand("compare", "Nonparametric group comparisons");
    InputOptions c_in;
    TextOptions c_text;
    std::string c_group = "access", c_metric = "both", c_adjust = "none", c_out,
                c_format = "csv";
    add_input_options(compare, c_in);
    add_text_options(compare, c_text);
    compare->add_option("--group", c_group, "Grouping key")
        ->check(CLI::IsMember({"access", "quartile", "country"}));
    compare->add_option("--metric", c_metric, "Metric(s) to test")
        ->check(CLI::IsMember({"fkgl", "k", "both"}));
    compare->add_option("--adjust", c_adjust, "Dunn p-value adjustment")
        ->check(CLI::IsMember({"none", "holm"}));
    compare->add_option("--out", c_out, "Output file (default: stdout)");
    compare->add_option("--format", c_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // ---- export -----------------------------------------------------------
    auto* exportc = app.add_subcommand("export",
                                       "Rebuild a graph from a matrix CSV and export it");
    std::string e_matrix, e_out, e_format = "graphml";
    uint64_t e_seed = 42;
    exportc->add_option("--matrix", e_matrix, "Co-occurrence CSV (source,target,count)")
        ->required()
        ->check(CLI::ExistingFile);
    exportc->add_option("--out", e_out, "Output file")->required();
    exportc->add_option("--format", e_format, "Export format")
        ->check(CLI::IsMember({"graphml", "dot"}));
    exportc->add_option("--seed", e_seed, "Louvain seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) {
            config.input_path = a_in.path;
            config.input_format = a_in.jsonl ? CorpusFormat::jsonl : CorpusFormat::csv;
            if (!a_text.stopword_file.empty()) config.stopword_file = a_text.stopword_file;
            config.extra_drop = a_text.drop;
            config.drop_numeric = a_text.drop_numeric;
            config.merge_plural_singular = a_text.merge_plurals;
            config.jms_window = a_window == "text" ? Window::whole_text : Window::sentence;
            config.adjust = a_adjust == "holm" ? PAdjust::holm : PAdjust::none;
            config.formats.clear();
            for (const auto& f : a_formats) {
                if (f == "csv") config.formats.insert(ExportFormat::csv);
                if (f == "json") config.formats.insert(ExportFormat::json);
                if (f == "graphml") config.formats.insert(ExportFormat::graphml);
                if (f == "dot") config.formats.insert(ExportFormat::dot);
            }
            for (const auto& spec : a_benchmarks) {
                RandomGraphSpec b;
                b.p = 0.05;
                b.seed = config.seed;
                size_t c1 = spec.find(':');
                if (c1 == std::string::npos)
                    throw std::runtime_error("--benchmark expects n:p[:seed]");
                b.n = std::stoi(spec.substr(0, c1));
                size_t c2 = spec.find(':', c1 + 1);
                b.p = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
                if (c2 != std::string::npos)
                    b.seed = std::stoull(spec.substr(c2 + 1));
                config.benchmarks.push_back(b);
            }

            ReportBundle bundle = run_pipeline(config);
            write_bundle(bundle, config);

            std::printf("analyzed %zu records from %s\n", bundle.scores.size(),
                        bundle.input_name.c_str());
            for (const auto& net : bundle.networks) print_metrics(net.name, net.metrics);
            for (const auto& b : bundle.benchmarks) print_metrics(b.name, b.metrics);
            std::printf("tests: %zu  skipped: %zu  countries: %zu\n", bundle.tests.size(),
                        bundle.skipped.size(), bundle.country_medians.size());
            std::printf("outputs written to %s\n", config.out_dir.c_str());
        } else if (*score) {
            Corpus corpus = load_with_diagnostics(s_in);
            StopPolicy policy = policy_from(s_text);
            if (s_out.empty()) {
                std::printf("%-20s %10s %10s\n", "id", "fkgl", "yules_k");
                for (const auto& rec : corpus.records) {
                    LexScores ls = score_text(rec.mission, policy);
                    std::printf("%-20s %10.2f %10.2f\n", rec.id.c_str(), ls.fkgl,
                                ls.yules_k);
                }
            } else {
                std::ofstream out(s_out, std::ios::binary);
                if (!out) throw std::runtime_error("cannot write " + s_out);
                if (s_format == "csv") {
                    out << "id,fkgl,yules_k\n";
                    for (const auto& rec : corpus.records) {
                        LexScores ls = score_text(rec.mission, policy);
                        char buf[64];
                        out << rec.id << ',';
                        std::snprintf(buf, sizeof(buf), "%.17g,%.17g", ls.fkgl, ls.yules_k);
                        out << buf << "\n";
                    }
                } else {
                    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                    for (const auto& rec : corpus.records) {
                        LexScores ls = score_text(rec.mission, policy);
                        arr.push_back({{"id", rec.id},
                                       {"fkgl", ls.fkgl},
                                       {"yules_k", ls.yules_k}});
                    }
                    out << arr.dump(2) << "\n";
                }
            }
        } else if (*network) {
            Corpus corpus = load_with_diagnostics(n_in);
            StopPolicy policy = policy_from(n_text);
            std::vector<PreparedText> prepared;
            for (const auto& rec : corpus.records) {
                const std::string& text = n_column == "title" ? rec.title : rec.mission;
                try {
                    prepared.push_back(prepare(text, policy));
                } catch (const std::invalid_argument&) {
                    prepared.push_back(PreparedText{});
                }
            }
            Window window = n_window == "text" ? Window::whole_text : Window::sentence;
            CooccurrenceMatrix matrix = cooccurrence_matrix(prepared, window);
            if (matrix.counts.empty()) throw std::runtime_error("no co-occurrences");
            SemanticGraph graph = build_graph(matrix);
            GraphMetricsReport metrics = compute_report(
                graph, n_seed, BetweennessMode::inverse_weight, n_threads);
            print_metrics(n_column, metrics);
            auto terms = term_frequencies(prepared, n_top);
            for (size_t i = 0; i < terms.size(); ++i)
                std::printf("  term %2zu %-24s %lld\n", i + 1, terms[i].first.c_str(),
                            terms[i].second);
            if (!n_out.empty()) {
                fs::create_directories(n_out);
                for (const auto& f : n_formats) {
                    fs::path base = fs::path(n_out) / n_column;
                    if (f == "graphml")
                        export_graph(graph, metrics, GraphFormat::graphml,
                                     (base.string() + ".graphml"));
                    else if (f == "dot")
                        export_graph(graph, metrics, GraphFormat::dot,
                                     (base.string() + ".dot"));
                    else if (f == "csv")
                        write_matrix_csv(matrix, base.string() + "_matrix.csv");
                }
            }
        } else if (*benchmark) {
            GraphMetricsReport report = benchmark_report(b_spec, b_threads);
            print_metrics("benchmark", report);
            if (!b_out.empty()) {
                std::ofstream out(b_out, std::ios::binary);
                if (!out) throw std::runtime_error("cannot write " + b_out);
                if (b_format == "json") {
                    nlohmann::ordered_json j;
                    j["n"] = b_spec.n;
                    j["p"] = b_spec.p;
                    j["seed"] = b_spec.seed;
                    j["nodes"] = report.node_count;
                    j["edges"] = report.edge_count;
                    j["density"] = report.density;
                    if (report.apl_defined)
                        j["average_path_length"] = report.average_path_length;
                    else
                        j["average_path_length"] = nullptr;
                    j["modularity"] = report.modularity;
                    j["communities"] = report.community_count;
                    out << j.dump(2) << "\n";
                } else {
                    out << "n,p,seed,nodes,edges,density,average_path_length,modularity,"
                           "communities\n";
                    char buf[256];
                    std::snprintf(buf, sizeof(buf), "%d,%.17g,%llu,%zu,%zu,%.17g,",
                                  b_spec.n, b_spec.p,
                                  static_cast<unsigned long long>(b_spec.seed),
                                  report.node_count, report.edge_count, report.density);
                    out << buf;
                    if (report.apl_defined) {
                        std::snprintf(buf, sizeof(buf), "%.17g", report.average_path_length);
                        out << buf;
                    }
                    std::snprintf(buf, sizeof(buf), ",%.17g,%d\n", report.modularity,
                                  report.community_count);
                    out << buf;
                }
            }
        } else if (*compare) {
            Corpus corpus = load_with_diagnostics(c_in);
            StopPolicy policy = policy_from(c_text);

            std::vector<std::pair<std::string, LexScores>> scored;
            for (const auto& rec : corpus.records)
                scored.emplace_back(rec.id, score_text(rec.mission, policy));

            GroupKey key = c_group == "access"    ? GroupKey::access
                           : c_group == "quartile" ? GroupKey::quartile
                                                   : GroupKey::publisher_country;
            auto groups = group_by(corpus, key);

            std::vector<std::string> labels;
            std::vector<std::vector<double>> fkgl_groups, k_groups;
            std::unordered_map<std::string, const LexScores*> by_id;
            for (const auto& [id, s] : scored) by_id.emplace(id, &s);
            for (const auto& [label, part] : groups) {
                if (label == "missing") continue;
                labels.push_back(label);
                std::vector<double> f, k;
                for (const auto& rec : part.records) {
                    f.push_back(by_id.at(rec.id)->fkgl);
                    k.push_back(by_id.at(rec.id)->yules_k);
                }
                fkgl_groups.push_back(std::move(f));
                k_groups.push_back(std::move(k));
            }
            if (labels.size() < 2) throw std::runtime_error("insufficient groups");

            PAdjust adjust = c_adjust == "holm" ? PAdjust::holm : PAdjust::none;
            std::vector<std::pair<std::string, TestResult>> results;
            auto run_metric = [&](const std::string& metric,
                                  const std::vector<std::vector<double>>& cols) {
                for (size_t i = 0; i < labels.size(); ++i) {
                    if (cols[i].size() >= 3) {
                        try {
                            TestResult r = shapiro_wilk(cols[i]);
                            r.group_labels = {labels[i]};
                            results.emplace_back(metric, std::move(r));
                        } catch (const std::invalid_argument&) {
                        }
                    }
                }
                if (labels.size() == 2) {
                    TestResult r = wilcoxon_rank_sum(cols[0], cols[1]);
                    r.group_labels = {labels[0], labels[1]};
                    results.emplace_back(metric, std::move(r));
                } else {
                    results.emplace_back(metric, kruskal_wallis(cols, labels));
                    for (auto& pair : dunn_pairwise(cols, adjust, labels))
                        results.emplace_back(metric, std::move(pair));
                }
            };
            if (c_metric != "k") run_metric("fkgl", fkgl_groups);
            if (c_metric != "fkgl") run_metric("yules_k", k_groups);

            std::ostream* outp = &std::cout;
            std::ofstream file;
            if (!c_out.empty()) {
                file.open(c_out, std::ios::binary);
                if (!file) throw std::runtime_error("cannot write " + c_out);
                outp = &file;
            }
            if (c_format == "csv") {
                *outp << "metric,test,groups,statistic,p_value,effect_size,n\n";
                for (const auto& [metric, r] : results) {
                    std::string g;
                    for (const auto& l : r.group_labels) g += (g.empty() ? "" : "|") + l;
                    char buf[128];
                    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,", r.statistic,
                                  r.p_value);
                    *outp << metric << ',' << to_string(r.test) << ",\"" << g << "\""
                          << buf;
                    if (r.effect_size) {
                        std::snprintf(buf, sizeof(buf), "%.17g", *r.effect_size);
                        *outp << buf;
                    }
                    *outp << ',' << r.n << "\n";
                }
            } else {
                nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                for (const auto& [metric, r] : results) {
                    nlohmann::ordered_json j;
                    j["metric"] = metric;
                    j["test"] = to_string(r.test);
                    j["groups"] = r.group_labels;
                    j["statistic"] = r.statistic;
                    j["p_value"] = r.p_value;
                    if (r.effect_size)
                        j["effect_size"] = *r.effect_size;
                    else
                        j["effect_size"] = nullptr;
                    j["n"] = r.n;
                    arr.push_back(std::move(j));
                }
                *outp << arr.dump(2) << "\n";
            }
        } else if (*exportc) {
            CooccurrenceMatrix matrix = load_matrix_csv(e_matrix);
            SemanticGraph graph = build_graph(matrix);
            GraphMetricsReport metrics =
                compute_report(graph, e_seed, BetweennessMode::inverse_weight, 1);
            export_graph(graph, metrics,
                         e_format == "dot" ? GraphFormat::dot : GraphFormat::graphml, e_out);
            print_metrics("export", metrics);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
