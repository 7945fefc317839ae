#include "lexnet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "format_util.hpp"

namespace fs = std::filesystem;

namespace lexnet {

namespace {

using detail::fmt_double;
using nlohmann::ordered_json;

constexpr int kTopTerms = 20;

PreparedText prepare_or_empty(const std::string& text, const StopPolicy& policy) {
    try {
        return prepare(text, policy);
    } catch (const std::invalid_argument&) {
        return PreparedText{};
    }
}

std::vector<double> metric_column(const std::vector<RecordScores>& scores,
                                  const std::vector<size_t>& subset, bool fkgl_metric) {
    std::vector<double> out;
    out.reserve(subset.size());
    for (size_t i : subset)
        out.push_back(fkgl_metric ? scores[i].scores.fkgl : scores[i].scores.yules_k);
    return out;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// Per-record scoring, parallelized by index so the result is independent of
// the thread count. The failure reported is always the one with the lowest
// record index.
std::vector<RecordScores> score_records(const Corpus& corpus, const StopPolicy& policy,
                                        int threads) {
    const size_t n = corpus.records.size();
    std::vector<RecordScores> scores(n);
    const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    std::vector<std::pair<size_t, std::string>> failures(
        static_cast<size_t>(nthreads), {n, ""});

    auto worker = [&](int t) {
        for (size_t i = static_cast<size_t>(t); i < n; i += static_cast<size_t>(nthreads)) {
            try {
                scores[i].id = corpus.records[i].id;
                scores[i].scores = score_text(corpus.records[i].mission, policy);
            } catch (const std::exception& e) {
                failures[static_cast<size_t>(t)] = {i, std::string(e.what())};
                return;
            }
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    auto worst = std::min_element(failures.begin(), failures.end());
    if (worst->first < n)
        throw std::runtime_error("record \"" + corpus.records[worst->first].id +
                                 "\": " + worst->second);
    return scores;
}

struct StageGuard {
    const char* stage;
    template <typename F>
    auto run(F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const PipelineError&) {
            throw;
        } catch (const std::exception& e) {
            throw PipelineError(stage, e.what());
        }
    }
};

}  // namespace

StopPolicy make_stop_policy(const PipelineConfig& config) {
    StopPolicy policy = default_stop_policy();
    if (config.stopword_file) policy.stopwords = load_wordlist(*config.stopword_file);
    for (const auto& w : config.extra_drop) policy.extra_drop.insert(w);
    policy.drop_numeric = config.drop_numeric;
    policy.merge_plural_singular = config.merge_plural_singular;
    return policy;
}

std::vector<CountryMedianRow> country_medians(const Corpus& corpus,
                                              const std::vector<RecordScores>& scores,
                                              int min_n) {
    std::unordered_map<std::string, const LexScores*> by_id;
    for (const auto& s : scores) by_id.emplace(s.id, &s.scores);

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> buckets;
    for (const auto& rec : corpus.records) {
        if (!rec.publisher_country) continue;
        auto it = by_id.find(rec.id);
        if (it == by_id.end()) continue;
        auto& [fkgls, ks] = buckets[*rec.publisher_country];
        fkgls.push_back(it->second->fkgl);
        ks.push_back(it->second->yules_k);
    }

    std::vector<CountryMedianRow> rows;
    for (const auto& [country, cols] : buckets) {
        CountryMedianRow row;
        row.country = country;
        row.n = cols.first.size();
        row.median_fkgl = median_of(cols.first);
        row.median_k = median_of(cols.second);
        row.below_min_n = row.n < static_cast<size_t>(std::max(min_n, 0));
        rows.push_back(std::move(row));
    }
    return rows;
}

ReportBundle run_pipeline(const PipelineConfig& config) {
    if (!(config.slice_fraction > 0.0 && config.slice_fraction <= 0.5))
        throw PipelineError("config", "slice fraction must lie in (0, 0.5]");
    if (config.threads < 1) throw PipelineError("config", "threads must be >= 1");

    ReportBundle bundle;
    bundle.input_name = fs::path(config.input_path).filename().string();
    bundle.seed = config.seed;
    bundle.fraction = config.slice_fraction;
    bundle.window = config.jms_window;

    const StopPolicy policy = make_stop_policy(config);

    // -- load ---------------------------------------------------------------
    Corpus corpus = StageGuard{"load"}.run([&] {
        LoadReport report;
        return load_corpus(config.input_path, config.input_format, /*strict=*/true,
                           &report);
    });
    if (corpus.records.empty()) throw PipelineError("load", "corpus is empty");

    // -- score --------------------------------------------------------------
    bundle.scores = StageGuard{"score"}.run(
        [&] { return score_records(corpus, policy, config.threads); });

    std::unordered_map<std::string, size_t> score_index;
    for (size_t i = 0; i < bundle.scores.size(); ++i)
        score_index.emplace(bundle.scores[i].id, i);
    auto subset_of = [&](const Corpus& part) {
        std::vector<size_t> idx;
        idx.reserve(part.records.size());
        for (const auto& r : part.records) idx.push_back(score_index.at(r.id));
        return idx;
    };

    // -- summaries ----------------------------------------------------------
    StageGuard{"summaries"}.run([&]() -> int {
        std::vector<size_t> all(corpus.records.size());
        for (size_t i = 0; i < all.size(); ++i) all[i] = i;
        for (bool is_fkgl : {true, false}) {
            GroupSummary gs;
            gs.group_key = "overall";
            gs.group_value = "";
            gs.metric = is_fkgl ? "fkgl" : "yules_k";
            auto col = metric_column(bundle.scores, all, is_fkgl);
            gs.summary = describe(col);
            bundle.summaries.push_back(std::move(gs));
        }
        for (GroupKey key : config.group_keys) {
            std::string key_name = key == GroupKey::access    ? "access"
                                   : key == GroupKey::quartile ? "quartile"
                                                               : "publisher_country";
            for (const auto& [value, part] : group_by(corpus, key)) {
                for (bool is_fkgl : {true, false}) {
                    GroupSummary gs;
                    gs.group_key = key_name;
                    gs.group_value = value;
                    gs.metric = is_fkgl ? "fkgl" : "yules_k";
                    gs.summary = describe(metric_column(bundle.scores, subset_of(part),
                                                        is_fkgl));
                    bundle.summaries.push_back(std::move(gs));
                }
            }
        }
        return 0;
    });

    // -- networks -----------------------------------------------------------
    StageGuard{"networks"}.run([&]() -> int {
        auto build_network = [&](const std::string& name, const Corpus& part,
                                 bool titles, Window window) {
            std::vector<PreparedText> prepared;
            prepared.reserve(part.records.size());
            for (const auto& r : part.records)
                prepared.push_back(prepare_or_empty(titles ? r.title : r.mission, policy));

            NetworkAnalysis net;
            net.name = name;
            net.matrix = cooccurrence_matrix(prepared, window);
            if (net.matrix.counts.empty()) {
                bundle.skipped.push_back({name, "no co-occurrences"});
                return;
            }
            net.graph = build_graph(net.matrix);
            net.metrics = compute_report(net.graph, config.seed,
                                         BetweennessMode::inverse_weight, config.threads);
            net.top_terms = term_frequencies(prepared, kTopTerms);
            bundle.networks.push_back(std::move(net));
        };

        build_network("titles", corpus, /*titles=*/true, Window::whole_text);
        Corpus top = slice_by_metric_percentile(corpus, SliceMetric::sjr,
                                                config.slice_fraction, SliceEnd::top);
        Corpus bottom = slice_by_metric_percentile(corpus, SliceMetric::sjr,
                                                   config.slice_fraction, SliceEnd::bottom);
        build_network("jms_top", top, /*titles=*/false, config.jms_window);
        build_network("jms_bottom", bottom, /*titles=*/false, config.jms_window);
        return 0;
    });

    // -- benchmarks ---------------------------------------------------------
    StageGuard{"benchmarks"}.run([&]() -> int {
        std::vector<std::pair<std::string, RandomGraphSpec>> specs;
        if (!config.benchmarks.empty()) {
            for (size_t i = 0; i < config.benchmarks.size(); ++i)
                specs.emplace_back("benchmark_" + std::to_string(i), config.benchmarks[i]);
        } else {
            // Mirror each built network with a random graph of the same size,
            // wiring probability 0.05.
            uint64_t sub = 1;
            for (const auto& net : bundle.networks) {
                RandomGraphSpec spec;
                spec.n = static_cast<int>(net.graph.node_count());
                spec.p = 0.05;
                spec.seed = config.seed + sub++;
                if (spec.n < 2) {
                    bundle.skipped.push_back(
                        {"benchmark_" + net.name, "network too small to mirror"});
                    continue;
                }
                specs.emplace_back("benchmark_" + net.name, spec);
            }
        }
        for (const auto& [name, spec] : specs) {
            BenchmarkAnalysis b;
            b.name = name;
            b.spec = spec;
            b.metrics = benchmark_report(spec, config.threads);
            bundle.benchmarks.push_back(std::move(b));
        }
        return 0;
    });

    // -- tests --------------------------------------------------------------
    StageGuard{"tests"}.run([&]() -> int {
        std::vector<size_t> all(corpus.records.size());
        for (size_t i = 0; i < all.size(); ++i) all[i] = i;
        auto fkgl_col = metric_column(bundle.scores, all, true);
        auto k_col = metric_column(bundle.scores, all, false);

        // correlation between the two scores
        if (corpus.records.size() >= 3) {
            try {
                bundle.tests.push_back({"pearson", "fkgl_vs_yules_k",
                                        pearson(fkgl_col, k_col)});
            } catch (const std::invalid_argument& e) {
                bundle.skipped.push_back({"pearson", e.what()});
            }
        } else {
            bundle.skipped.push_back({"pearson", "fewer than 3 records"});
        }

        auto shapiro_for = [&](const std::string& label,
                               const std::vector<double>& col, const std::string& metric) {
            if (col.size() < 3 || col.size() > 5000) {
                bundle.skipped.push_back(
                    {"shapiro:" + label + ":" + metric, "n outside [3, 5000]"});
                return;
            }
            try {
                StatTest t{"shapiro", metric, shapiro_wilk(col)};
                t.result.group_labels = {label};
                bundle.tests.push_back(std::move(t));
            } catch (const std::invalid_argument& e) {
                bundle.skipped.push_back({"shapiro:" + label + ":" + metric, e.what()});
            }
        };

        // access: Shapiro per group + Wilcoxon between the two groups
        {
            auto groups = group_by(corpus, GroupKey::access);
            for (const auto& [label, part] : groups) {
                auto idx = subset_of(part);
                shapiro_for(label, metric_column(bundle.scores, idx, true), "fkgl");
                shapiro_for(label, metric_column(bundle.scores, idx, false), "yules_k");
            }
            auto oa = groups.find("open_access");
            auto non = groups.find("non_open_access");
            if (oa != groups.end() && non != groups.end()) {
                for (bool is_fkgl : {true, false}) {
                    StatTest t{"wilcoxon_access", is_fkgl ? "fkgl" : "yules_k",
                               wilcoxon_rank_sum(
                                   metric_column(bundle.scores, subset_of(oa->second),
                                                 is_fkgl),
                                   metric_column(bundle.scores, subset_of(non->second),
                                                 is_fkgl))};
                    t.result.group_labels = {"open_access", "non_open_access"};
                    bundle.tests.push_back(std::move(t));
                }
            } else {
                bundle.skipped.push_back({"wilcoxon_access", "insufficient groups"});
            }
        }

        // quartiles: Shapiro per group + omnibus Kruskal-Wallis + Dunn pairs
        {
            auto groups = group_by(corpus, GroupKey::quartile);
            std::vector<std::string> labels;
            std::vector<std::vector<size_t>> indices;
            for (const auto& [label, part] : groups) {
                if (label == "missing") continue;
                labels.push_back(label);
                indices.push_back(subset_of(part));
            }
            for (size_t gi = 0; gi < labels.size(); ++gi) {
                shapiro_for(labels[gi], metric_column(bundle.scores, indices[gi], true),
                            "fkgl");
                shapiro_for(labels[gi], metric_column(bundle.scores, indices[gi], false),
                            "yules_k");
            }
            if (labels.size() >= 2) {
                for (bool is_fkgl : {true, false}) {
                    const std::string metric = is_fkgl ? "fkgl" : "yules_k";
                    std::vector<std::vector<double>> cols;
                    for (const auto& idx : indices)
                        cols.push_back(metric_column(bundle.scores, idx, is_fkgl));
                    bundle.tests.push_back({"kruskal_quartile", metric,
                                            kruskal_wallis(cols, labels)});
                    for (auto& pair : dunn_pairwise(cols, config.adjust, labels))
                        bundle.tests.push_back({"dunn_quartile", metric, std::move(pair)});
                }
            } else {
                bundle.skipped.push_back({"kruskal_quartile", "insufficient groups"});
            }
        }
        return 0;
    });

    // -- country medians ------------------------------------------------------
    StageGuard{"country_medians"}.run([&]() -> int {
        bundle.country_medians =
            country_medians(corpus, bundle.scores, config.min_country_n);
        return 0;
    });

    return bundle;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out.push_back(c);
        if (c == '"') out.push_back('"');
    }
    out.push_back('"');
    return out;
}

class OutputSet {
  public:
    explicit OutputSet(const fs::path& dir) : dir_(dir) {}

    std::ofstream open(const std::string& name) {
        fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        created_.push_back(p);
        return out;
    }
    fs::path path(const std::string& name) {
        fs::path p = dir_ / name;
        created_.push_back(p);
        return p;
    }
    void rollback() {
        std::error_code ec;
        for (const auto& p : created_) fs::remove(p, ec);
    }

  private:
    fs::path dir_;
    std::vector<fs::path> created_;
};

ordered_json report_json(const GraphMetricsReport& m) {
    ordered_json j;
    j["nodes"] = m.node_count;
    j["edges"] = m.edge_count;
    j["density"] = m.density;
    if (m.apl_defined)
        j["average_path_length"] = m.average_path_length;
    else
        j["average_path_length"] = nullptr;
    j["modularity"] = m.modularity;
    j["communities"] = m.community_count;
    ordered_json top = ordered_json::array();
    for (const auto& [term, score] : m.top_betweenness) top.push_back({term, score});
    j["top_betweenness"] = top;
    return j;
}

ordered_json bundle_json(const ReportBundle& bundle) {
    ordered_json root;
    root["input"] = bundle.input_name;
    root["seed"] = bundle.seed;
    root["fraction"] = bundle.fraction;
    root["window"] = bundle.window == Window::sentence ? "sentence" : "text";

    ordered_json scores = ordered_json::array();
    for (const auto& s : bundle.scores)
        scores.push_back(
            {{"id", s.id}, {"fkgl", s.scores.fkgl}, {"yules_k", s.scores.yules_k}});
    root["scores"] = scores;

    ordered_json summaries = ordered_json::array();
    for (const auto& g : bundle.summaries)
        summaries.push_back({{"group_key", g.group_key},
                             {"group_value", g.group_value},
                             {"metric", g.metric},
                             {"n", g.summary.n},
                             {"min", g.summary.min},
                             {"q1", g.summary.q1},
                             {"median", g.summary.median},
                             {"mean", g.summary.mean},
                             {"q3", g.summary.q3},
                             {"max", g.summary.max},
                             {"iqr", g.summary.iqr}});
    root["summaries"] = summaries;

    ordered_json networks = ordered_json::array();
    for (const auto& net : bundle.networks) {
        ordered_json j;
        j["name"] = net.name;
        j["metrics"] = report_json(net.metrics);
        ordered_json terms = ordered_json::array();
        for (const auto& [term, count] : net.top_terms) terms.push_back({term, count});
        j["top_terms"] = terms;
        ordered_json betw = ordered_json::object();
        for (size_t i = 0; i < net.graph.node_count(); ++i)
            betw[net.graph.nodes[i]] = net.metrics.betweenness[i];
        j["betweenness"] = betw;
        networks.push_back(std::move(j));
    }
    root["networks"] = networks;

    ordered_json benchmarks = ordered_json::array();
    for (const auto& b : bundle.benchmarks) {
        ordered_json j;
        j["name"] = b.name;
        j["n"] = b.spec.n;
        j["p"] = b.spec.p;
        j["seed"] = b.spec.seed;
        j["metrics"] = report_json(b.metrics);
        benchmarks.push_back(std::move(j));
    }
    root["benchmarks"] = benchmarks;

    ordered_json tests = ordered_json::array();
    for (const auto& t : bundle.tests) {
        ordered_json j;
        j["family"] = t.family;
        j["metric"] = t.metric;
        j["test"] = to_string(t.result.test);
        j["groups"] = t.result.group_labels;
        j["statistic"] = t.result.statistic;
        j["p_value"] = t.result.p_value;
        if (t.result.effect_size)
            j["effect_size"] = *t.result.effect_size;
        else
            j["effect_size"] = nullptr;
        j["n"] = t.result.n;
        tests.push_back(std::move(j));
    }
    root["tests"] = tests;

    ordered_json skipped = ordered_json::array();
    for (const auto& s : bundle.skipped)
        skipped.push_back({{"name", s.name}, {"reason", s.reason}});
    root["skipped"] = skipped;

    ordered_json countries = ordered_json::array();
    for (const auto& c : bundle.country_medians)
        countries.push_back({{"country", c.country},
                             {"n", c.n},
                             {"median_fkgl", c.median_fkgl},
                             {"median_yules_k", c.median_k},
                             {"below_min_n", c.below_min_n}});
    root["country_medians"] = countries;
    return root;
}

}  // namespace

void write_bundle(const ReportBundle& bundle, const PipelineConfig& config) {
    const fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw PipelineError("export", "cannot create " + dir.string());

    OutputSet outputs(dir);
    const auto& formats = config.formats;
    try {
        if (formats.count(ExportFormat::json)) {
            auto out = outputs.open("bundle.json");
            out << bundle_json(bundle).dump(2) << "\n";
        }
        if (formats.count(ExportFormat::csv)) {
            {
                auto out = outputs.open("scores.csv");
                out << "id,fkgl,yules_k\n";
                for (const auto& s : bundle.scores)
                    out << csv_quote(s.id) << ',' << fmt_double(s.scores.fkgl) << ','
                        << fmt_double(s.scores.yules_k) << "\n";
            }
            {
                auto out = outputs.open("summary_stats.csv");
                out << "group_key,group_value,metric,n,min,q1,median,mean,q3,max,iqr\n";
                for (const auto& g : bundle.summaries)
                    out << g.group_key << ',' << csv_quote(g.group_value) << ','
                        << g.metric << ',' << g.summary.n << ',' << fmt_double(g.summary.min)
                        << ',' << fmt_double(g.summary.q1) << ','
                        << fmt_double(g.summary.median) << ',' << fmt_double(g.summary.mean)
                        << ',' << fmt_double(g.summary.q3) << ',' << fmt_double(g.summary.max)
                        << ',' << fmt_double(g.summary.iqr) << "\n";
            }
            {
                auto out = outputs.open("tests.csv");
                out << "family,metric,test,groups,statistic,p_value,effect_size,n\n";
                for (const auto& t : bundle.tests) {
                    std::string groups;
                    for (const auto& g : t.result.group_labels)
                        groups += (groups.empty() ? "" : "|") + g;
                    out << t.family << ',' << t.metric << ',' << to_string(t.result.test)
                        << ',' << csv_quote(groups) << ',' << fmt_double(t.result.statistic)
                        << ',' << fmt_double(t.result.p_value) << ','
                        << (t.result.effect_size ? fmt_double(*t.result.effect_size) : "")
                        << ',' << t.result.n << "\n";
                }
            }
            {
                auto out = outputs.open("network_metrics.csv");
                out << "name,nodes,edges,density,average_path_length,modularity,"
                       "communities\n";
                auto row = [&](const std::string& name, const GraphMetricsReport& m) {
                    out << name << ',' << m.node_count << ',' << m.edge_count << ','
                        << fmt_double(m.density) << ','
                        << (m.apl_defined ? fmt_double(m.average_path_length) : "") << ','
                        << fmt_double(m.modularity) << ',' << m.community_count << "\n";
                };
                for (const auto& net : bundle.networks) row(net.name, net.metrics);
                for (const auto& b : bundle.benchmarks) row(b.name, b.metrics);
            }
            {
                auto out = outputs.open("term_frequencies.csv");
                out << "network,rank,term,count\n";
                for (const auto& net : bundle.networks)
                    for (size_t i = 0; i < net.top_terms.size(); ++i)
                        out << net.name << ',' << i + 1 << ','
                            << csv_quote(net.top_terms[i].first) << ','
                            << net.top_terms[i].second << "\n";
            }
            {
                auto out = outputs.open("top_betweenness.csv");
                out << "network,rank,term,betweenness\n";
                for (const auto& net : bundle.networks)
                    for (size_t i = 0; i < net.metrics.top_betweenness.size(); ++i)
                        out << net.name << ',' << i + 1 << ','
                            << csv_quote(net.metrics.top_betweenness[i].first) << ','
                            << fmt_double(net.metrics.top_betweenness[i].second) << "\n";
            }
            {
                auto out = outputs.open("country_medians.csv");
                out << "country,n,median_fkgl,median_yules_k,below_min_n\n";
                for (const auto& c : bundle.country_medians)
                    out << c.country << ',' << c.n << ',' << fmt_double(c.median_fkgl)
                        << ',' << fmt_double(c.median_k) << ','
                        << (c.below_min_n ? "true" : "false") << "\n";
            }
            {
                auto out = outputs.open("notes.csv");
                out << "name,reason\n";
                for (const auto& s : bundle.skipped)
                    out << csv_quote(s.name) << ',' << csv_quote(s.reason) << "\n";
            }
            for (const auto& net : bundle.networks)
                write_matrix_csv(net.matrix,
                                 outputs.path(net.name + "_matrix.csv").string());
        }
        if (formats.count(ExportFormat::graphml))
            for (const auto& net : bundle.networks)
                export_graph(net.graph, net.metrics, GraphFormat::graphml,
                             outputs.path(net.name + ".graphml").string());
        if (formats.count(ExportFormat::dot))
            for (const auto& net : bundle.networks)
                export_graph(net.graph, net.metrics, GraphFormat::dot,
                             outputs.path(net.name + ".dot").string());
    } catch (const std::exception& e) {
        outputs.rollback();
        throw PipelineError("export", e.what());
    }
}

}  // namespace lexnet
