#include "lexnet/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lexnet {

namespace {

const std::vector<std::string> kColumns = {
    "id",  "title",          "mission",  "jms_kind", "sjr",
    "h_index", "coverage_years", "quartile", "access",   "publisher_country"};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string now_iso8601() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

// RFC 4180 record reader: quoted fields, doubled quotes, CRLF or LF line
// endings, embedded newlines inside quotes. Returns false on EOF.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool saw_any = false;
    int c;
    while ((c = in.get()) != EOF) {
        saw_any = true;
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else if (ch == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            fields.push_back(field);
            return true;
        } else {
            field.push_back(ch);
        }
    }
    if (!saw_any) return false;
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(field);
    return true;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out.push_back(c);
        if (c == '"') out.push_back('"');
    }
    out.push_back('"');
    return out;
}

std::optional<JmsKind> parse_jms_kind(const std::string& s) {
    if (s == "overview") return JmsKind::overview;
    if (s == "aims_scope_other") return JmsKind::aims_scope_other;
    if (s == "both") return JmsKind::both;
    return std::nullopt;
}

std::optional<Quartile> parse_quartile(const std::string& s) {
    if (s == "Q1") return Quartile::q1;
    if (s == "Q2") return Quartile::q2;
    if (s == "Q3") return Quartile::q3;
    if (s == "Q4") return Quartile::q4;
    return std::nullopt;
}

std::optional<Access> parse_access(const std::string& s) {
    if (s == "open_access") return Access::open_access;
    if (s == "non_open_access") return Access::non_open_access;
    return std::nullopt;
}

bool valid_country(const std::string& s) {
    return s.size() == 2 && std::isupper(static_cast<unsigned char>(s[0])) &&
           std::isupper(static_cast<unsigned char>(s[1]));
}

// Validates one row already split into name -> raw string. Returns the record
// or appends the reason to errs.
std::optional<JournalRecord> parse_record(
    const std::vector<std::pair<std::string, std::string>>& fields, size_t row,
    std::vector<RowError>& errs) {
    JournalRecord rec;
    size_t before = errs.size();
    for (const auto& [name, raw] : fields) {
        std::string value = trim(raw);
        if (name == "id") {
            if (value.empty())
                errs.push_back({row, name, "empty id"});
            else
                rec.id = value;
        } else if (name == "title") {
            rec.title = value;
        } else if (name == "mission") {
            if (value.empty())
                errs.push_back({row, name, "empty JMS"});
            else
                rec.mission = value;
        } else if (name == "jms_kind") {
            auto k = parse_jms_kind(value);
            if (!k)
                errs.push_back({row, name, "invalid jms_kind \"" + value + "\""});
            else
                rec.jms_kind = *k;
        } else if (name == "sjr") {
            try {
                size_t pos = 0;
                double v = std::stod(value, &pos);
                if (pos != value.size() || std::isnan(v) || v < 0) throw std::exception();
                rec.sjr = v;
            } catch (...) {
                errs.push_back({row, name, "invalid sjr \"" + value + "\""});
            }
        } else if (name == "h_index") {
            try {
                size_t pos = 0;
                int v = std::stoi(value, &pos);
                if (pos != value.size() || v < 0) throw std::exception();
                rec.h_index = v;
            } catch (...) {
                errs.push_back({row, name, "invalid h_index \"" + value + "\""});
            }
        } else if (name == "coverage_years") {
            try {
                size_t pos = 0;
                int v = std::stoi(value, &pos);
                if (pos != value.size() || v < 1) throw std::exception();
                rec.coverage_years = v;
            } catch (...) {
                errs.push_back({row, name, "invalid coverage_years \"" + value + "\""});
            }
        } else if (name == "quartile") {
            if (value.empty()) {
                rec.quartile = std::nullopt;
            } else {
                auto q = parse_quartile(value);
                if (!q)
                    errs.push_back({row, name, "invalid quartile \"" + value + "\""});
                else
                    rec.quartile = q;
            }
        } else if (name == "access") {
            auto a = parse_access(value);
            if (!a)
                errs.push_back({row, name, "invalid access \"" + value + "\""});
            else
                rec.access = *a;
        } else if (name == "publisher_country") {
            if (value.empty()) {
                rec.publisher_country = std::nullopt;
            } else if (!valid_country(value)) {
                errs.push_back({row, name, "invalid country code \"" + value + "\""});
            } else {
                rec.publisher_country = value;
            }
        }
    }
    if (errs.size() != before) return std::nullopt;
    return rec;
}

Corpus load_csv(const std::string& path, LoadReport& report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open " + path);

    std::vector<std::string> header;
    if (!read_csv_record(in, header)) throw CorpusError(path + ": empty file");
    if (!header.empty() && header[0].size() >= 3 && header[0].compare(0, 3, "\xEF\xBB\xBF") == 0)
        header[0] = header[0].substr(3);  // UTF-8 BOM
    if (header != kColumns) {
        std::string want;
        for (const auto& c : kColumns) want += (want.empty() ? "" : ",") + c;
        throw CorpusError(path + ": malformed header (expected \"" + want + "\")");
    }

    Corpus corpus;
    std::vector<std::string> fields;
    size_t row = 0;
    while (read_csv_record(in, fields)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
        report.rows_read++;
        if (fields.size() != kColumns.size()) {
            report.errors.push_back(
                {row, "", "expected " + std::to_string(kColumns.size()) + " fields, got " +
                              std::to_string(fields.size())});
            continue;
        }
        std::vector<std::pair<std::string, std::string>> named;
        for (size_t i = 0; i < kColumns.size(); ++i) named.emplace_back(kColumns[i], fields[i]);
        if (auto rec = parse_record(named, row, report.errors)) {
            corpus.records.push_back(std::move(*rec));
            report.rows_ok++;
        }
    }
    return corpus;
}

Corpus load_jsonl(const std::string& path, LoadReport& report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open " + path);

    Corpus corpus;
    std::string line;
    size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::string t = trim(line);
        if (t.empty()) continue;
        report.rows_read++;
        nlohmann::json j = nlohmann::json::parse(t, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            report.errors.push_back({row, "", "invalid JSON object"});
            continue;
        }
        std::vector<std::pair<std::string, std::string>> named;
        size_t before = report.errors.size();
        for (const auto& col : kColumns) {
            if (!j.contains(col) || j[col].is_null()) {
                if (col == "quartile" || col == "publisher_country") {
                    named.emplace_back(col, "");
                    continue;
                }
                report.errors.push_back({row, col, "missing field"});
                continue;
            }
            const auto& v = j[col];
            if (v.is_string())
                named.emplace_back(col, v.get<std::string>());
            else if (v.is_number())
                named.emplace_back(col, v.dump());
            else
                report.errors.push_back({row, col, "unsupported JSON type"});
        }
        if (report.errors.size() != before) continue;
        if (auto rec = parse_record(named, row, report.errors)) {
            corpus.records.push_back(std::move(*rec));
            report.rows_ok++;
        }
    }
    return corpus;
}

}  // namespace

std::string to_string(JmsKind k) {
    switch (k) {
        case JmsKind::overview: return "overview";
        case JmsKind::aims_scope_other: return "aims_scope_other";
        case JmsKind::both: return "both";
    }
    return "";
}

std::string to_string(Quartile q) {
    switch (q) {
        case Quartile::q1: return "Q1";
        case Quartile::q2: return "Q2";
        case Quartile::q3: return "Q3";
        case Quartile::q4: return "Q4";
    }
    return "";
}

std::string to_string(Access a) {
    return a == Access::open_access ? "open_access" : "non_open_access";
}

Corpus load_corpus(const std::string& path, CorpusFormat format, bool strict,
                   LoadReport* report) {
    LoadReport local;
    LoadReport& rep = report ? *report : local;
    rep = LoadReport{};

    Corpus corpus = format == CorpusFormat::csv ? load_csv(path, rep) : load_jsonl(path, rep);
    corpus.source_path = path;
    corpus.loaded_at = now_iso8601();

    std::set<std::string> seen;
    for (const auto& rec : corpus.records) {
        if (!seen.insert(rec.id).second)
            throw CorpusError(path + ": duplicate id \"" + rec.id + "\"");
    }

    if (strict && !rep.errors.empty()) {
        std::ostringstream msg;
        msg << path << ": " << rep.errors.size() << " invalid row(s); first: row "
            << rep.errors[0].row;
        if (!rep.errors[0].field.empty()) msg << " field " << rep.errors[0].field;
        msg << ": " << rep.errors[0].reason;
        throw CorpusError(msg.str());
    }
    return corpus;
}

void write_corpus(const Corpus& corpus, const std::string& path, CorpusFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CorpusError("cannot write " + path);

    if (format == CorpusFormat::csv) {
        for (size_t i = 0; i < kColumns.size(); ++i)
            out << (i ? "," : "") << kColumns[i];
        out << "\n";
        for (const auto& r : corpus.records) {
            std::ostringstream sjr;
            sjr.precision(17);
            sjr << r.sjr;
            out << csv_escape(r.id) << ',' << csv_escape(r.title) << ','
                << csv_escape(r.mission) << ',' << to_string(r.jms_kind) << ',' << sjr.str()
                << ',' << r.h_index << ',' << r.coverage_years << ','
                << (r.quartile ? to_string(*r.quartile) : "") << ',' << to_string(r.access)
                << ',' << (r.publisher_country ? *r.publisher_country : "") << "\n";
        }
    } else {
        for (const auto& r : corpus.records) {
            nlohmann::ordered_json j;
            j["id"] = r.id;
            j["title"] = r.title;
            j["mission"] = r.mission;
            j["jms_kind"] = to_string(r.jms_kind);
            j["sjr"] = r.sjr;
            j["h_index"] = r.h_index;
            j["coverage_years"] = r.coverage_years;
            if (r.quartile)
                j["quartile"] = to_string(*r.quartile);
            else
                j["quartile"] = nullptr;
            j["access"] = to_string(r.access);
            if (r.publisher_country)
                j["publisher_country"] = *r.publisher_country;
            else
                j["publisher_country"] = nullptr;
            out << j.dump() << "\n";
        }
    }
    if (!out) throw CorpusError("write failed for " + path);
}

Corpus slice_by_metric_percentile(const Corpus& corpus, SliceMetric metric, double fraction,
                                  SliceEnd end) {
    if (corpus.records.empty()) throw CorpusError("slice on empty corpus");
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw CorpusError("slice fraction must lie in (0, 1]");

    auto metric_of = [metric](const JournalRecord& r) -> std::optional<double> {
        switch (metric) {
            case SliceMetric::sjr:
                if (std::isnan(r.sjr)) return std::nullopt;
                return r.sjr;
        }
        return std::nullopt;
    };

    std::string missing;
    for (const auto& r : corpus.records)
        if (!metric_of(r)) missing += (missing.empty() ? "" : ", ") + r.id;
    if (!missing.empty()) throw CorpusError("metric absent for record(s): " + missing);

    std::vector<size_t> order(corpus.records.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        double va = *metric_of(corpus.records[a]);
        double vb = *metric_of(corpus.records[b]);
        if (va != vb) return end == SliceEnd::top ? va > vb : va < vb;
        return corpus.records[a].id < corpus.records[b].id;
    });

    size_t take = static_cast<size_t>(
        std::ceil(fraction * static_cast<double>(corpus.records.size())));
    take = std::min(take, corpus.records.size());

    Corpus out;
    out.source_path = corpus.source_path;
    out.loaded_at = corpus.loaded_at;
    out.records.reserve(take);
    for (size_t i = 0; i < take; ++i) out.records.push_back(corpus.records[order[i]]);
    return out;
}

std::map<std::string, Corpus> group_by(const Corpus& corpus, GroupKey key) {
    std::map<std::string, Corpus> groups;
    for (const auto& r : corpus.records) {
        std::string bucket;
        switch (key) {
            case GroupKey::access: bucket = to_string(r.access); break;
            case GroupKey::quartile:
                bucket = r.quartile ? to_string(*r.quartile) : "missing";
                break;
            case GroupKey::publisher_country:
                bucket = r.publisher_country ? *r.publisher_country : "missing";
                break;
        }
        auto& g = groups[bucket];
        if (g.records.empty()) {
            g.source_path = corpus.source_path;
            g.loaded_at = corpus.loaded_at;
        }
        g.records.push_back(r);
    }
    return groups;
}

}  // namespace lexnet
