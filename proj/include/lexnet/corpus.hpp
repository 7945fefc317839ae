#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lexnet {

enum class JmsKind { overview, aims_scope_other, both };
enum class Quartile { q1, q2, q3, q4 };
enum class Access { open_access, non_open_access };

std::string to_string(JmsKind k);
std::string to_string(Quartile q);
std::string to_string(Access a);

/// One journal: identity, mission-statement prose, and the metadata used
/// for slicing and group comparisons.
struct JournalRecord {
    std::string id;
    std::string title;
    std::string mission;
    JmsKind jms_kind = JmsKind::both;
    double sjr = 0.0;
    int h_index = 0;
    int coverage_years = 1;
    std::optional<Quartile> quartile;
    Access access = Access::non_open_access;
    std::optional<std::string> publisher_country;  // ISO-3166 alpha-2
};

struct Corpus {
    std::vector<JournalRecord> records;
    std::string source_path;
    std::string loaded_at;  // ISO-8601, informational only

    size_t size() const { return records.size(); }
};

enum class CorpusFormat { csv, jsonl };

struct RowError {
    size_t row = 0;  // 1-based data row (header not counted)
    std::string field;
    std::string reason;
};

struct LoadReport {
    std::vector<RowError> errors;
    size_t rows_read = 0;
    size_t rows_ok = 0;
};

class CorpusError : public std::runtime_error {
  public:
    explicit CorpusError(const std::string& what) : std::runtime_error(what) {}
};

/// Load a corpus from a CSV (RFC 4180, fixed header) or JSON-lines file.
/// A malformed header or a duplicate id is always fatal. Invalid rows are
/// collected into `report`; with strict=true any invalid row aborts the load.
Corpus load_corpus(const std::string& path, CorpusFormat format,
                   bool strict = true, LoadReport* report = nullptr);

void write_corpus(const Corpus& corpus, const std::string& path, CorpusFormat format);

enum class SliceMetric { sjr };
enum class SliceEnd { top, bottom };

/// The ceil(fraction*n) records ranked by the metric, descending for `top`,
/// ascending for `bottom`. Ties broken by id ascending.
Corpus slice_by_metric_percentile(const Corpus& corpus, SliceMetric metric,
                                  double fraction, SliceEnd end);

enum class GroupKey { access, quartile, publisher_country };

/// Partition records by a metadata key. Records with the key absent are
/// collected under the "missing" bucket.
std::map<std::string, Corpus> group_by(const Corpus& corpus, GroupKey key);

}  // namespace lexnet
