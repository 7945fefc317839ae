#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lexnet {

struct Token {
    std::string surface;  // lowercase, no whitespace or outer punctuation
    int sentence = 0;
    int index = 0;

    bool operator==(const Token&) const = default;
};

/// Filtering rules applied between tokenization and network construction.
/// `stopwords` and `extra_drop` must be lowercase.
struct StopPolicy {
    std::set<std::string> stopwords;
    std::set<std::string> extra_drop;
    bool drop_numeric = false;
    bool merge_plural_singular = false;
};

/// Bundled English stopword list plus extra_drop = {"journal", "journals"}.
StopPolicy default_stop_policy();

/// Version tag of the bundled stopword list.
const char* stopword_list_version();

/// The bundled abbreviation guard list used by split_sentences (entries
/// lowercase, no trailing period: "e.g", "i.e", "vol", ...).
const std::set<std::string>& default_abbreviations();

/// One lowercase entry per line, '#' starts a comment. Used to override the
/// stopword or abbreviation lists from plain-text files.
std::set<std::string> load_wordlist(const std::string& path);

/// Split raw text into sentences on terminal {. ! ?}, guarded by an
/// abbreviation list. Non-empty input yields at least one sentence.
/// Throws std::invalid_argument on empty/whitespace-only input.
std::vector<std::string> split_sentences(const std::string& text);
std::vector<std::string> split_sentences(const std::string& text,
                                         const std::set<std::string>& abbreviations);

/// Lowercase word tokens with punctuation stripped; internal hyphens and
/// apostrophes retained. When policy.merge_plural_singular is set, a naive
/// plural normalization is applied to each token.
std::vector<Token> tokenize(const std::string& sentence, const StopPolicy& policy = {});

/// Remove stopwords, extra_drop entries and (optionally) numeric tokens.
/// Relative order of survivors is preserved.
std::vector<Token> apply_stoppolicy(const std::vector<Token>& tokens, const StopPolicy& policy);

/// Heuristic syllable count: maximal vowel groups (a,e,i,o,u,y), silent
/// final 'e' unless consonant+"le", one syllable per digit group, floor 1.
int count_syllables(std::string_view word);

struct PreparedText {
    std::vector<std::vector<Token>> sentences;           // pre-filter
    std::vector<std::vector<Token>> filtered_sentences;  // post stop policy
    long word_count = 0;                                 // pre-filter tokens
    long sentence_count = 0;
    long syllable_count = 0;
};

/// Full preprocessing of one document. Counts are computed on the
/// pre-filter token stream; the stop policy only shapes filtered_sentences.
PreparedText prepare(const std::string& text, const StopPolicy& policy);

}  // namespace lexnet
