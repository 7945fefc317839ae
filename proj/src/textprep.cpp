#include "lexnet/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace lexnet {

namespace {

bool is_ascii_letter(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Word characters: ASCII alphanumerics plus any non-ASCII byte, so that
// multi-byte UTF-8 sequences pass through intact.
bool is_word_char(unsigned char c) { return is_ascii_letter(c) || is_digit(c) || c >= 0x80; }

bool is_joiner(char c) { return c == '-' || c == '\''; }

std::string lowercase_ascii(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

// Tokens that end in 's' but are not plurals; consulted by the naive
// plural/singular merge.
const std::set<std::string>& plural_guard() {
    static const std::set<std::string> guard = {
        "as",    "is",     "its",    "this",  "thus",   "was",    "has",  "does",
        "goes",  "yes",    "his",    "us",    "plus",   "versus", "news", "series",
        "species", "analysis", "basis", "thesis", "crisis", "always", "perhaps",
        "across", "lens",  "gas",    "bias",  "status", "focus",  "corpus"};
    return guard;
}

std::string merge_plural(std::string word) {
    if (word.size() < 4) return word;
    if (plural_guard().count(word)) return word;
    if (word.back() != 's') return word;
    if (word[word.size() - 2] == 's') return word;  // -ss
    if (word[word.size() - 2] == 'u' || word[word.size() - 2] == 'i') return word;  // -us, -is
    auto ends_with = [&](const char* suf) {
        size_t len = std::char_traits<char>::length(suf);
        return word.size() >= len && word.compare(word.size() - len, len, suf) == 0;
    };
    if (ends_with("xes") || ends_with("zes") || ends_with("ches") || ends_with("shes"))
        return word.substr(0, word.size() - 2);
    return word.substr(0, word.size() - 1);
}

// The right single quotation mark (U+2019) doubles as an apostrophe.
constexpr const char* kCurlyApostrophe = "\xE2\x80\x99";

}  // namespace

std::set<std::string> load_wordlist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open word list " + path);
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t b = line.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t\r\n");
        words.insert(lowercase_ascii(line.substr(b, e - b + 1)));
    }
    return words;
}

const std::set<std::string>& default_abbreviations() {
    static const std::set<std::string> abbrevs = {
        "e.g", "i.e", "etc", "cf",  "vol",  "no",   "al",  "et",   "fig", "figs",
        "eq",  "ca",  "vs",  "dr",  "mr",   "mrs",  "ms",  "prof", "st",  "jr",
        "sr",  "inc", "ltd", "co",  "dept", "univ", "ed",  "eds",  "pp",  "approx"};
    return abbrevs;
}

std::vector<std::string> split_sentences(const std::string& text) {
    return split_sentences(text, default_abbreviations());
}

std::vector<std::string> split_sentences(const std::string& text,
                                         const std::set<std::string>& abbreviations) {
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw std::invalid_argument("empty text");

    std::vector<std::string> sentences;
    size_t start = first;
    size_t i = first;
    const size_t n = text.size();

    auto flush = [&](size_t end_exclusive) {
        size_t b = text.find_first_not_of(" \t\r\n", start);
        if (b == std::string::npos || b >= end_exclusive) return;
        size_t e = end_exclusive;
        while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
        if (e > b) sentences.push_back(text.substr(b, e - b));
    };

    while (i < n) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        // Swallow a run of terminators plus trailing closers.
        size_t end = i;
        while (end < n && (text[end] == '.' || text[end] == '!' || text[end] == '?')) ++end;
        size_t close = end;
        while (close < n && (text[close] == ')' || text[close] == ']' || text[close] == '"' ||
                             text[close] == '\''))
            ++close;

        bool boundary = true;
        if (close >= n) {
            // Terminator at end of input always closes the sentence.
        } else if (!std::isspace(static_cast<unsigned char>(text[close]))) {
            boundary = false;  // "3.14", "e.g" mid-token
        } else {
            size_t next = text.find_first_not_of(" \t\r\n", close);
            if (next != std::string::npos &&
                std::islower(static_cast<unsigned char>(text[next])))
                boundary = false;  // continuation like "e.g. this"
        }
        if (boundary && c == '.' && end - i == 1) {
            // Look back at the word directly before the period.
            size_t wb = i;
            while (wb > start && !std::isspace(static_cast<unsigned char>(text[wb - 1])))
                --wb;
            std::string word = lowercase_ascii(text.substr(wb, i - wb));
            while (!word.empty() && (word.front() == '(' || word.front() == '"' ||
                                     word.front() == '\''))
                word.erase(word.begin());
            if (abbreviations.count(word)) boundary = false;
        }

        if (boundary) {
            flush(close);
            start = close;
        }
        i = end > i ? end : i + 1;
    }
    flush(n);

    if (sentences.empty()) throw std::invalid_argument("empty text");
    return sentences;
}

std::vector<Token> tokenize(const std::string& sentence, const StopPolicy& policy) {
    std::string s = sentence;
    // Normalize curly apostrophes before the byte scan.
    for (size_t pos = 0; (pos = s.find(kCurlyApostrophe, pos)) != std::string::npos;)
        s.replace(pos, 3, "'");

    std::vector<Token> tokens;
    size_t i = 0;
    const size_t n = s.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (!is_word_char(c)) {
            ++i;
            continue;
        }
        std::string word;
        while (i < n) {
            unsigned char w = static_cast<unsigned char>(s[i]);
            if (is_word_char(w)) {
                word.push_back(static_cast<char>(w));
                ++i;
            } else if (is_joiner(s[i]) && i + 1 < n &&
                       is_word_char(static_cast<unsigned char>(s[i + 1])) && !word.empty()) {
                word.push_back(s[i]);
                ++i;
            } else {
                break;
            }
        }
        word = lowercase_ascii(std::move(word));
        if (policy.merge_plural_singular) word = merge_plural(std::move(word));
        if (!word.empty()) {
            Token t;
            t.surface = std::move(word);
            t.index = static_cast<int>(tokens.size());
            tokens.push_back(std::move(t));
        }
    }
    return tokens;
}

std::vector<Token> apply_stoppolicy(const std::vector<Token>& tokens,
                                    const StopPolicy& policy) {
    auto is_numeric = [](const std::string& w) {
        if (w.empty()) return false;
        for (char c : w)
            if (!is_digit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    std::vector<Token> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (policy.stopwords.count(t.surface)) continue;
        if (policy.extra_drop.count(t.surface)) continue;
        if (policy.drop_numeric && is_numeric(t.surface)) continue;
        out.push_back(t);
    }
    return out;
}

namespace {

bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

// Irregular words the vowel-group heuristic miscounts.
const std::unordered_map<std::string, int>& syllable_exceptions() {
    static const std::unordered_map<std::string, int> exc = {
        {"being", 2},   {"doing", 2},   {"going", 2},    {"seeing", 2}, {"quiet", 2},
        {"science", 2}, {"create", 2},  {"created", 3},  {"poem", 2},   {"ion", 2},
        {"reality", 4}, {"everyone", 3}, {"everywhere", 3}, {"business", 2}};
    return exc;
}

int count_letter_part(std::string_view part) {
    int groups = 0;
    bool in_group = false;
    for (size_t i = 0; i < part.size(); ++i) {
        char c = part[i];
        bool vowel = is_vowel(c);
        if (vowel && c == 'u' && i > 0 && part[i - 1] == 'q') vowel = false;
        if (vowel && !in_group) {
            ++groups;
            in_group = true;
        } else if (!vowel) {
            in_group = false;
        }
    }
    if (groups > 1 && part.size() >= 2 && part.back() == 'e' &&
        !is_vowel(part[part.size() - 2])) {
        // silent final e, except consonant+"le" ("table", "little")
        bool cons_le = part.size() >= 3 && part[part.size() - 2] == 'l' &&
                       !is_vowel(part[part.size() - 3]);
        if (!cons_le) --groups;
    }
    return groups;
}

}  // namespace

int count_syllables(std::string_view word) {
    if (word.empty()) throw std::invalid_argument("empty word");

    std::string lower(word);
    lower = lowercase_ascii(std::move(lower));
    auto it = syllable_exceptions().find(lower);
    if (it != syllable_exceptions().end()) return it->second;

    int total = 0;
    size_t i = 0;
    while (i < lower.size()) {
        unsigned char c = static_cast<unsigned char>(lower[i]);
        if (is_digit(c)) {
            while (i < lower.size() && is_digit(static_cast<unsigned char>(lower[i]))) ++i;
            total += 1;  // one syllable per digit group
        } else if (is_ascii_letter(c)) {
            size_t b = i;
            while (i < lower.size() && is_ascii_letter(static_cast<unsigned char>(lower[i])))
                ++i;
            total += count_letter_part(std::string_view(lower).substr(b, i - b));
        } else {
            ++i;
        }
    }
    return std::max(total, 1);
}

PreparedText prepare(const std::string& text, const StopPolicy& policy) {
    PreparedText out;
    std::vector<std::string> raw_sentences = split_sentences(text);

    int sent_index = 0;
    for (const auto& sentence : raw_sentences) {
        std::vector<Token> tokens = tokenize(sentence, policy);
        for (auto& t : tokens) t.sentence = sent_index;
        for (const auto& t : tokens) out.syllable_count += count_syllables(t.surface);
        out.word_count += static_cast<long>(tokens.size());
        out.filtered_sentences.push_back(apply_stoppolicy(tokens, policy));
        out.sentences.push_back(std::move(tokens));
        ++sent_index;
    }
    out.sentence_count = static_cast<long>(out.sentences.size());
    return out;
}

}  // namespace lexnet
