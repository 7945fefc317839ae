#include "lexnet/lexmetrics.hpp"

#include <stdexcept>
#include <unordered_map>

namespace lexnet {

double fkgl(const PreparedText& stats) {
    if (stats.word_count < 1) throw std::invalid_argument("fkgl: zero words");
    if (stats.sentence_count < 1) throw std::invalid_argument("fkgl: zero sentences");
    double words = static_cast<double>(stats.word_count);
    double sentences = static_cast<double>(stats.sentence_count);
    double syllables = static_cast<double>(stats.syllable_count);
    return 0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59;
}

FrequencySpectrum frequency_spectrum(const std::vector<Token>& tokens) {
    if (tokens.empty()) throw std::invalid_argument("frequency_spectrum: no tokens");

    std::unordered_map<std::string, long> freq;
    for (const auto& t : tokens) ++freq[t.surface];

    FrequencySpectrum spec;
    spec.n_tokens = static_cast<long>(tokens.size());
    spec.n_types = static_cast<long>(freq.size());
    for (const auto& [term, count] : freq) ++spec.spectrum[count];
    return spec;
}

double yules_k(const FrequencySpectrum& spec) {
    // K = 1e4 * (sum_i f_v(i,N) i^2 - N) / N^2. The numerator stays in
    // integer arithmetic (it is bounded by N^2), so an all-unique sample
    // yields exactly zero.
    const long long n = spec.n_tokens;
    long long weighted = 0;
    for (const auto& [i, f] : spec.spectrum) weighted += f * i * i;
    return 1e4 * static_cast<double>(weighted - n) /
           (static_cast<double>(n) * static_cast<double>(n));
}

LexScores score_text(const std::string& text, const StopPolicy& policy) {
    PreparedText prepared = prepare(text, policy);

    LexScores scores;
    scores.fkgl = fkgl(prepared);

    std::vector<Token> all_tokens;
    for (const auto& sentence : prepared.sentences)
        all_tokens.insert(all_tokens.end(), sentence.begin(), sentence.end());
    scores.yules_k = yules_k(frequency_spectrum(all_tokens));
    return scores;
}

}  // namespace lexnet
