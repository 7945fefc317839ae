#pragma once

#include <map>
#include <vector>

#include "lexnet/textprep.hpp"

namespace lexnet {

/// Type-frequency spectrum of a token sample: spectrum[i] = number of
/// distinct types occurring exactly i times.
struct FrequencySpectrum {
    long n_tokens = 0;  // N
    long n_types = 0;   // V
    std::map<long, long> spectrum;
};

struct LexScores {
    double fkgl = 0.0;
    double yules_k = 0.0;
};

/// Flesch-Kincaid grade level:
///   0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59
/// Throws std::invalid_argument when word_count or sentence_count is zero.
double fkgl(const PreparedText& stats);

/// Throws std::invalid_argument on empty input.
FrequencySpectrum frequency_spectrum(const std::vector<Token>& tokens);

/// Yule's characteristic K:
///   10^4 * [ -1/N + sum_i f_v(i,N) * (i/N)^2 ]
/// Zero for all-unique samples; grows with repetition.
double yules_k(const FrequencySpectrum& spec);

/// FKGL on unfiltered counts plus Yule's K over all lowercase word tokens
/// (stopwords retained for both scores).
LexScores score_text(const std::string& text, const StopPolicy& policy);

}  // namespace lexnet
