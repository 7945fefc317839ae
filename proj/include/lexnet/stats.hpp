#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lexnet {

struct DescriptiveSummary {
    double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0;
    double iqr = 0;
    size_t n = 0;
};

enum class TestKind { shapiro_wilk, wilcoxon_rank_sum, kruskal_wallis, pearson, dunn_pair };

std::string to_string(TestKind t);

struct TestResult {
    TestKind test;
    double statistic = 0.0;
    double p_value = 1.0;
    std::optional<double> effect_size;  // r for Wilcoxon/Pearson, eta^2[H] for KW/Dunn
    std::vector<std::string> group_labels;
    size_t n = 0;
};

/// Five-number summary plus mean and IQR. Quartiles by linear interpolation
/// of order statistics (the "type 7" rule).
DescriptiveSummary describe(std::span<const double> values);

/// Sample correlation with two-sided p via t = r*sqrt((n-2)/(1-r^2))
/// against Student-t(n-2). Requires equal lengths >= 3 and nonzero variance.
TestResult pearson(std::span<const double> x, std::span<const double> y);

/// Shapiro-Wilk W with p from the Royston AS R94 approximation.
/// Valid for 3 <= n <= 5000; throws on constant samples.
TestResult shapiro_wilk(std::span<const double> values);

/// Rank-sum test with midrank ties. Exact p by enumeration when
/// n_a+n_b <= 25 and there are no ties, otherwise normal approximation with
/// tie and continuity corrections. statistic = rank sum of the first group;
/// effect size r = |Z|/sqrt(n_a+n_b).
TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

/// Kruskal-Wallis H with tie correction; p via chi-squared on k-1 df;
/// effect size eta^2[H] = (H - k + 1)/(n - k). Labels, when given, must
/// parallel groups and are carried into the result.
TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                          const std::vector<std::string>& labels = {});

enum class PAdjust { none, holm };

/// Dunn's z for every group pair on the pooled midranks, two-sided p with
/// optional Holm adjustment. The omnibus eta^2[H] is attached to each pair.
std::vector<TestResult> dunn_pairwise(const std::vector<std::vector<double>>& groups,
                                      PAdjust adjust = PAdjust::none,
                                      const std::vector<std::string>& labels = {});

/// Midranks of a sample (average rank for ties), 1-based.
std::vector<double> midranks(std::span<const double> values);

}  // namespace lexnet
