#include "lexnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <gsl/gsl_cdf.h>

namespace lexnet {

std::string to_string(TestKind t) {
    switch (t) {
        case TestKind::shapiro_wilk: return "shapiro_wilk";
        case TestKind::wilcoxon_rank_sum: return "wilcoxon_rank_sum";
        case TestKind::kruskal_wallis: return "kruskal_wallis";
        case TestKind::pearson: return "pearson";
        case TestKind::dunn_pair: return "dunn_pair";
    }
    return "";
}

std::vector<double> midranks(std::span<const double> values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

namespace {

// sum over tied groups of (t^3 - t) in a sorted pooled sample
double tie_term(const std::vector<double>& sorted) {
    double sum = 0.0;
    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        double t = static_cast<double>(j - i + 1);
        sum += t * t * t - t;
        i = j + 1;
    }
    return sum;
}

double quantile_type7(const std::vector<double>& sorted, double p) {
    const size_t n = sorted.size();
    if (n == 1) return sorted[0];
    double h = p * static_cast<double>(n - 1);
    size_t lo = static_cast<size_t>(std::floor(h));
    if (lo >= n - 1) return sorted[n - 1];
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double normal_sf(double z) { return gsl_cdf_ugaussian_Q(z); }

double polyval(const double* coef, int count, double x) {
    // coef[0] + coef[1] x + ... (AS R94 ordering)
    double acc = 0.0;
    for (int i = count - 1; i >= 0; --i) acc = acc * x + coef[i];
    return acc;
}

}  // namespace

DescriptiveSummary describe(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("describe on empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    DescriptiveSummary s;
    s.n = sorted.size();
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile_type7(sorted, 0.25);
    s.median = quantile_type7(sorted, 0.50);
    s.q3 = quantile_type7(sorted, 0.75);
    s.iqr = s.q3 - s.q1;
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
             static_cast<double>(sorted.size());
    return s;
}

TestResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    const size_t n = x.size();
    if (n < 3) throw std::invalid_argument("pearson: need n >= 3");

    double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("pearson: zero variance");

    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    TestResult res;
    res.test = TestKind::pearson;
    res.statistic = r;
    res.effect_size = r;
    res.n = n;
    double denom = 1.0 - r * r;
    if (denom <= 0.0) {
        res.p_value = 0.0;
    } else {
        double t = r * std::sqrt(static_cast<double>(n - 2) / denom);
        res.p_value =
            std::min(1.0, 2.0 * gsl_cdf_tdist_Q(std::fabs(t), static_cast<double>(n - 2)));
    }
    return res;
}

// AS R94 (Royston 1995): W statistic plus its p-value approximation.
TestResult shapiro_wilk(std::span<const double> values) {
    const int n = static_cast<int>(values.size());
    if (n < 3 || n > 5000)
        throw std::invalid_argument("shapiro_wilk: n must lie in [3, 5000]");

    std::vector<double> x(values.begin(), values.end());
    std::sort(x.begin(), x.end());
    if (x.back() - x.front() == 0.0)
        throw std::invalid_argument("shapiro_wilk: sample is constant");

    const int n2 = n / 2;
    std::vector<double> a(static_cast<size_t>(n2), 0.0);

    if (n == 3) {
        a[0] = std::sqrt(0.5);
    } else {
        const double an = static_cast<double>(n);
        const double an25 = an + 0.25;
        double summ2 = 0.0;
        for (int i = 1; i <= n2; ++i) {
            a[static_cast<size_t>(i - 1)] =
                gsl_cdf_ugaussian_Pinv((static_cast<double>(i) - 0.375) / an25);
            summ2 += a[static_cast<size_t>(i - 1)] * a[static_cast<size_t>(i - 1)];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(an);

        static const double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685,
                                     -2.706056};
        static const double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633,
                                     -3.582633};
        const double a1 = polyval(c1, 6, rsn) - a[0] / ssumm2;

        int i1;
        double fac;
        if (n > 5) {
            i1 = 3;
            const double a2 = -a[1] / ssumm2 + polyval(c2, 6, rsn);
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[1] = a2;
        } else {
            i1 = 2;
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1));
        }
        a[0] = a1;
        for (int i = i1; i <= n2; ++i) a[static_cast<size_t>(i - 1)] /= -fac;
    }

    double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double ssq = 0.0;
    for (double v : x) ssq += (v - mean) * (v - mean);
    double num = 0.0;
    for (int i = 1; i <= n2; ++i)
        num += a[static_cast<size_t>(i - 1)] *
               (x[static_cast<size_t>(n - i)] - x[static_cast<size_t>(i - 1)]);
    double w = num * num / ssq;
    w = std::min(w, 1.0);

    TestResult res;
    res.test = TestKind::shapiro_wilk;
    res.statistic = w;
    res.n = static_cast<size_t>(n);

    if (n == 3) {
        const double pi6 = 1.90985931710274;   // 6/pi
        const double stqr = 1.04719755119660;  // asin(sqrt(3/4))
        double pw = pi6 * (std::asin(std::sqrt(w)) - stqr);
        res.p_value = std::clamp(pw, 0.0, 1.0);
        return res;
    }

    const double an = static_cast<double>(n);
    double y = std::log(1.0 - w);
    double m, s;
    if (n <= 11) {
        static const double g[2] = {-2.273, 0.459};
        static const double c3[4] = {0.544, -0.39978, 0.025054, -6.714e-4};
        static const double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
        const double gamma = polyval(g, 2, an);
        if (y >= gamma) {
            res.p_value = 0.0;
            return res;
        }
        y = -std::log(gamma - y);
        m = polyval(c3, 4, an);
        s = std::exp(polyval(c4, 4, an));
    } else {
        static const double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
        static const double c6[3] = {-0.4803, -0.082676, 0.0030302};
        const double logn = std::log(an);
        m = polyval(c5, 4, logn);
        s = std::exp(polyval(c6, 3, logn));
    }
    res.p_value = normal_sf((y - m) / s);
    return res;
}

namespace {

bool has_ties(std::vector<double> pooled) {
    std::sort(pooled.begin(), pooled.end());
    return std::adjacent_find(pooled.begin(), pooled.end()) != pooled.end();
}

// Exact two-sided p for the rank-sum W of group a: subset-sum counting over
// ranks {1..N} (valid only without ties).
double exact_rank_sum_p(int na, int nb, long long w) {
    const int n = na + nb;
    const long long max_sum = static_cast<long long>(n) * (n + 1) / 2;
    // count[k][s] = number of k-subsets of {1..n} with rank sum s
    std::vector<std::vector<double>> count(
        static_cast<size_t>(na + 1),
        std::vector<double>(static_cast<size_t>(max_sum + 1), 0.0));
    count[0][0] = 1.0;
    for (int r = 1; r <= n; ++r)
        for (int k = std::min(na, r); k >= 1; --k)
            for (long long s = max_sum; s >= r; --s)
                count[static_cast<size_t>(k)][static_cast<size_t>(s)] +=
                    count[static_cast<size_t>(k - 1)][static_cast<size_t>(s - r)];

    double total = 0.0, le = 0.0, ge = 0.0;
    for (long long s = 0; s <= max_sum; ++s) {
        double c = count[static_cast<size_t>(na)][static_cast<size_t>(s)];
        total += c;
        if (s <= w) le += c;
        if (s >= w) ge += c;
    }
    return std::min(1.0, 2.0 * std::min(le / total, ge / total));
}

}  // namespace

TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("wilcoxon_rank_sum: empty group");

    const size_t na = a.size(), nb = b.size(), n = na + nb;
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<double> ranks = midranks(pooled);

    double w = 0.0;
    for (size_t i = 0; i < na; ++i) w += ranks[i];

    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    const double nn = static_cast<double>(n);
    const double mean = static_cast<double>(na) * (nn + 1.0) / 2.0;
    const double ties = tie_term(sorted);
    double var = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                 ((nn + 1.0) - ties / (nn * (nn - 1.0)));

    double z = 0.0;
    if (var > 0.0) {
        double diff = w - mean;
        double cc = diff > 0 ? -0.5 : (diff < 0 ? 0.5 : 0.0);  // continuity correction
        z = (diff + cc) / std::sqrt(var);
    }

    TestResult res;
    res.test = TestKind::wilcoxon_rank_sum;
    res.statistic = w;
    res.n = n;
    res.effect_size = std::fabs(z) / std::sqrt(nn);

    const bool tied = has_ties(pooled);
    if (!tied && n <= 25) {
        res.p_value = exact_rank_sum_p(static_cast<int>(na), static_cast<int>(nb),
                                       static_cast<long long>(std::llround(w)));
    } else if (var == 0.0) {
        res.p_value = 1.0;
    } else {
        res.p_value = std::min(1.0, 2.0 * normal_sf(std::fabs(z)));
    }
    return res;
}

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                          const std::vector<std::string>& labels) {
    if (groups.size() < 2)
        throw std::invalid_argument("kruskal_wallis: need at least 2 groups");
    for (const auto& g : groups)
        if (g.empty()) throw std::invalid_argument("kruskal_wallis: empty group");

    const size_t k = groups.size();
    std::vector<double> pooled;
    for (const auto& g : groups) pooled.insert(pooled.end(), g.begin(), g.end());
    const double n = static_cast<double>(pooled.size());

    std::vector<double> ranks = midranks(pooled);
    double h0 = 0.0;
    size_t offset = 0;
    for (const auto& g : groups) {
        double rsum = 0.0;
        for (size_t i = 0; i < g.size(); ++i) rsum += ranks[offset + i];
        h0 += rsum * rsum / static_cast<double>(g.size());
        offset += g.size();
    }
    h0 = 12.0 / (n * (n + 1.0)) * h0 - 3.0 * (n + 1.0);

    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    const double correction = 1.0 - tie_term(sorted) / (n * n * n - n);

    TestResult res;
    res.test = TestKind::kruskal_wallis;
    res.n = pooled.size();
    res.group_labels = labels;
    if (correction == 0.0) {
        // every pooled value identical
        res.statistic = 0.0;
        res.p_value = 1.0;
        res.effect_size = 0.0;
        return res;
    }
    double h = h0 / correction;
    if (std::fabs(h) < 1e-12) h = 0.0;
    res.statistic = h;
    res.p_value = h <= 0.0 ? 1.0 : gsl_cdf_chisq_Q(h, static_cast<double>(k - 1));
    if (pooled.size() > k)
        res.effect_size =
            (h - static_cast<double>(k) + 1.0) / (n - static_cast<double>(k));
    return res;
}

std::vector<TestResult> dunn_pairwise(const std::vector<std::vector<double>>& groups,
                                      PAdjust adjust,
                                      const std::vector<std::string>& labels) {
    if (groups.size() < 2)
        throw std::invalid_argument("dunn_pairwise: need at least 2 groups");
    for (const auto& g : groups)
        if (g.empty()) throw std::invalid_argument("dunn_pairwise: empty group");

    const size_t k = groups.size();
    std::vector<double> pooled;
    for (const auto& g : groups) pooled.insert(pooled.end(), g.begin(), g.end());
    const double n = static_cast<double>(pooled.size());
    std::vector<double> ranks = midranks(pooled);

    std::vector<double> mean_rank(k, 0.0);
    size_t offset = 0;
    for (size_t gi = 0; gi < k; ++gi) {
        for (size_t i = 0; i < groups[gi].size(); ++i) mean_rank[gi] += ranks[offset + i];
        mean_rank[gi] /= static_cast<double>(groups[gi].size());
        offset += groups[gi].size();
    }

    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    const double tie_adjust = tie_term(sorted) / (12.0 * (n - 1.0));

    const TestResult omnibus = kruskal_wallis(groups, labels);
    const double eta2 = omnibus.effect_size.value_or(0.0);

    auto label_of = [&](size_t i) {
        return i < labels.size() ? labels[i] : "group" + std::to_string(i);
    };

    std::vector<TestResult> results;
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j) {
            double se = std::sqrt((n * (n + 1.0) / 12.0 - tie_adjust) *
                                  (1.0 / static_cast<double>(groups[i].size()) +
                                   1.0 / static_cast<double>(groups[j].size())));
            double z = se > 0.0 ? (mean_rank[i] - mean_rank[j]) / se : 0.0;
            TestResult res;
            res.test = TestKind::dunn_pair;
            res.statistic = z;
            res.p_value = std::min(1.0, 2.0 * normal_sf(std::fabs(z)));
            res.effect_size = eta2;
            res.group_labels = {label_of(i), label_of(j)};
            res.n = pooled.size();
            results.push_back(std::move(res));
        }
    }

    if (adjust == PAdjust::holm) {
        std::vector<size_t> order(results.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return results[a].p_value < results[b].p_value;
        });
        const double m = static_cast<double>(results.size());
        double running = 0.0;
        for (size_t rank = 0; rank < order.size(); ++rank) {
            double adj = std::min(1.0, (m - static_cast<double>(rank)) *
                                           results[order[rank]].p_value);
            running = std::max(running, adj);
            results[order[rank]].p_value = running;
        }
    }
    return results;
}

}  // namespace lexnet
