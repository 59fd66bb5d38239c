#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace bloomflow::stats {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Sample standard deviation (n-1 denominator); 0 for fewer than two points.
inline double stdev(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

/// Ranks with ties assigned the average rank.
inline std::vector<double> ranks(std::span<const double> xs) {
    std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> r(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
        i = j + 1;
    }
    return r;
}

inline double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("pearson: need two equal-length series");
    double mx = mean(xs), my = mean(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

inline double spearman(std::span<const double> xs, std::span<const double> ys) {
    auto rx = ranks(xs);
    auto ry = ranks(ys);
    return pearson(rx, ry);
}

/// Chi-square upper quantile via the Wilson-Hilferty cube approximation.
/// Accurate to a few permille for dof >= 5, which is all we need for the
/// uniformity tests here.
inline double chi_square_quantile(double p_upper, double dof) {
    // z for the standard normal upper-tail probability p_upper
    double z;
    if (p_upper == 0.01) {
        z = 2.3263478740408408;
    } else if (p_upper == 0.05) {
        z = 1.6448536269514722;
    } else {
        throw std::invalid_argument("chi_square_quantile: unsupported tail");
    }
    double a = 2.0 / (9.0 * dof);
    double c = 1.0 - a + z * std::sqrt(a);
    return dof * c * c * c;
}

/// Pearson chi-square statistic for observed counts against a uniform
/// expectation.
inline double chi_square_uniform(std::span<const std::uint64_t> counts) {
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    if (counts.empty() || total == 0.0) return 0.0;
    double expected = total / static_cast<double>(counts.size());
    double stat = 0.0;
    for (auto c : counts) {
        double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

}  // namespace bloomflow::stats
