#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's numeric code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// Largest h for which "at least h entries are >= h" holds, by scanning every h.
inline int h_index(const std::vector<std::int64_t>& cites) {
    for (int h = static_cast<int>(cites.size()); h > 0; --h) {
        const auto at_least = std::count_if(cites.begin(), cites.end(), [h](std::int64_t c) { return c >= h; });
        if (at_least >= h) return h;
    }
    return 0;
}

// Full-matrix Levenshtein distance.
inline std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[a.size()][b.size()];
}

// Median of the continuous citation-age distribution in which each bin's
// citations are spread uniformly over (age - 1, age]; found by bisection.
inline double half_life(const std::vector<std::pair<int, std::int64_t>>& bins) {
    double total = 0;
    int max_age = 0;
    for (const auto& [age, cites] : bins) {
        total += static_cast<double>(cites);
        max_age = std::max(max_age, age);
    }
    auto cumulative = [&](double t) {
        double sum = 0;
        for (const auto& [age, cites] : bins) {
            const double covered = std::clamp(t - (age - 1), 0.0, 1.0);
            sum += covered * static_cast<double>(cites);
        }
        return sum;
    };
    double lo = 0, hi = max_age;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cumulative(mid) >= total / 2) hi = mid; else lo = mid;
    }
    return hi;
}

// Textbook single-pass Pearson from raw sums.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// Closed-form simple regression y = a + b x.
inline std::pair<double, double> ols(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double b = sxy / sxx;
    return {my - b * mx, b};
}

} // namespace oracle
