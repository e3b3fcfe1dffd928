#include "jrank/distribution.hpp"

#include <algorithm>
#include <functional>

namespace jrank {

CitationCDF citation_cdf(std::span<const std::int64_t> cites) {
    std::vector<std::int64_t> cited;
    for (const auto c : cites) {
        if (c < 0) throw Error(Errc::InvalidArgument, "negative citation count");
        if (c > 0) cited.push_back(c);
    }
    if (cited.empty()) throw Error(Errc::AllUncited, "no cited papers");
    std::sort(cited.begin(), cited.end(), std::greater<>());

    CitationCDF cdf;
    cdf.n_total = static_cast<std::int64_t>(cites.size());
    cdf.n_uncited = cdf.n_total - static_cast<std::int64_t>(cited.size());
    const auto n = static_cast<Eigen::Index>(cited.size());
    cdf.rank_fraction.resize(n);
    cdf.cites.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        cdf.rank_fraction[i] = static_cast<double>(i + 1) / static_cast<double>(cdf.n_total);
        cdf.cites[i] = static_cast<double>(cited[static_cast<std::size_t>(i)]);
    }
    return cdf;
}

Rational median_estimate_from_h(int h) {
    if (h < 0) throw Error(Errc::InvalidArgument, "negative h-index");
    return Rational(h, 3);
}

std::vector<TallyRow> source_tally(std::span<const std::pair<std::string, std::int64_t>> labeled) {
    std::int64_t total = 0;
    for (const auto& [category, count] : labeled) {
        if (count < 0) throw Error(Errc::InvalidArgument, "negative count for '" + category + "'");
        total += count;
    }
    if (total == 0) throw Error(Errc::EmptyTally, "tally has no counts");

    std::vector<TallyRow> rows;
    std::vector<std::int64_t> remainders;
    std::int64_t assigned = 0;
    for (const auto& [category, count] : labeled) {
        rows.push_back({category, count * 100 / total});
        remainders.push_back(count * 100 % total);
        assigned += rows.back().percent;
    }

    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (std::size_t k = 0; assigned < 100; ++k, ++assigned) ++rows[order[k]].percent;

    rows.push_back({"Total", 100});
    return rows;
}

} // namespace jrank
