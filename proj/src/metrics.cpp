#include "jrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "jrank/error.hpp"

namespace jrank {

int h_index(std::span<const std::int64_t> cites) {
    std::vector<std::int64_t> sorted(cites.begin(), cites.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    int h = 0;
    while (static_cast<std::size_t>(h) < sorted.size() && sorted[static_cast<std::size_t>(h)] >= h + 1) ++h;
    return h;
}

namespace {

std::vector<std::int64_t> cites_of(const std::vector<PaperRecord>& records) {
    std::vector<std::int64_t> out;
    out.reserve(records.size());
    for (const auto& record : records) out.push_back(record.cites_total);
    return out;
}

// Citations received in citing_year by items published in one of the basis years.
Rational per_item_rate(const RecordSet& set, int citing_year, int first_basis, int last_basis, const char* what) {
    std::int64_t items = 0;
    std::int64_t cites = 0;
    for (const auto& record : set.records) {
        if (!record.year || *record.year < first_basis || *record.year > last_basis) continue;
        if (!record.cites_by_year)
            throw Error(Errc::MissingByYearData, std::string(what) + ": '" + record.title + "' lacks per-year citations");
        ++items;
        if (auto it = record.cites_by_year->find(citing_year); it != record.cites_by_year->end()) cites += it->second;
    }
    if (items == 0)
        throw Error(Errc::NoSourceItems, std::string(what) + ": no items published in " + std::to_string(first_basis) +
                                             (first_basis == last_basis ? "" : "-" + std::to_string(last_basis)));
    return Rational(cites, items);
}

} // namespace

int windowed_h(const RecordSet& set, const TimeWindow& window) {
    return h_index(cites_of(filter_window(set, window).set.records));
}

Rational impact_factor(const RecordSet& set, int census_year) {
    return per_item_rate(set, census_year, census_year - 2, census_year - 1, "impact factor");
}

Rational immediacy_index(const RecordSet& set, int census_year) {
    return per_item_rate(set, census_year, census_year, census_year, "immediacy");
}

Rational cited_half_life(std::span<const AgeBin> histogram) {
    std::vector<AgeBin> bins(histogram.begin(), histogram.end());
    std::sort(bins.begin(), bins.end(), [](const AgeBin& a, const AgeBin& b) { return a.age < b.age; });
    std::int64_t total = 0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
        if (bins[i].age < 1 || bins[i].cites < 0)
            throw Error(Errc::InvalidArgument, "age bins need age >= 1 and cites >= 0");
        if (i > 0 && bins[i].age == bins[i - 1].age)
            throw Error(Errc::InvalidArgument, "duplicate age " + std::to_string(bins[i].age));
        total += bins[i].cites;
    }
    if (total == 0) throw Error(Errc::NoCitations, "cited half-life of an uncited journal");

    const Rational half(total, 2);
    std::int64_t before = 0;
    for (const auto& bin : bins) {
        if (2 * (before + bin.cites) >= total)
            return Rational(bin.age - 1) + (half - before) / Rational(bin.cites);
        before += bin.cites;
    }
    return Rational(bins.back().age);  // unreachable: the last bin always reaches the total
}

std::vector<AgeBin> age_histogram(const RecordSet& set, int census_year) {
    std::map<int, std::int64_t> by_age;
    for (const auto& record : set.records) {
        if (!record.year || *record.year > census_year) continue;
        if (!record.cites_by_year)
            throw Error(Errc::MissingByYearData, "half-life: '" + record.title + "' lacks per-year citations");
        auto it = record.cites_by_year->find(census_year);
        if (it == record.cites_by_year->end()) continue;
        by_age[census_year - *record.year + 1] += it->second;
    }
    std::vector<AgeBin> out;
    for (const auto& [age, cites] : by_age) out.push_back({age, cites});
    return out;
}

UncitedStats uncited_stats(const RecordSet& set, int pub_year, int census_year) {
    if (census_year <= pub_year)
        throw Error(Errc::InvalidAge, "census " + std::to_string(census_year) + " is not after " + std::to_string(pub_year));
    const int age = census_year - pub_year;
    std::int64_t papers = 0;
    std::int64_t uncited = 0;
    std::int64_t under_one = 0;
    for (const auto& record : set.records) {
        if (record.year != pub_year) continue;
        ++papers;
        if (record.cites_total == 0) ++uncited;
        if (record.cites_total < age) ++under_one;
    }
    if (papers == 0) throw Error(Errc::NoSourceItems, "no papers published in " + std::to_string(pub_year));

    UncitedStats stats;
    stats.age_years = age;
    stats.raw_uncited_fraction = Rational(uncited, papers);
    stats.under_one_per_year_fraction = Rational(under_one, papers);
    stats.annualized_uncited_fraction = std::pow(to_double(stats.raw_uncited_fraction), 1.0 / age);
    return stats;
}

HTimeseries h_timeseries(const RecordSet& set, std::span<const int> years) {
    std::map<int, std::vector<std::int64_t>> by_year;
    for (const auto& record : set.records)
        if (record.year) by_year[*record.year].push_back(record.cites_total);
    HTimeseries series;
    for (const int year : years) {
        auto it = by_year.find(year);
        series[year] = it == by_year.end() ? 0 : h_index(it->second);
    }
    return series;
}

WindowTotals window_totals(const RecordSet& set, const TimeWindow& window) {
    WindowTotals totals;
    for (const auto& record : filter_window(set, window).set.records) {
        totals.total_cites += record.cites_total;
        ++totals.paper_count;
    }
    totals.mean = totals.paper_count == 0 ? Rational(0) : Rational(totals.total_cites, totals.paper_count);
    return totals;
}

JournalIndicators compute_indicators(const RecordSet& set, const TimeWindow& window) {
    JournalIndicators out;
    const int census = set.census_year;
    const auto windowed = filter_window(set, window);
    out.h_window = h_index(cites_of(windowed.set.records));
    out.h_lifetime = windowed_h(set, TimeWindow::lifetime(census));
    out.window = window_totals(set, window);
    out.dropped_absent_year = windowed.dropped_absent_year;

    auto optional_rate = [](auto&& compute) -> std::optional<Rational> {
        try {
            return compute();
        } catch (const Error& e) {
            if (e.code() == Errc::NoSourceItems || e.code() == Errc::MissingByYearData ||
                e.code() == Errc::NoCitations)
                return std::nullopt;
            throw;
        }
    };
    out.jif = optional_rate([&] { return impact_factor(set, census); });
    out.immediacy = optional_rate([&] { return immediacy_index(set, census); });
    out.cited_half_life = optional_rate([&] { return cited_half_life(age_histogram(set, census)); });
    return out;
}

} // namespace jrank
