#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "jrank/corpus.hpp"
#include "jrank/rational.hpp"

namespace jrank {

/// Largest h such that at least h entries are >= h.
int h_index(std::span<const std::int64_t> cites);

/// h over papers published inside the window, using citations to census.
int windowed_h(const RecordSet& set, const TimeWindow& window);

/// Two-prior-year impact factor. Throws NoSourceItems or MissingByYearData.
Rational impact_factor(const RecordSet& set, int census_year);

/// Same-year citations per same-year item.
Rational immediacy_index(const RecordSet& set, int census_year);

struct AgeBin {
    int age;               ///< years, >= 1
    std::int64_t cites;
};

/// Interpolated median age of the citations in the histogram.
Rational cited_half_life(std::span<const AgeBin> histogram);

/// Citations received in census_year grouped by cited item's age, where an
/// item published in the census year has age 1. Throws MissingByYearData if
/// any dated record lacks per-year counts; ABSENT-year records are skipped.
std::vector<AgeBin> age_histogram(const RecordSet& set, int census_year);

struct UncitedStats {
    Rational raw_uncited_fraction;
    double annualized_uncited_fraction = 0.0;  ///< raw^(1/age)
    Rational under_one_per_year_fraction;
    int age_years = 0;
};

UncitedStats uncited_stats(const RecordSet& set, int pub_year, int census_year);

using HTimeseries = std::map<int, int>;

HTimeseries h_timeseries(const RecordSet& set, std::span<const int> years);

struct WindowTotals {
    std::int64_t total_cites = 0;
    std::int64_t paper_count = 0;
    Rational mean;  ///< zero for empty windows
};

WindowTotals window_totals(const RecordSet& set, const TimeWindow& window);

/// Everything the comparison panel prints for one journal. Indicators that
/// need per-citation-year data are empty when that data is missing.
struct JournalIndicators {
    int h_window = 0;
    int h_lifetime = 0;
    std::optional<Rational> jif;
    std::optional<Rational> immediacy;
    std::optional<Rational> cited_half_life;
    WindowTotals window;
    std::size_t dropped_absent_year = 0;
};

JournalIndicators compute_indicators(const RecordSet& set, const TimeWindow& window);

} // namespace jrank
