#include "jrank/ranking.hpp"

#include <algorithm>
#include <limits>

namespace jrank {

const char* to_string(Band band) noexcept {
    switch (band) {
    case Band::A1: return "A1";
    case Band::A: return "A";
    case Band::B: return "B";
    case Band::C: return "C";
    }
    return "?";
}

Band parse_band(std::string_view text) {
    if (text == "A1") return Band::A1;
    if (text == "A") return Band::A;
    if (text == "B") return Band::B;
    if (text == "C") return Band::C;
    throw Error(Errc::InvalidArgument, "unknown band '" + std::string(text) + "'");
}

BandWeights::BandWeights(Rational w_a1, Rational w_a, Rational w_b, Rational w_c)
    : a1(w_a1), a(w_a), b(w_b), c(w_c) {
    const Rational zero(0), one(1);
    for (const auto& w : {a1, a, b, c})
        if (w < zero || w > one) throw Error(Errc::InvalidArgument, "band weights must lie in [0, 1]");
    if (!(a1 > a && a > b && b > c)) throw Error(Errc::InvalidArgument, "band weights must strictly decrease");
}

Rational BandWeights::operator[](Band band) const noexcept {
    switch (band) {
    case Band::A1: return a1;
    case Band::A: return a;
    case Band::B: return b;
    case Band::C: return c;
    }
    return Rational(0);
}

void BandScheme::validate() const {
    for (std::size_t i = 0; i < 3; ++i) {
        if (percentiles[i] <= Rational(0) || percentiles[i] >= Rational(1))
            throw Error(Errc::InvalidArgument, "percentiles must lie strictly inside (0, 1)");
        if (i > 0 && !(percentiles[i - 1] > percentiles[i]))
            throw Error(Errc::InvalidArgument, "percentiles must strictly decrease");
        if (i > 0 && !(h_cutoffs[i - 1] > h_cutoffs[i]))
            throw Error(Errc::InvalidArgument, "h cutoffs must strictly decrease");
    }
}

const std::vector<std::optional<double>>& IndicatorTable::column(const std::string& name) const {
    auto it = columns.find(name);
    if (it == columns.end()) throw Error(Errc::UnknownColumn, "no column '" + name + "'");
    if (it->second.size() != journals.size())
        throw Error(Errc::InvalidArgument, "column '" + name + "' has the wrong number of cells");
    return it->second;
}

std::optional<std::size_t> IndicatorTable::row_of(std::string_view journal) const {
    auto it = std::find(journals.begin(), journals.end(), journal);
    if (it == journals.end()) return std::nullopt;
    return static_cast<std::size_t>(it - journals.begin());
}

Rational weighted_score(std::span<const ExpertRating> ratings, const BandWeights& weights) {
    if (ratings.empty()) throw Error(Errc::NoRatings, "weighted score needs at least one rating");
    Rational sum(0);
    for (const auto& rating : ratings) sum += weights[rating.band];
    return sum;
}

double pearson(std::span<const std::optional<double>> xs, std::span<const std::optional<double>> ys) {
    if (xs.size() != ys.size()) throw Error(Errc::InvalidArgument, "pearson: vectors differ in length");
    std::vector<double> kept_x;
    std::vector<double> kept_y;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!xs[i] || !ys[i]) continue;
        kept_x.push_back(*xs[i]);
        kept_y.push_back(*ys[i]);
    }
    const auto n = static_cast<Eigen::Index>(kept_x.size());
    return pearson(Eigen::Map<const Eigen::VectorXd>(kept_x.data(), n),
                   Eigen::Map<const Eigen::VectorXd>(kept_y.data(), n));
}

CorrelationMatrix correlation_matrix(const IndicatorTable& table, std::span<const std::string> columns,
                                     MissingCorrelation policy) {
    CorrelationMatrix out;
    out.columns.assign(columns.begin(), columns.end());
    const auto k = static_cast<Eigen::Index>(columns.size());
    out.values = Eigen::MatrixXd::Identity(k, k);
    for (const auto& name : columns) table.column(name);

    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i; j < k; ++j) {
            const auto& a = columns[static_cast<std::size_t>(i)];
            const auto& b = columns[static_cast<std::size_t>(j)];
            double r = std::numeric_limits<double>::quiet_NaN();
            try {
                r = pearson(table.column(a), table.column(b));
                if (i == j) r = 1.0;
            } catch (const Error& e) {
                if (policy == MissingCorrelation::Throw ||
                    (e.code() != Errc::InsufficientData && e.code() != Errc::ZeroVariance))
                    throw Error(e.code(), "columns (" + a + ", " + b + "): " + e.what());
            }
            out.values(i, j) = r;
            out.values(j, i) = r;
        }
    }
    return out;
}

std::vector<RankedEntry> rank_journals(const IndicatorTable& table, const std::string& key_column) {
    const auto& column = table.column(key_column);
    std::vector<RankedEntry> ranked;
    ranked.reserve(table.journals.size());
    for (std::size_t i = 0; i < table.journals.size(); ++i) ranked.push_back({table.journals[i], column[i], 0});

    std::sort(ranked.begin(), ranked.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.value.has_value() != b.value.has_value()) return a.value.has_value();
        if (a.value && *a.value != *b.value) return *a.value > *b.value;
        return a.journal < b.journal;
    });
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const bool tied = i > 0 && ranked[i].value == ranked[i - 1].value;
        ranked[i].rank = tied ? ranked[i - 1].rank : static_cast<int>(i) + 1;
    }
    return ranked;
}

namespace {

Band band_by_cutoff(const std::optional<double>& value, const BandScheme& scheme) {
    if (!value) return Band::C;
    if (*value >= scheme.h_cutoffs[0]) return Band::A1;
    if (*value >= scheme.h_cutoffs[1]) return Band::A;
    if (*value >= scheme.h_cutoffs[2]) return Band::B;
    return Band::C;
}

// Band of the journal at 0-based position `index` of `count` ranked journals.
Band band_by_position(std::size_t index, std::size_t count, const BandScheme& scheme) {
    const Rational position(static_cast<std::int64_t>(index));
    const Rational n(static_cast<std::int64_t>(count));
    if (position < n * (Rational(1) - scheme.percentiles[0])) return Band::A1;
    if (position < n * (Rational(1) - scheme.percentiles[1])) return Band::A;
    if (position < n * (Rational(1) - scheme.percentiles[2])) return Band::B;
    return Band::C;
}

} // namespace

std::map<std::string, Band> assign_bands(std::span<const RankedEntry> ranked, const BandScheme& scheme) {
    if (ranked.empty()) throw Error(Errc::EmptyInput, "no journals to band");
    scheme.validate();
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        const auto& prev = ranked[i - 1].value;
        const auto& cur = ranked[i].value;
        if ((!prev && cur) || (prev && cur && *cur > *prev))
            throw Error(Errc::InvalidArgument, "ranking is not in descending order");
    }

    std::map<std::string, Band> bands;
    if (scheme.mode == BandMode::HCutoff) {
        for (const auto& entry : ranked) bands[entry.journal] = band_by_cutoff(entry.value, scheme);
        return bands;
    }

    const std::size_t n = ranked.size();
    for (std::size_t start = 0; start < n;) {
        std::size_t end = start + 1;
        while (end < n && ranked[end].value == ranked[start].value) ++end;
        Band band = Band::C;
        if (ranked[start].value) {
            band = scheme.tie_policy == TiePolicy::PromoteGroup ? band_by_position(start, n, scheme)
                                                                : band_by_position(end - 1, n, scheme);
        }
        for (std::size_t i = start; i < end; ++i) bands[ranked[i].journal] = band;
        start = end;
    }
    return bands;
}

} // namespace jrank
