#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "jrank/error.hpp"
#include "jrank/rational.hpp"

namespace jrank {

enum class Band { C = 0, B = 1, A = 2, A1 = 3 };

const char* to_string(Band band) noexcept;
Band parse_band(std::string_view text);

struct ExpertRating {
    std::string journal;
    std::string expert_id;
    Band band;
};

struct BandWeights {
    Rational a1{39, 40};
    Rational a{9, 10};
    Rational b{27, 40};
    Rational c{1, 4};

    BandWeights() = default;
    BandWeights(Rational w_a1, Rational w_a, Rational w_b, Rational w_c);

    Rational operator[](Band band) const noexcept;
};

enum class BandMode { Percentile, HCutoff };
enum class TiePolicy { PromoteGroup, DemoteGroup };

struct BandScheme {
    BandMode mode = BandMode::Percentile;
    /// Lower edges of the A1, A and B bands as fractions of the ranking.
    std::array<Rational, 3> percentiles{Rational{95, 100}, Rational{85, 100}, Rational{50, 100}};
    std::array<double, 3> h_cutoffs{21, 10, 5};
    TiePolicy tie_policy = TiePolicy::DemoteGroup;

    void validate() const;
};

struct IndicatorTable {
    std::vector<std::string> journals;
    std::map<std::string, std::vector<std::optional<double>>> columns;

    const std::vector<std::optional<double>>& column(const std::string& name) const;
    std::optional<std::size_t> row_of(std::string_view journal) const;
};

Rational weighted_score(std::span<const ExpertRating> ratings, const BandWeights& weights = {});

/// Sample Pearson correlation of two dense vectors.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar pearson(const Eigen::MatrixBase<DerivedX>& xs,
                                  const Eigen::MatrixBase<DerivedY>& ys) {
    using Scalar = typename DerivedX::Scalar;
    if (xs.size() != ys.size())
        throw Error(Errc::InvalidArgument, "pearson: vectors differ in length");
    if (xs.size() < 3)
        throw Error(Errc::InsufficientData, "pearson: need at least 3 pairs");
    const auto dx = (xs.array() - xs.mean()).matrix().eval();
    const auto dy = (ys.array() - ys.mean()).matrix().eval();
    const Scalar sxx = dx.squaredNorm();
    const Scalar syy = dy.squaredNorm();
    if (sxx == Scalar(0) || syy == Scalar(0))
        throw Error(Errc::ZeroVariance, "pearson: constant vector");
    Scalar r = dx.dot(dy) / std::sqrt(sxx * syy);
    return std::clamp(r, Scalar(-1), Scalar(1));
}

/// Pearson with pairwise deletion of ABSENT cells.
double pearson(std::span<const std::optional<double>> xs, std::span<const std::optional<double>> ys);

enum class MissingCorrelation { Throw, ReportNaN };

struct CorrelationMatrix {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;  ///< NaN marks an undefined cell
};

CorrelationMatrix correlation_matrix(const IndicatorTable& table, std::span<const std::string> columns,
                                     MissingCorrelation policy = MissingCorrelation::Throw);

struct RankedEntry {
    std::string journal;
    std::optional<double> value;
    int rank = 0;
};

/// Descending by value, competition ranking, ties and ABSENT cells ordered by name.
std::vector<RankedEntry> rank_journals(const IndicatorTable& table, const std::string& key_column);

std::map<std::string, Band> assign_bands(std::span<const RankedEntry> ranked, const BandScheme& scheme);

} // namespace jrank
