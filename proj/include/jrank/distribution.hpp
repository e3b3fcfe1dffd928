#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jrank/error.hpp"
#include "jrank/rational.hpp"

namespace jrank {

/// Per-paper citations in descending order against rank fraction F = i / n_total.
/// Uncited papers are counted in n_total but carry no point.
template <typename Scalar>
struct BasicCitationCDF {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector rank_fraction;
    Vector cites;
    std::int64_t n_total = 0;
    std::int64_t n_uncited = 0;

    Eigen::Index size() const noexcept { return cites.size(); }
};

using CitationCDF = BasicCitationCDF<double>;

CitationCDF citation_cdf(std::span<const std::int64_t> cites);

template <typename Scalar>
struct BasicFitResult {
    Scalar intercept{};   ///< log10 cites at F = 0
    Scalar slope{};       ///< per unit F
    Scalar r_squared{};
    Eigen::Index n_points = 0;
    bool degenerate = false;  ///< all fitted cites equal

    Scalar trend(Scalar f) const { return std::pow(Scalar(10), intercept + slope * f); }
};

using FitResult = BasicFitResult<double>;

inline constexpr double kDefaultTrimTopFraction = 0.10;
inline constexpr double kDefaultDepartureFactor = 2.0;

/// OLS of log10(c) on F over points with F > trim_top_fraction.
template <typename Scalar>
BasicFitResult<Scalar> fit_loglinear(const BasicCitationCDF<Scalar>& cdf, Scalar trim_top_fraction) {
    using Vector = typename BasicCitationCDF<Scalar>::Vector;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (!(trim_top_fraction >= Scalar(0) && trim_top_fraction < Scalar(1)))
        throw Error(Errc::InvalidArgument, "trim fraction must lie in [0, 1)");

    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < cdf.size(); ++i)
        if (cdf.rank_fraction[i] > trim_top_fraction) kept.push_back(i);
    const auto n = static_cast<Eigen::Index>(kept.size());
    if (n < 2) throw Error(Errc::InsufficientPoints, "fewer than 2 points after trimming");

    Matrix design(n, 2);
    Vector log_cites(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        design(k, 0) = Scalar(1);
        design(k, 1) = cdf.rank_fraction[kept[k]];
        log_cites[k] = std::log10(cdf.cites[kept[k]]);
    }

    BasicFitResult<Scalar> fit;
    fit.n_points = n;
    const Scalar mean = log_cites.mean();
    const Scalar ss_tot = (log_cites.array() - mean).square().sum();
    if (ss_tot == Scalar(0)) {
        fit.intercept = mean;
        fit.slope = Scalar(0);
        fit.r_squared = Scalar(1);
        fit.degenerate = true;
        return fit;
    }
    const Vector beta = design.colPivHouseholderQr().solve(log_cites);
    fit.intercept = beta[0];
    fit.slope = beta[1];
    const Scalar ss_res = (design * beta - log_cites).squaredNorm();
    fit.r_squared = std::clamp(Scalar(1) - ss_res / ss_tot, Scalar(0), Scalar(1));
    return fit;
}

/// Model-based median citation count.
Rational median_estimate_from_h(int h);

/// Points whose cites exceed factor times the fitted trend.
template <typename Scalar>
std::int64_t departure_count(const BasicCitationCDF<Scalar>& cdf, const BasicFitResult<Scalar>& fit,
                             Scalar factor) {
    if (fit.n_points < 2) throw Error(Errc::InsufficientPoints, "fit has fewer than 2 points");
    if (!(factor > Scalar(1))) throw Error(Errc::InvalidArgument, "departure factor must exceed 1");
    std::int64_t count = 0;
    for (Eigen::Index i = 0; i < cdf.size(); ++i)
        if (cdf.cites[i] > factor * fit.trend(cdf.rank_fraction[i])) ++count;
    return count;
}

struct TallyRow {
    std::string category;
    std::int64_t percent;
};

/// Integer percentages by largest remainder (ties to earlier input), followed
/// by a "Total" row of 100.
std::vector<TallyRow> source_tally(std::span<const std::pair<std::string, std::int64_t>> labeled);

} // namespace jrank
