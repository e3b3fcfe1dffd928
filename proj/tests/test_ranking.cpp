#include <doctest.h>

#include <cmath>
#include <random>

#include "jrank/corpus.hpp"
#include "jrank/error.hpp"
#include "jrank/io.hpp"
#include "jrank/ranking.hpp"
#include "oracles.hpp"

using namespace jrank;

namespace {

std::string fixture(const char* name) { return io::read_file(std::string(JRANK_FIXTURES) + "/" + name); }

std::vector<ExpertRating> ratings(std::initializer_list<Band> bands) {
    std::vector<ExpertRating> out;
    int i = 0;
    for (const Band b : bands) out.push_back({"j", "e" + std::to_string(++i), b});
    return out;
}

IndicatorTable table_of(const std::vector<std::pair<std::string, std::optional<double>>>& rows) {
    IndicatorTable t;
    auto& h = t.columns["h"];
    for (const auto& [name, value] : rows) {
        t.journals.push_back(name);
        h.push_back(value);
    }
    return t;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

} // namespace

TEST_SUITE("weighted_score") {
    TEST_CASE("examples") {
        using enum Band;
        CHECK(format_fixed(weighted_score(ratings({A1, A1, A1, A1})), 2) == "3.90");
        CHECK(format_fixed(weighted_score(ratings({A1, A1, A, A})), 2) == "3.75");
        CHECK(format_fixed(weighted_score(ratings({C, C, C, C})), 2) == "1.00");
        CHECK(weighted_score(ratings({A, B, B, B})) == Rational(117, 40));
        CHECK(format_fixed(weighted_score(ratings({A, B, B, B})), 2) == "2.93");
        CHECK_THROWS_AS(weighted_score(std::vector<ExpertRating>{}), Error);
    }

    TEST_CASE("reproduces every printed score from the rating counts") {
        const auto all = io::parse_ratings(fixture("expert_ratings.csv"));
        const auto printed = io::parse_indicator_table(fixture("panel_indicators.tsv"));
        const auto& column = printed.table.column("printed_weighted_score");
        REQUIRE(printed.table.journals.size() == 27);
        for (std::size_t i = 0; i < printed.table.journals.size(); ++i) {
            std::vector<ExpertRating> mine;
            for (const auto& r : all)
                if (r.journal == printed.table.journals[i]) mine.push_back(r);
            CAPTURE(printed.table.journals[i]);
            REQUIRE(mine.size() == 4);
            CHECK(std::abs(to_double(weighted_score(mine)) - *column[i]) <= 0.005 + 1e-12);
            CHECK(format_fixed(weighted_score(mine), 2) == format_fixed(*column[i], 2));
        }
    }

    TEST_CASE("permutation invariant and strictly increasing in any rater's band") {
        std::mt19937 rng(31);
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<ExpertRating> rs(1 + rng() % 6);
            for (std::size_t i = 0; i < rs.size(); ++i) rs[i] = {"j", "e" + std::to_string(i), Band(rng() % 4)};
            const auto score = weighted_score(rs);
            auto shuffled = rs;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            CHECK(weighted_score(shuffled) == score);

            auto& one = rs[rng() % rs.size()];
            if (one.band != Band::A1) {
                one.band = Band(static_cast<int>(one.band) + 1);
                CHECK(weighted_score(rs) > score);
            }
        }
    }

    TEST_CASE("weights must be strictly descending") {
        CHECK_THROWS_AS(BandWeights(Rational(1), Rational(1), Rational(1, 2), Rational(1, 4)), Error);
        CHECK_THROWS_AS(BandWeights(Rational(2), Rational(1), Rational(1, 2), Rational(1, 4)), Error);
        CHECK_NOTHROW(BandWeights(Rational(4, 5), Rational(3, 5), Rational(2, 5), Rational(1, 5)));
    }
}

TEST_SUITE("pearson") {
    TEST_CASE("examples") {
        Eigen::VectorXd x(3), y(3);
        x << 1, 2, 3;
        y << 2, 4, 7;
        CHECK(format_fixed(pearson(x, y), 4) == "0.9934");
        CHECK(oracle::pearson({1, 2, 3}, {2, 4, 7}) == doctest::Approx(pearson(x, y)).epsilon(1e-12));
        CHECK(pearson(x, x) == doctest::Approx(1.0));
        CHECK(pearson(x, (-x).eval()) == doctest::Approx(-1.0));

        Eigen::VectorXd flat = Eigen::VectorXd::Constant(3, 2.0);
        CHECK_THROWS_AS(pearson(x, flat), Error);
        CHECK_THROWS_AS(pearson(x.head(2).eval(), y.head(2).eval()), Error);
    }

    TEST_CASE("pairwise deletion drops ABSENT cells from both sides") {
        const std::vector<std::optional<double>> x{1, std::nullopt, 2, 3, 8};
        const std::vector<std::optional<double>> y{2, 5, 4, 7, std::nullopt};
        CHECK(pearson(x, y) == doctest::Approx(0.9934).epsilon(1e-4));
        const std::vector<std::optional<double>> sparse{1, std::nullopt, std::nullopt, std::nullopt, 2};
        CHECK_THROWS_AS(pearson(sparse, y), Error);
    }

    TEST_CASE("agrees with the raw-sum oracle and is affine invariant") {
        std::mt19937 rng(13);
        std::normal_distribution<double> normal(0, 1);
        std::uniform_real_distribution<double> positive(0.1, 10), shift(-100, 100);
        for (int trial = 0; trial < 500; ++trial) {
            const int n = 3 + static_cast<int>(rng() % 40);
            Eigen::VectorXd x(n), y(n);
            for (int i = 0; i < n; ++i) {
                x[i] = normal(rng);
                y[i] = 0.5 * x[i] + normal(rng);
            }
            const double r = pearson(x, y);
            CHECK(r == doctest::Approx(oracle::pearson(to_vector(x), to_vector(y))).epsilon(1e-9));
            const double a = positive(rng), b = shift(rng);
            const Eigen::VectorXd xt = (a * x.array() + b).matrix();
            CHECK(std::abs(pearson(xt, y) - r) < 1e-12);
            CHECK(std::abs(pearson(x, xt) - 1.0) < 1e-12);
        }
    }
}

TEST_SUITE("correlation_matrix") {
    TEST_CASE("reproduces the printed matrix within 0.02") {
        const auto loaded = io::parse_indicator_table(fixture("panel_indicators.tsv"));
        const auto printed = io::parse_indicator_table(fixture("panel_correlations.tsv"));
        IndicatorTable table = loaded.table;
        table.columns["weighted_score"] = table.columns.at("printed_weighted_score");
        const std::vector<std::string> cols{"weighted_score", "isi_jif", "isi_h", "pop_h_2000_07", "pop_h_lifetime"};
        const auto m = correlation_matrix(table, cols);
        REQUIRE(m.values.rows() == 5);
        for (std::size_t i = 0; i < cols.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) {
                REQUIRE(printed.display_names[i] == cols[i]);
                const double expected = *printed.table.column(cols[j])[i];
                CAPTURE(cols[i]);
                CAPTURE(cols[j]);
                CHECK(std::abs(m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - expected) <= 0.02);
            }
        const auto pair = correlation_matrix(table, std::vector<std::string>{"weighted_score", "isi_jif"});
        CHECK(std::abs(pair.values(0, 1) - 0.52) <= 0.02);
        const auto hh = correlation_matrix(table, std::vector<std::string>{"isi_h", "pop_h_2000_07"});
        CHECK(std::abs(hh.values(0, 1) - 0.90) <= 0.02);
    }

    TEST_CASE("symmetric with unit diagonal on random tables") {
        std::mt19937 rng(21);
        for (int trial = 0; trial < 100; ++trial) {
            IndicatorTable t;
            const int n = 5 + static_cast<int>(rng() % 20);
            for (int i = 0; i < n; ++i) t.journals.push_back("j" + std::to_string(i));
            std::vector<std::string> names;
            for (int c = 0; c < 4; ++c) {
                names.push_back("c" + std::to_string(c));
                auto& col = t.columns[names.back()];
                for (int i = 0; i < n; ++i) {
                    if (i >= 3 && rng() % 6 == 0) col.push_back(std::nullopt);
                    else col.push_back(static_cast<double>(rng() % 1000) / 10.0 + i % 3);
                }
            }
            const auto m = correlation_matrix(t, names, MissingCorrelation::ReportNaN);
            for (Eigen::Index i = 0; i < 4; ++i) {
                CHECK(m.values(i, i) == 1.0);
                for (Eigen::Index j = 0; j < 4; ++j)
                    if (!std::isnan(m.values(i, j))) CHECK(m.values(i, j) == m.values(j, i));
            }
        }
    }

    TEST_CASE("all-ABSENT column is NaN or an error by policy") {
        IndicatorTable t;
        t.journals = {"a", "b", "c", "d"};
        t.columns["x"] = {1.0, 2.0, 3.0, 5.0};
        t.columns["y"] = {std::nullopt, std::nullopt, std::nullopt, std::nullopt};
        const std::vector<std::string> cols{"x", "y"};
        const auto m = correlation_matrix(t, cols, MissingCorrelation::ReportNaN);
        CHECK(std::isnan(m.values(0, 1)));
        CHECK(m.values(0, 0) == 1.0);
        CHECK_THROWS_AS(correlation_matrix(t, cols), Error);
        CHECK_THROWS_AS(correlation_matrix(t, std::vector<std::string>{"x", "nope"}), Error);
    }
}

TEST_SUITE("rank_journals") {
    TEST_CASE("examples") {
        const auto ranked = rank_journals(table_of({{"agricultural and forest meteorology", 41},
                                                    {"forest ecology and management", 43},
                                                    {"tree physiology", 29}}),
                                          "h");
        REQUIRE(ranked.size() == 3);
        CHECK(ranked[0].journal == "forest ecology and management");
        CHECK(ranked[1].journal == "agricultural and forest meteorology");
        CHECK(ranked[2].journal == "tree physiology");
        CHECK(ranked[2].rank == 3);

        const auto tied = rank_journals(table_of({{"b", 10}, {"c", 5}, {"a", 10}}), "h");
        CHECK(tied[0].journal == "a");
        CHECK(tied[0].rank == 1);
        CHECK(tied[1].rank == 1);
        CHECK(tied[2].rank == 3);

        CHECK(rank_journals(table_of({}), "h").empty());
        CHECK_THROWS_AS(rank_journals(table_of({}), "missing"), Error);
    }

    TEST_CASE("ABSENT values sort last and order is input-independent") {
        const auto a = rank_journals(table_of({{"x", std::nullopt}, {"y", 3}, {"z", 3}, {"w", std::nullopt}}), "h");
        const auto b = rank_journals(table_of({{"z", 3}, {"w", std::nullopt}, {"y", 3}, {"x", std::nullopt}}), "h");
        REQUIRE(a.size() == 4);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].journal == b[i].journal);
            CHECK(a[i].rank == b[i].rank);
        }
        CHECK(a[2].journal == "w");
        CHECK_FALSE(a[3].value.has_value());
    }
}

TEST_SUITE("assign_bands") {
    TEST_CASE("cutoff scheme reproduces the classed list") {
        const auto loaded = io::parse_indicator_table(fixture("classed_journals.tsv"));
        const auto& classes = loaded.text_columns.at("class");
        REQUIRE(loaded.table.journals.size() == 104);
        BandScheme scheme;
        scheme.mode = BandMode::HCutoff;
        const auto ranked = rank_journals(loaded.table, "h_index");
        const auto bands = assign_bands(ranked, scheme);
        for (std::size_t i = 0; i < loaded.table.journals.size(); ++i) {
            CAPTURE(loaded.display_names[i]);
            CHECK(to_string(bands.at(loaded.table.journals[i])) == classes[i]);
        }
        auto band_of = [&](const char* name) { return bands.at(normalize_title(name)); };
        CHECK(band_of("Forest Ecology and Management") == Band::A1);
        CHECK(band_of("Annals of Forest Science") == Band::A);
        CHECK(band_of("Journal of Wood Chemistry and Technology") == Band::B);
        CHECK(band_of("American Forests") == Band::C);
    }

    TEST_CASE("percentile examples") {
        const auto single = assign_bands(rank_journals(table_of({{"only", 3}}), "h"), BandScheme{});
        CHECK(single.at("only") == Band::A1);

        const auto flat = assign_bands(rank_journals(table_of({{"a", 7}, {"b", 7}, {"c", 7}, {"d", 7}}), "h"),
                                       BandScheme{});
        for (const auto& [name, band] : flat) CHECK(band == Band::C);

        BandScheme promote;
        promote.tie_policy = TiePolicy::PromoteGroup;
        const auto up = assign_bands(rank_journals(table_of({{"a", 7}, {"b", 7}, {"c", 7}, {"d", 7}}), "h"), promote);
        for (const auto& [name, band] : up) CHECK(band == Band::A1);

        // 20 distinct values: top 1 (5%) A1, next 2 A, next 7 B, last 10 C.
        std::vector<std::pair<std::string, std::optional<double>>> rows;
        for (int i = 0; i < 20; ++i) rows.emplace_back("j" + std::to_string(100 + i), 100 - i);
        const auto bands = assign_bands(rank_journals(table_of(rows), "h"), BandScheme{});
        std::map<Band, int> count;
        for (const auto& [name, band] : bands) ++count[band];
        CHECK(count[Band::A1] == 1);
        CHECK(count[Band::A] == 2);
        CHECK(count[Band::B] == 7);
        CHECK(count[Band::C] == 10);
        CHECK(bands.at("j100") == Band::A1);
        CHECK(bands.at("j119") == Band::C);

        CHECK_THROWS_AS(assign_bands(std::vector<RankedEntry>{}, BandScheme{}), Error);
    }

    TEST_CASE("bands are monotone in h for every scheme") {
        std::mt19937 rng(77);
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<std::pair<std::string, std::optional<double>>> rows;
            const int n = 1 + static_cast<int>(rng() % 60);
            for (int i = 0; i < n; ++i) rows.emplace_back("j" + std::to_string(i), static_cast<double>(rng() % 25));
            BandScheme scheme;
            scheme.mode = rng() % 2 ? BandMode::HCutoff : BandMode::Percentile;
            scheme.tie_policy = rng() % 2 ? TiePolicy::PromoteGroup : TiePolicy::DemoteGroup;
            const auto table = table_of(rows);
            const auto bands = assign_bands(rank_journals(table, "h"), scheme);
            for (const auto& [ni, hi] : rows)
                for (const auto& [nj, hj] : rows)
                    if (*hi >= *hj) CHECK(static_cast<int>(bands.at(ni)) >= static_cast<int>(bands.at(nj)));
        }
    }

    TEST_CASE("cutoff bands depend only on a journal's own h") {
        std::mt19937 rng(4);
        BandScheme scheme;
        scheme.mode = BandMode::HCutoff;
        for (int trial = 0; trial < 300; ++trial) {
            const double h = static_cast<double>(rng() % 40);
            std::vector<std::pair<std::string, std::optional<double>>> rows{{"me", h}};
            const int others = static_cast<int>(rng() % 30);
            for (int i = 0; i < others; ++i) rows.emplace_back("o" + std::to_string(i), static_cast<double>(rng() % 60));
            const auto alone = assign_bands(rank_journals(table_of({{"me", h}}), "h"), scheme).at("me");
            CHECK(assign_bands(rank_journals(table_of(rows), "h"), scheme).at("me") == alone);
            const Band expected = h >= 21 ? Band::A1 : h >= 10 ? Band::A : h >= 5 ? Band::B : Band::C;
            CHECK(alone == expected);
        }
    }

    TEST_CASE("scheme validation") {
        BandScheme bad;
        bad.percentiles = {Rational(1, 2), Rational(85, 100), Rational(1, 4)};
        CHECK_THROWS_AS(bad.validate(), Error);
        BandScheme cut;
        cut.h_cutoffs = {5, 10, 21};
        CHECK_THROWS_AS(cut.validate(), Error);
        CHECK(parse_band("A1") == Band::A1);
        CHECK_THROWS_AS(parse_band("D"), Error);
    }
}
