#include "commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <ostream>
#include <set>

#include "jrank/distribution.hpp"
#include "jrank/error.hpp"
#include "jrank/io.hpp"
#include "jrank/metrics.hpp"

namespace jrank::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kIndexFile = "journals.tsv";
constexpr const char* kRecordsDir = "records";

std::string shortest(double value) {
    std::array<char, 64> buffer{};
    auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), ptr);
}

std::string cell(const std::optional<double>& value) { return value ? shortest(*value) : std::string(); }

std::string window_label(const TimeWindow& w) {
    return std::to_string(w.first_year) + "_" + std::to_string(w.last_year);
}

template <typename Parse>
auto with_file_context(const fs::path& path, Parse&& parse) {
    try {
        return parse();
    } catch (const RowError& e) {
        throw InputError(path.string() + ": " + e.what());
    } catch (const Error& e) {
        if (e.code() == Errc::Io) throw;
        throw InputError(path.string() + ": " + e.what());
    }
}

AbbreviationTable load_abbreviations(const PipelineConfig& config) {
    if (config.abbreviations.empty()) return {};
    const auto text = io::read_file(config.abbreviations);
    return with_file_context(config.abbreviations, [&] { return io::parse_abbreviations(text); });
}

RecordFormat format_for(const fs::path& path, const std::string& requested) {
    if (requested == "csv") return RecordFormat::Csv;
    if (requested == "jsonl") return RecordFormat::Jsonl;
    if (!requested.empty()) throw InputError("unknown record format '" + requested + "'");
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".csv" ? RecordFormat::Csv : RecordFormat::Jsonl;
}

// Most frequent raw spelling that folds to the canonical title itself (not an
// abbreviation); ties go to the lexicographically smallest.
std::string display_name(const RecordSet& set) {
    std::map<std::string, int> counts;
    for (const auto& record : set.records)
        if (normalize_title(record.journal_raw) == set.journal_canonical) ++counts[record.journal_raw];
    std::string best = set.journal_canonical;
    int best_count = 0;
    for (const auto& [name, count] : counts)
        if (count > best_count) {
            best = name;
            best_count = count;
        }
    return best;
}

std::string tsv_field(std::string text) {
    std::replace(text.begin(), text.end(), '\t', ' ');
    std::replace(text.begin(), text.end(), '\n', ' ');
    std::replace(text.begin(), text.end(), '\r', ' ');
    return text;
}

// ---------------------------------------------------------------------------
// Cleaned data directory

struct JournalData {
    RecordSet set;
    std::string display;
};

struct DataDir {
    std::vector<JournalData> journals;
    int census_year = 0;
    TimeWindow window{kEarliestYear, kEarliestYear};

    const JournalData* find(const std::string& canonical) const {
        for (const auto& j : journals)
            if (j.set.journal_canonical == canonical) return &j;
        return nullptr;
    }
};

DataDir load_data(const PipelineConfig& config) {
    const fs::path index_path = config.data / kIndexFile;
    const auto index = io::read_file(index_path);
    const auto rows = with_file_context(index_path, [&] { return io::read_delimited(index, '\t', true); });

    DataDir data;
    std::optional<int> max_year;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& fields = rows[r].fields;
        if (fields.size() < 3)
            throw InputError(index_path.string() + ":" + std::to_string(rows[r].line) + ": expected journal, display, file");
        const fs::path file = config.data / fields[2];
        const auto text = io::read_file(file);
        JournalData journal;
        journal.set.journal_canonical = fields[0];
        journal.display = fields[1];
        journal.set.records = with_file_context(file, [&] { return parse_records(text, RecordFormat::Jsonl); });
        for (const auto& record : journal.set.records)
            if (record.year) max_year = std::max(max_year.value_or(*record.year), *record.year);
        data.journals.push_back(std::move(journal));
    }

    if (config.census_year) {
        data.census_year = *config.census_year;
        if (max_year && *max_year > data.census_year)
            throw InputError("census year " + std::to_string(data.census_year) + " precedes record year " +
                             std::to_string(*max_year));
    } else {
        if (!max_year) throw InputError("no dated records; pass --census");
        data.census_year = *max_year;
    }
    data.window = config.window.value_or(TimeWindow::lifetime(data.census_year));
    if (data.window.last_year > data.census_year)
        throw InputError("window ends after census year " + std::to_string(data.census_year));
    for (auto& journal : data.journals) journal.set.census_year = data.census_year;
    return data;
}

std::map<std::string, std::vector<ExpertRating>> load_ratings(const PipelineConfig& config,
                                                              const AbbreviationTable& table) {
    std::map<std::string, std::vector<ExpertRating>> by_journal;
    if (config.ratings.empty()) return by_journal;
    const auto text = io::read_file(config.ratings);
    auto ratings = with_file_context(config.ratings, [&] { return io::parse_ratings(text); });
    for (auto& rating : ratings) {
        rating.journal = normalize_title(rating.journal, table);
        by_journal[rating.journal].push_back(std::move(rating));
    }
    return by_journal;
}

void add_weighted_scores(IndicatorTable& table, const std::map<std::string, std::vector<ExpertRating>>& ratings,
                         const BandWeights& weights, std::ostream& err) {
    std::vector<std::optional<double>> scores(table.journals.size());
    for (const auto& [journal, list] : ratings) {
        if (auto row = table.row_of(journal))
            scores[*row] = to_double(weighted_score(list, weights));
        else
            err << "warning: ratings for unknown journal '" << journal << "' ignored\n";
    }
    table.columns["weighted_score"] = std::move(scores);
}

std::string normalize_requested(const std::string& name, const AbbreviationTable& table) {
    return normalize_title(name, table);
}

} // namespace

// ---------------------------------------------------------------------------
// ingest

int cmd_ingest(const PipelineConfig& config, const IngestOptions& options, std::ostream& out, std::ostream& err) {
    if (config.records.empty()) throw InputError("--records is required");
    const auto table = load_abbreviations(config);
    const auto bytes = io::read_file(config.records);
    ParseOptions parse_options;
    parse_options.census_year = config.census_year;
    const auto format = format_for(config.records, options.format);
    const auto records = with_file_context(config.records, [&] { return parse_records(bytes, format, parse_options); });
    if (records.empty()) err << "warning: " << config.records.string() << " holds no records\n";

    const auto groups = group_by_journal(records, table, config.census_year.value_or(0));

    std::string index = "journal\tdisplay\tfile\trecords\tcites\n";
    std::string summary = "journal\trecords_in\trecords_out\tmerged_groups\tambiguous\tcites_in\tcites_out\tabsent_year\n";
    std::string report = "journal\tgroup\tmembers\tcites_total\tkept_title\tmerged_titles\n";
    std::int64_t cites_in = 0, cites_out = 0;
    std::size_t merged_groups = 0;

    for (const auto& group : groups) {
        auto merged = merge_duplicates(group.records, config.max_edit_distance, table);
        const auto slug = io::journal_slug(group.journal_canonical);
        const auto file = std::string(kRecordsDir) + "/" + slug + ".jsonl";
        io::write_file(config.out / file, io::records_to_jsonl(merged.records));

        RecordSet cleaned{group.journal_canonical, merged.records, group.census_year};
        const auto absent = std::count_if(merged.records.begin(), merged.records.end(),
                                          [](const PaperRecord& r) { return !r.year; });
        index += group.journal_canonical + '\t' + tsv_field(display_name(cleaned)) + '\t' + file + '\t' +
                 std::to_string(merged.records.size()) + '\t' + std::to_string(merged.report.cites_after) + '\n';
        summary += group.journal_canonical + '\t' + std::to_string(group.records.size()) + '\t' +
                   std::to_string(merged.records.size()) + '\t' + std::to_string(merged.report.groups.size()) + '\t' +
                   std::to_string(merged.report.ambiguous.size()) + '\t' + std::to_string(merged.report.cites_before) +
                   '\t' + std::to_string(merged.report.cites_after) + '\t' + std::to_string(absent) + '\n';
        for (std::size_t g = 0; g < merged.report.groups.size(); ++g) {
            const auto& mg = merged.report.groups[g];
            std::string titles;
            for (const auto member : mg.members) {
                if (!titles.empty()) titles += " | ";
                titles += tsv_field(group.records[member].title);
            }
            report += group.journal_canonical + '\t' + std::to_string(g + 1) + '\t' + std::to_string(mg.members.size()) +
                      '\t' + std::to_string(mg.cites_total) + '\t' + tsv_field(mg.kept_title) + '\t' + titles + '\n';
        }
        cites_in += merged.report.cites_before;
        cites_out += merged.report.cites_after;
        merged_groups += merged.report.groups.size();
    }

    io::write_file(config.out / kIndexFile, index);
    io::write_file(config.out / "summary.tsv", summary);
    io::write_file(config.out / "merge_report.tsv", report);
    out << "journals: " << groups.size() << "\nrecords: " << records.size() << "\nmerged_groups: " << merged_groups
        << "\ncites_in: " << cites_in << "\ncites_out: " << cites_out << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// rank

int cmd_rank(const PipelineConfig& config, const RankOptions& options, std::ostream& out, std::ostream& err) {
    const auto abbreviations = load_abbreviations(config);
    IndicatorTable table;
    std::map<std::string, std::string> display;
    std::string key = options.key_column;

    if (!config.table.empty()) {
        const auto text = io::read_file(config.table);
        auto loaded = with_file_context(config.table, [&] { return io::parse_indicator_table(text); });
        table = std::move(loaded.table);
        for (std::size_t i = 0; i < table.journals.size(); ++i) display[table.journals[i]] = loaded.display_names[i];
        if (!table.columns.count(key)) throw InputError(config.table.string() + ": no numeric column '" + key + "'");
    } else if (!config.data.empty()) {
        const auto data = load_data(config);
        key = "h_index";
        std::vector<std::optional<double>> h, jif;
        for (const auto& journal : data.journals) {
            table.journals.push_back(journal.set.journal_canonical);
            display[journal.set.journal_canonical] = journal.display;
            h.emplace_back(windowed_h(journal.set, data.window));
            try {
                jif.emplace_back(to_double(impact_factor(journal.set, data.census_year)));
            } catch (const Error& e) {
                if (e.code() != Errc::NoSourceItems && e.code() != Errc::MissingByYearData) throw;
                jif.emplace_back(std::nullopt);
            }
        }
        table.columns["h_index"] = std::move(h);
        table.columns["jif"] = std::move(jif);
    } else {
        throw InputError("rank needs --data or --table");
    }

    const auto ratings = load_ratings(config, abbreviations);
    if (!config.ratings.empty()) add_weighted_scores(table, ratings, config.weights, err);

    const auto ranked = rank_journals(table, key);
    std::string tsv = "title\tjif\th_index\tclass";
    if (!config.ratings.empty()) tsv += "\tweighted_score";
    tsv += '\n';
    if (!ranked.empty()) {
        const auto bands = assign_bands(ranked, config.scheme);
        const auto* jif = table.columns.count("jif") ? &table.column("jif") : nullptr;
        for (const auto& entry : ranked) {
            const auto row = *table.row_of(entry.journal);
            tsv += tsv_field(display[entry.journal]) + '\t';
            if (jif && (*jif)[row]) tsv += format_fixed(*(*jif)[row], 3);
            tsv += '\t' + cell(entry.value) + '\t' + to_string(bands.at(entry.journal));
            if (!config.ratings.empty()) {
                const auto& score = table.column("weighted_score")[row];
                tsv += '\t';
                if (score) tsv += format_fixed(Rational(weighted_score(ratings.at(entry.journal), config.weights)), 2);
            }
            tsv += '\n';
        }
    } else {
        err << "warning: no journals to rank\n";
    }
    io::write_file(config.out / "ranking.tsv", tsv);
    out << tsv;
    return kOk;
}

// ---------------------------------------------------------------------------
// compare

namespace {

std::string correlation_tsv(const CorrelationMatrix& matrix) {
    std::string tsv = "column";
    for (const auto& name : matrix.columns) tsv += '\t' + name;
    tsv += '\n';
    for (std::size_t i = 0; i < matrix.columns.size(); ++i) {
        tsv += matrix.columns[i];
        for (std::size_t j = 0; j < matrix.columns.size(); ++j)
            tsv += '\t' + format_fixed(matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), 4);
        tsv += '\n';
    }
    return tsv;
}

std::string optional_fixed(const std::optional<Rational>& value, int digits) {
    return value ? format_fixed(*value, digits) : std::string();
}

struct IndicatorValue {
    std::optional<double> numeric;
    std::string shown;
};

// Indicator rows in panel order: lifetime indicators, then one block per window.
std::vector<std::pair<std::string, IndicatorValue>> indicator_rows(const RecordSet& set, int census_year,
                                                                   const std::vector<TimeWindow>& windows) {
    std::vector<std::pair<std::string, IndicatorValue>> rows;
    auto rational = [](const std::optional<Rational>& r, int digits) {
        return IndicatorValue{r ? std::optional<double>(to_double(*r)) : std::nullopt, optional_fixed(r, digits)};
    };
    auto count = [](std::int64_t v) { return IndicatorValue{static_cast<double>(v), std::to_string(v)}; };

    const auto lifetime = compute_indicators(set, TimeWindow::lifetime(census_year));
    rows.emplace_back("jif", rational(lifetime.jif, 3));
    rows.emplace_back("immediacy", rational(lifetime.immediacy, 3));
    rows.emplace_back("cited_half_life", rational(lifetime.cited_half_life, 1));
    rows.emplace_back("h_lifetime", count(lifetime.h_lifetime));
    rows.emplace_back("absent_year_records", count(static_cast<std::int64_t>(lifetime.dropped_absent_year)));
    for (const auto& w : windows) {
        const auto ind = compute_indicators(set, w);
        const auto label = window_label(w);
        rows.emplace_back("h_" + label, count(ind.h_window));
        rows.emplace_back("total_cites_" + label, count(ind.window.total_cites));
        rows.emplace_back("papers_" + label, count(ind.window.paper_count));
        rows.emplace_back("mean_cites_" + label, IndicatorValue{to_double(ind.window.mean), format_fixed(ind.window.mean, 2)});
    }
    return rows;
}

} // namespace

int cmd_compare(const PipelineConfig& config, const CompareOptions& options, std::ostream& out, std::ostream& err) {
    const auto abbreviations = load_abbreviations(config);
    IndicatorTable table;
    std::vector<std::string> requested;
    for (const auto& name : options.journals) requested.push_back(normalize_requested(name, abbreviations));

    std::string panel;
    std::string years_panel;
    if (!config.table.empty()) {
        const auto text = io::read_file(config.table);
        auto loaded = with_file_context(config.table, [&] { return io::parse_indicator_table(text); });
        table = std::move(loaded.table);
        if (!config.ratings.empty()) add_weighted_scores(table, load_ratings(config, abbreviations), config.weights, err);

        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < requested.size(); ++i) {
            auto row = table.row_of(requested[i]);
            if (!row) throw InputError("unknown journal '" + options.journals[i] + "'");
            rows.push_back(*row);
        }
        if (!rows.empty()) {
            panel = "indicator";
            for (const auto row : rows) panel += '\t' + tsv_field(loaded.display_names[row]);
            panel += '\n';
            for (const auto& [name, column] : table.columns) {
                panel += name;
                for (const auto row : rows) panel += '\t' + cell(column[row]);
                panel += '\n';
            }
        }
    } else if (!config.data.empty()) {
        const auto data = load_data(config);
        std::vector<TimeWindow> windows = options.windows;
        if (windows.empty()) windows.push_back(data.window);
        for (const auto& w : windows)
            if (w.last_year > data.census_year) throw InputError("window ends after census year");

        std::vector<const JournalData*> selected;
        for (std::size_t i = 0; i < requested.size(); ++i) {
            const auto* journal = data.find(requested[i]);
            if (!journal) throw InputError("unknown journal '" + options.journals[i] + "'");
            selected.push_back(journal);
        }

        table.journals.reserve(data.journals.size());
        for (const auto& journal : data.journals) {
            table.journals.push_back(journal.set.journal_canonical);
            for (auto& [name, value] : indicator_rows(journal.set, data.census_year, windows))
                table.columns[name].push_back(value.numeric);
        }
        if (!config.ratings.empty()) add_weighted_scores(table, load_ratings(config, abbreviations), config.weights, err);

        if (!selected.empty()) {
            panel = "indicator";
            std::vector<std::vector<std::pair<std::string, IndicatorValue>>> rows;
            for (const auto* journal : selected) {
                panel += '\t' + tsv_field(journal->display);
                rows.push_back(indicator_rows(journal->set, data.census_year, windows));
            }
            panel += '\n';
            for (std::size_t k = 0; k < rows.front().size(); ++k) {
                panel += rows.front()[k].first;
                for (const auto& row : rows) panel += '\t' + row[k].second.shown;
                panel += '\n';
            }

            years_panel = "journal\tyear\th_index\tpapers\tuncited\tuncited_annualized\tunder_one_per_year\n";
            for (const auto* journal : selected) {
                std::vector<int> years;
                for (int y = data.census_year; y > data.census_year - 10; --y) years.push_back(y);
                const auto hs = h_timeseries(journal->set, years);
                for (const int y : years) {
                    const auto papers = std::count_if(journal->set.records.begin(), journal->set.records.end(),
                                                      [&](const PaperRecord& r) { return r.year == y; });
                    years_panel += tsv_field(journal->display) + '\t' + std::to_string(y) + '\t' +
                                   std::to_string(hs.at(y)) + '\t' + std::to_string(papers);
                    if (papers > 0 && y < data.census_year) {
                        const auto stats = uncited_stats(journal->set, y, data.census_year);
                        years_panel += '\t' + format_fixed(stats.raw_uncited_fraction, 3) + '\t' +
                                       format_fixed(stats.annualized_uncited_fraction, 3) + '\t' +
                                       format_fixed(stats.under_one_per_year_fraction, 3);
                    } else {
                        years_panel += "\t\t\t";
                    }
                    years_panel += '\n';
                }
            }
        }
    } else {
        throw InputError("compare needs --data or --table");
    }

    if (!panel.empty()) {
        io::write_file(config.out / "compare_panel.tsv", panel);
        out << panel;
    }
    if (!years_panel.empty()) io::write_file(config.out / "compare_years.tsv", years_panel);
    if (!options.columns.empty()) {
        for (const auto& name : options.columns)
            if (!table.columns.count(name)) throw InputError("unknown column '" + name + "'");
        const auto matrix = correlation_matrix(table, options.columns, MissingCorrelation::ReportNaN);
        const auto tsv = correlation_tsv(matrix);
        io::write_file(config.out / "correlation.tsv", tsv);
        out << tsv;
    }
    if (panel.empty() && options.columns.empty()) err << "warning: nothing to compare; pass --journals or --columns\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// fit

int cmd_fit(const PipelineConfig& config, const FitOptions& options, std::ostream& out, std::ostream&) {
    if (config.data.empty()) throw InputError("fit needs --data");
    const auto abbreviations = load_abbreviations(config);
    const auto data = load_data(config);
    const auto canonical = normalize_title(options.journal, abbreviations);
    const auto* journal = data.find(canonical);
    if (!journal) throw InputError("unknown journal '" + options.journal + "'");

    std::vector<std::int64_t> cites;
    for (const auto& record : journal->set.records)
        if (record.year == options.year) cites.push_back(record.cites_total);
    const int h = h_index(cites);
    if (h == 0)
        throw InputError("no cited papers for '" + options.journal + "' in " + std::to_string(options.year));

    const auto cdf = citation_cdf(cites);
    FitResult fit;
    try {
        fit = fit_loglinear(cdf, config.trim_top_fraction);
    } catch (const Error& e) {
        throw InputError(std::string("fit failed: ") + e.what());
    }
    const auto departures = departure_count(cdf, fit, config.departure_factor);

    std::vector<std::int64_t> sorted = cites;
    std::sort(sorted.begin(), sorted.end());
    const auto n = sorted.size();
    const Rational median = n % 2 == 1 ? Rational(sorted[n / 2]) : Rational(sorted[n / 2 - 1] + sorted[n / 2], 2);

    const auto stem = "fit_" + io::journal_slug(canonical) + "_" + std::to_string(options.year);
    std::string points = "F\tlog10_cites\n";
    for (Eigen::Index i = 0; i < cdf.size(); ++i)
        points += format_fixed(cdf.rank_fraction[i], 6) + '\t' + format_fixed(std::log10(cdf.cites[i]), 6) + '\n';
    std::string trend = "F\tlog10_cites_trend\n";
    for (int i = 0; i <= 100; ++i) {
        const double f = i / 100.0;
        trend += format_fixed(f, 2) + '\t' + format_fixed(fit.intercept + fit.slope * f, 6) + '\n';
    }

    std::string summary;
    auto line = [&](const std::string& key, const std::string& value) { summary += key + '\t' + value + '\n'; };
    line("journal", journal->display);
    line("year", std::to_string(options.year));
    line("papers", std::to_string(cdf.n_total));
    line("uncited", std::to_string(cdf.n_uncited));
    line("trim_top_fraction", shortest(config.trim_top_fraction));
    line("fit_points", std::to_string(fit.n_points));
    line("intercept", format_fixed(fit.intercept, 6));
    line("slope", format_fixed(fit.slope, 6));
    line("r_squared", format_fixed(fit.r_squared, 6));
    line("degenerate", fit.degenerate ? "true" : "false");
    line("h_index", std::to_string(h));
    line("median_empirical", format_fixed(median, 2));
    line("median_h_over_3", format_fixed(median_estimate_from_h(h), 2));
    line("departure_factor", shortest(config.departure_factor));
    line("departures", std::to_string(departures));

    io::write_file(config.out / (stem + "_points.tsv"), points);
    io::write_file(config.out / (stem + "_trend.tsv"), trend);
    io::write_file(config.out / (stem + "_summary.tsv"), summary);
    out << summary;
    return kOk;
}

} // namespace jrank::cli
