#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jrank/rational.hpp"

namespace jrank {

inline constexpr int kEarliestYear = 1500;

/// One published item as harvested from a citation source.
struct PaperRecord {
    std::string journal_raw;
    std::string title;
    std::vector<std::string> authors;
    std::optional<int> year;
    std::int64_t cites_total = 0;
    /// Citations received per citing year; when present, sums to cites_total.
    std::optional<std::map<int, std::int64_t>> cites_by_year;

    bool operator==(const PaperRecord&) const = default;
};

struct TimeWindow {
    int first_year;
    int last_year;

    TimeWindow(int first, int last);

    bool contains(int year) const noexcept { return first_year <= year && year <= last_year; }
    bool within(const TimeWindow& outer) const noexcept {
        return outer.first_year <= first_year && last_year <= outer.last_year;
    }

    static TimeWindow lifetime(int census_year) { return {kEarliestYear, census_year}; }
};

/// Maps normalized abbreviations onto normalized canonical titles.
class AbbreviationTable {
public:
    AbbreviationTable() = default;

    /// Keys and values are normalized on insertion. Chains are collapsed so that
    /// every key maps straight to a final title; cycles and self-maps are rejected.
    static AbbreviationTable from_pairs(std::span<const std::pair<std::string, std::string>> pairs);

    const std::string* find(std::string_view normalized) const;
    std::size_t size() const noexcept { return entries_.size(); }
    const std::map<std::string, std::string, std::less<>>& entries() const noexcept { return entries_; }

private:
    std::map<std::string, std::string, std::less<>> entries_;
};

struct RecordSet {
    std::string journal_canonical;
    std::vector<PaperRecord> records;
    int census_year = 0;
};

enum class RecordFormat { Csv, Jsonl };

struct ParseOptions {
    /// Upper bound for record years; unchecked when absent.
    std::optional<int> census_year;
};

std::vector<PaperRecord> parse_records(std::string_view bytes, RecordFormat format,
                                       const ParseOptions& options = {});

/// Lower-cases ASCII, strips ASCII punctuation, collapses whitespace, then
/// resolves abbreviations. Idempotent.
std::string normalize_title(std::string_view raw, const AbbreviationTable& table = {});

/// Levenshtein distance over bytes; returns limit + 1 as soon as the distance
/// is known to exceed limit.
std::size_t edit_distance(std::string_view a, std::string_view b,
                          std::size_t limit = static_cast<std::size_t>(-1));

inline constexpr std::size_t kDefaultMaxEditDistance = 2;

struct MergeGroup {
    std::vector<std::size_t> members;  ///< input indices, ascending
    std::string kept_title;
    std::int64_t cites_total = 0;
};

struct MergeReport {
    std::vector<MergeGroup> groups;    ///< only groups with more than one member
    /// Input indices of ABSENT-year records that matched records of more than
    /// one concrete year and were therefore left alone.
    std::vector<std::size_t> ambiguous;
    std::int64_t cites_before = 0;
    std::int64_t cites_after = 0;
};

struct MergeResult {
    std::vector<PaperRecord> records;
    MergeReport report;
};

/// Collapses split or mistyped duplicates within one journal. Titles are
/// compared after normalize_title(title, table).
MergeResult merge_duplicates(std::span<const PaperRecord> records, std::size_t max_edit_distance,
                             const AbbreviationTable& table = {});

struct WindowedSet {
    RecordSet set;
    std::size_t dropped_absent_year = 0;
};

WindowedSet filter_window(const RecordSet& set, const TimeWindow& window);

/// Groups records by normalized journal title, preserving input order inside
/// each group. Groups come back sorted by canonical title.
std::vector<RecordSet> group_by_journal(std::span<const PaperRecord> records,
                                        const AbbreviationTable& table, int census_year);

} // namespace jrank
