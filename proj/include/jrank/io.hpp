#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "jrank/corpus.hpp"
#include "jrank/csv.hpp"
#include "jrank/ranking.hpp"

namespace jrank::io {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// One JSON object per line, keys in schema order.
std::string records_to_jsonl(std::span<const PaperRecord> records);

/// Two-column CSV "abbrev,canonical"; an optional header row is recognized.
AbbreviationTable parse_abbreviations(std::string_view text);

/// CSV "journal,expert_id,band". Duplicate (journal, expert) pairs are rejected.
std::vector<ExpertRating> parse_ratings(std::string_view text);

/// TSV whose first column names the journal; remaining columns are numeric
/// with empty cells meaning ABSENT. Columns holding any non-numeric cell are
/// kept as text columns and excluded from the numeric map.
struct LoadedTable {
    IndicatorTable table;
    std::vector<std::string> display_names;  ///< first column as written
    std::map<std::string, std::vector<std::string>> text_columns;
};
LoadedTable parse_indicator_table(std::string_view text);

std::string indicator_table_to_tsv(const IndicatorTable& table, std::span<const std::string> columns);

/// Filesystem-safe, injective file stem for a normalized journal title.
std::string journal_slug(std::string_view canonical);

} // namespace jrank::io
