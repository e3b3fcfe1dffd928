#include "jrank/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "jrank/error.hpp"

namespace jrank::io {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error(Errc::Io, "read failed for " + path.string());
    return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

std::string records_to_jsonl(std::span<const PaperRecord> records) {
    std::string out;
    for (const auto& record : records) {
        nlohmann::ordered_json object;
        object["journal"] = record.journal_raw;
        object["title"] = record.title;
        object["authors"] = record.authors;
        object["year"] = record.year ? nlohmann::ordered_json(*record.year) : nlohmann::ordered_json(nullptr);
        object["cites_total"] = record.cites_total;
        if (record.cites_by_year) {
            nlohmann::ordered_json by_year = nlohmann::ordered_json::object();
            for (const auto& [year, count] : *record.cites_by_year) by_year[std::to_string(year)] = count;
            object["cites_by_year"] = std::move(by_year);
        }
        out += object.dump();
        out += '\n';
    }
    return out;
}

AbbreviationTable parse_abbreviations(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    const auto rows = read_delimited(text, ',', true);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& fields = rows[r].fields;
        if (r == 0 && fields.size() == 2 && fields[0] == "abbrev" && fields[1] == "canonical") continue;
        if (fields.size() != 2)
            throw RowError(Errc::MalformedRow, rows[r].line, "abbreviation rows need exactly 2 fields");
        pairs.emplace_back(fields[0], fields[1]);
    }
    return AbbreviationTable::from_pairs(pairs);
}

std::vector<ExpertRating> parse_ratings(std::string_view text) {
    std::vector<ExpertRating> ratings;
    std::set<std::pair<std::string, std::string>> seen;
    const auto rows = read_delimited(text, ',', true);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& fields = rows[r].fields;
        if (r == 0 && fields.size() == 3 && fields[0] == "journal" && fields[1] == "expert_id") continue;
        if (fields.size() != 3)
            throw RowError(Errc::MalformedRow, rows[r].line, "rating rows need journal,expert_id,band");
        Band band;
        try {
            band = parse_band(fields[2]);
        } catch (const Error& e) {
            throw RowError(Errc::MalformedRow, rows[r].line, e.what());
        }
        auto journal = normalize_title(fields[0]);
        if (!seen.emplace(journal, fields[1]).second)
            throw RowError(Errc::MalformedRow, rows[r].line,
                           "second rating by expert '" + fields[1] + "' for '" + fields[0] + "'");
        ratings.push_back({std::move(journal), fields[1], band});
    }
    return ratings;
}

namespace {

std::optional<double> parse_cell(std::string_view text, bool& numeric) {
    if (text.empty() || text == "NA") return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        numeric = false;
        return std::nullopt;
    }
    return value;
}

} // namespace

LoadedTable parse_indicator_table(std::string_view text) {
    const auto rows = read_delimited(text, '\t', true);
    if (rows.empty()) throw Error(Errc::EmptyInput, "indicator table has no header");
    const auto& header = rows.front().fields;
    if (header.size() < 2) throw RowError(Errc::MalformedRow, rows.front().line, "indicator table needs 2+ columns");

    LoadedTable loaded;
    const std::size_t width = header.size();
    std::vector<std::vector<std::optional<double>>> numeric_cells(width);
    std::vector<std::vector<std::string>> raw_cells(width);
    std::vector<bool> numeric(width, true);
    std::set<std::string> names;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& fields = rows[r].fields;
        if (fields.size() != width)
            throw RowError(Errc::MalformedRow, rows[r].line,
                           "expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
        auto journal = normalize_title(fields[0]);
        if (journal.empty()) throw RowError(Errc::MalformedRow, rows[r].line, "empty journal name");
        if (!names.insert(journal).second)
            throw RowError(Errc::MalformedRow, rows[r].line, "duplicate journal '" + fields[0] + "'");
        loaded.table.journals.push_back(std::move(journal));
        for (std::size_t c = 1; c < width; ++c) {
            bool ok = true;
            numeric_cells[c].push_back(parse_cell(fields[c], ok));
            if (!ok) numeric[c] = false;
            raw_cells[c].push_back(fields[c]);
        }
    }
    for (std::size_t r = 1; r < rows.size(); ++r) loaded.display_names.push_back(rows[r].fields[0]);
    for (std::size_t c = 1; c < width; ++c) {
        if (numeric[c])
            loaded.table.columns[header[c]] = std::move(numeric_cells[c]);
        else
            loaded.text_columns[header[c]] = std::move(raw_cells[c]);
    }
    return loaded;
}

std::string indicator_table_to_tsv(const IndicatorTable& table, std::span<const std::string> columns) {
    std::string out = "journal";
    for (const auto& name : columns) out += '\t' + name;
    out += '\n';
    for (std::size_t r = 0; r < table.journals.size(); ++r) {
        out += table.journals[r];
        for (const auto& name : columns) {
            out += '\t';
            const auto& cell = table.column(name)[r];
            if (cell) {
                std::array<char, 64> buffer{};
                auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), *cell);
                out.append(buffer.data(), ptr);
            }
        }
        out += '\n';
    }
    return out;
}

std::string journal_slug(std::string_view canonical) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string slug;
    for (const char c : canonical) {
        const auto ch = static_cast<unsigned char>(c);
        if ((ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9')) {
            slug.push_back(c);
        } else if (ch == ' ') {
            slug.push_back('_');
        } else {
            slug.push_back('-');
            slug.push_back(kHex[ch >> 4]);
            slug.push_back(kHex[ch & 0xF]);
        }
    }
    return slug.empty() ? std::string("-") : slug;
}

} // namespace jrank::io
