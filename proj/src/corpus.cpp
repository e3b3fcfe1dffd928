#include "jrank/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include <json.hpp>

#include "jrank/csv.hpp"
#include "jrank/error.hpp"

namespace jrank {

using nlohmann::json;

TimeWindow::TimeWindow(int first, int last) : first_year(first), last_year(last) {
    if (first > last)
        throw Error(Errc::InvalidArgument,
                    "window " + std::to_string(first) + ":" + std::to_string(last) + " is reversed");
}

// ---------------------------------------------------------------------------
// Title normalization

namespace {

bool is_ascii_space(unsigned char ch) {
    return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' || ch == '\v';
}

bool is_ascii_punct(unsigned char ch) {
    return (ch >= 33 && ch <= 47) || (ch >= 58 && ch <= 64) || (ch >= 91 && ch <= 96) ||
           (ch >= 123 && ch <= 126);
}

std::string fold_title(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (const char c : raw) {
        const auto ch = static_cast<unsigned char>(c);
        if (is_ascii_punct(ch)) continue;
        if (is_ascii_space(ch)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch - 'A' + 'a') : c);
    }
    return out;
}

} // namespace

AbbreviationTable AbbreviationTable::from_pairs(std::span<const std::pair<std::string, std::string>> pairs) {
    std::map<std::string, std::string, std::less<>> raw;
    for (const auto& [abbrev, canonical] : pairs) {
        std::string key = fold_title(abbrev);
        std::string value = fold_title(canonical);
        if (key.empty() || value.empty())
            throw Error(Errc::InvalidArgument, "empty abbreviation entry");
        if (key == value) continue;
        auto [it, inserted] = raw.emplace(key, value);
        if (!inserted && it->second != value)
            throw Error(Errc::InvalidArgument, "abbreviation '" + key + "' maps to two titles");
    }

    AbbreviationTable table;
    for (const auto& [key, first] : raw) {
        std::set<std::string, std::less<>> seen{key};
        std::string target = first;
        while (true) {
            if (!seen.insert(target).second)
                throw Error(Errc::InvalidArgument, "abbreviation cycle through '" + key + "'");
            auto next = raw.find(target);
            if (next == raw.end()) break;
            target = next->second;
        }
        table.entries_.emplace(key, std::move(target));
    }
    return table;
}

const std::string* AbbreviationTable::find(std::string_view normalized) const {
    auto it = entries_.find(normalized);
    return it == entries_.end() ? nullptr : &it->second;
}

std::string normalize_title(std::string_view raw, const AbbreviationTable& table) {
    std::string folded = fold_title(raw);
    if (const std::string* canonical = table.find(folded)) return *canonical;
    return folded;
}

// ---------------------------------------------------------------------------
// Edit distance

std::size_t edit_distance(std::string_view a, std::string_view b, std::size_t limit) {
    if (a.size() > b.size()) std::swap(a, b);
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (m - n > limit) return limit == static_cast<std::size_t>(-1) ? m - n : limit + 1;

    std::vector<std::size_t> row(n + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t j = 1; j <= m; ++j) {
        std::size_t diagonal = row[0];
        row[0] = j;
        std::size_t best = row[0];
        for (std::size_t i = 1; i <= n; ++i) {
            const std::size_t above = row[i];
            const std::size_t substitution = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[i] = std::min({above + 1, row[i - 1] + 1, substitution});
            diagonal = above;
            best = std::min(best, row[i]);
        }
        if (best > limit) return limit + 1;
    }
    return row[n] > limit ? limit + 1 : row[n];
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::int64_t parse_count(std::string_view text, std::size_t line, const char* field) {
    std::int64_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end || value < 0)
        throw RowError(Errc::MalformedRow, line,
                       std::string(field) + " is not a non-negative integer: '" + std::string(text) + "'");
    return value;
}

void check_year(int year, std::size_t line, const ParseOptions& options) {
    const int upper = options.census_year.value_or(std::numeric_limits<int>::max());
    if (year < kEarliestYear || year > upper)
        throw RowError(Errc::MalformedRow, line, "year " + std::to_string(year) + " out of range");
}

void check_consistency(const PaperRecord& record, std::size_t line) {
    if (!record.cites_by_year) return;
    std::int64_t sum = 0;
    for (const auto& [year, count] : *record.cites_by_year) sum += count;
    if (sum != record.cites_total)
        throw RowError(Errc::InconsistentCites, line,
                       "cites_by_year sums to " + std::to_string(sum) + ", cites_total is " +
                           std::to_string(record.cites_total));
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && is_ascii_space(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && is_ascii_space(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    return text;
}

std::int64_t json_count(const json& value, std::size_t line, const char* field) {
    if (!value.is_number_integer() || (value.is_number_integer() && value.get<std::int64_t>() < 0))
        throw RowError(Errc::MalformedRow, line, std::string(field) + " must be a non-negative integer");
    return value.get<std::int64_t>();
}

PaperRecord record_from_json(std::string_view text, std::size_t line, const ParseOptions& options) {
    json object;
    try {
        object = json::parse(text);
    } catch (const json::parse_error& e) {
        throw RowError(Errc::MalformedRow, line, std::string("invalid JSON: ") + e.what());
    }
    if (!object.is_object()) throw RowError(Errc::MalformedRow, line, "expected a JSON object");

    auto required_string = [&](const char* key) {
        auto it = object.find(key);
        if (it == object.end() || !it->is_string())
            throw RowError(Errc::MalformedRow, line, std::string("missing string field '") + key + "'");
        return it->get<std::string>();
    };

    PaperRecord record;
    record.journal_raw = required_string("journal");
    record.title = required_string("title");

    if (auto it = object.find("authors"); it != object.end() && !it->is_null()) {
        if (!it->is_array()) throw RowError(Errc::MalformedRow, line, "authors must be an array");
        for (const auto& author : *it) {
            if (!author.is_string()) throw RowError(Errc::MalformedRow, line, "authors must be strings");
            record.authors.push_back(author.get<std::string>());
        }
    }

    if (auto it = object.find("year"); it != object.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw RowError(Errc::MalformedRow, line, "year must be an integer");
        const auto year = it->get<std::int64_t>();
        if (year < kEarliestYear || year > 9999)
            throw RowError(Errc::MalformedRow, line, "year " + std::to_string(year) + " out of range");
        record.year = static_cast<int>(year);
        check_year(*record.year, line, options);
    }

    auto cites = object.find("cites_total");
    if (cites == object.end()) throw RowError(Errc::MalformedRow, line, "missing field 'cites_total'");
    record.cites_total = json_count(*cites, line, "cites_total");

    if (auto it = object.find("cites_by_year"); it != object.end() && !it->is_null()) {
        if (!it->is_object()) throw RowError(Errc::MalformedRow, line, "cites_by_year must be an object");
        std::map<int, std::int64_t> by_year;
        for (const auto& [key, value] : it->items()) {
            int year = 0;
            auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), year);
            if (key.size() != 4 || ec != std::errc{} || ptr != key.data() + key.size())
                throw RowError(Errc::MalformedRow, line, "cites_by_year key '" + key + "' is not a year");
            by_year[year] = json_count(value, line, "cites_by_year value");
        }
        record.cites_by_year = std::move(by_year);
    }
    check_consistency(record, line);
    return record;
}

std::vector<PaperRecord> parse_jsonl(std::string_view bytes, const ParseOptions& options) {
    std::vector<PaperRecord> records;
    std::size_t line = 0;
    while (!bytes.empty()) {
        ++line;
        const auto eol = bytes.find('\n');
        std::string_view text = bytes.substr(0, eol);
        bytes.remove_prefix(eol == std::string_view::npos ? bytes.size() : eol + 1);
        if (trim(text).empty()) continue;
        records.push_back(record_from_json(text, line, options));
    }
    return records;
}

std::vector<PaperRecord> parse_csv(std::string_view bytes, const ParseOptions& options) {
    const auto rows = io::read_delimited(bytes, ',', false);
    if (rows.empty()) return {};

    static constexpr std::array<std::string_view, 5> kColumns{"journal", "title", "authors", "year",
                                                              "cites_total"};
    const auto& header = rows.front().fields;
    std::array<std::size_t, kColumns.size()> index{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        auto it = std::find_if(header.begin(), header.end(),
                               [&](const std::string& name) { return trim(name) == kColumns[c]; });
        if (it == header.end())
            throw RowError(Errc::MalformedRow, rows.front().line,
                           "header lacks column '" + std::string(kColumns[c]) + "'");
        index[c] = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<PaperRecord> records;
    records.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.size())
            throw RowError(Errc::MalformedRow, row.line,
                           "expected " + std::to_string(header.size()) + " fields, found " +
                               std::to_string(row.fields.size()));
        PaperRecord record;
        record.journal_raw = row.fields[index[0]];
        record.title = row.fields[index[1]];
        if (trim(record.journal_raw).empty() || trim(record.title).empty())
            throw RowError(Errc::MalformedRow, row.line, "journal and title are required");

        std::string_view authors = row.fields[index[2]];
        while (!authors.empty()) {
            const auto semi = authors.find(';');
            const auto name = trim(authors.substr(0, semi));
            if (!name.empty()) record.authors.emplace_back(name);
            authors.remove_prefix(semi == std::string_view::npos ? authors.size() : semi + 1);
        }

        const auto year = trim(row.fields[index[3]]);
        if (!year.empty()) {
            const auto value = parse_count(year, row.line, "year");
            if (value > 9999) throw RowError(Errc::MalformedRow, row.line, "year out of range");
            record.year = static_cast<int>(value);
            check_year(*record.year, row.line, options);
        }
        record.cites_total = parse_count(trim(row.fields[index[4]]), row.line, "cites_total");
        records.push_back(std::move(record));
    }
    return records;
}

} // namespace

std::vector<PaperRecord> parse_records(std::string_view bytes, RecordFormat format, const ParseOptions& options) {
    return format == RecordFormat::Jsonl ? parse_jsonl(bytes, options) : parse_csv(bytes, options);
}

// ---------------------------------------------------------------------------
// Duplicate merging

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Smaller index becomes the root so roots are independent of union order.
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

struct Candidate {
    std::size_t length;
    std::size_t index;
    bool operator<(const Candidate& other) const {
        return std::tie(length, index) < std::tie(other.length, other.index);
    }
};

std::vector<Candidate> by_length(const std::vector<std::size_t>& indices, const std::vector<std::string>& norm) {
    std::vector<Candidate> out;
    out.reserve(indices.size());
    for (const auto i : indices) out.push_back({norm[i].size(), i});
    std::sort(out.begin(), out.end());
    return out;
}

// Calls visit(i, j) for every pair within one length-sorted list whose titles
// are within max_distance.
template <typename Visit>
void near_pairs(const std::vector<Candidate>& sorted, const std::vector<std::string>& norm,
                std::size_t max_distance, Visit&& visit) {
    for (std::size_t p = 0; p < sorted.size(); ++p) {
        for (std::size_t q = p + 1; q < sorted.size(); ++q) {
            if (sorted[q].length - sorted[p].length > max_distance) break;
            const auto& a = norm[sorted[p].index];
            const auto& b = norm[sorted[q].index];
            if (a == b || (max_distance > 0 && edit_distance(a, b, max_distance) <= max_distance))
                visit(sorted[p].index, sorted[q].index);
        }
    }
}

PaperRecord combine(std::span<const PaperRecord> records, const std::vector<std::size_t>& members) {
    const PaperRecord* longest = &records[members.front()];
    for (const auto i : members) {
        const auto& candidate = records[i];
        if (candidate.title.size() > longest->title.size() ||
            (candidate.title.size() == longest->title.size() && candidate.title < longest->title))
            longest = &candidate;
    }

    PaperRecord merged;
    merged.journal_raw = longest->journal_raw;
    merged.title = longest->title;
    std::set<std::string> authors;
    bool all_by_year = true;
    std::map<int, std::int64_t> by_year;
    for (const auto i : members) {
        const auto& record = records[i];
        if (record.year) merged.year = record.year;
        authors.insert(record.authors.begin(), record.authors.end());
        merged.cites_total += record.cites_total;
        if (record.cites_by_year) {
            for (const auto& [year, count] : *record.cites_by_year) by_year[year] += count;
        } else {
            all_by_year = false;
        }
    }
    merged.authors.assign(authors.begin(), authors.end());
    if (all_by_year) merged.cites_by_year = std::move(by_year);
    return merged;
}

} // namespace

MergeResult merge_duplicates(std::span<const PaperRecord> records, std::size_t max_edit_distance,
                             const AbbreviationTable& table) {
    const std::size_t n = records.size();
    std::vector<std::string> norm(n);
    std::map<int, std::vector<std::size_t>> by_year;
    std::vector<std::size_t> absent;
    std::vector<std::size_t> concrete;
    for (std::size_t i = 0; i < n; ++i) {
        norm[i] = normalize_title(records[i].title, table);
        if (records[i].year) {
            by_year[*records[i].year].push_back(i);
            concrete.push_back(i);
        } else {
            absent.push_back(i);
        }
    }

    DisjointSets sets(n);
    auto unite = [&](std::size_t a, std::size_t b) { sets.unite(a, b); };
    for (const auto& [year, indices] : by_year) near_pairs(by_length(indices, norm), norm, max_edit_distance, unite);
    const auto absent_sorted = by_length(absent, norm);
    near_pairs(absent_sorted, norm, max_edit_distance, unite);

    // Resolve ABSENT-year components against the concrete-year components as
    // they stand now, then apply all unions at once.
    std::map<std::size_t, std::vector<std::size_t>> absent_components;
    for (const auto i : absent) absent_components[sets.find(i)].push_back(i);
    const auto concrete_sorted = by_length(concrete, norm);

    MergeReport report;
    std::vector<std::pair<std::size_t, std::size_t>> bridges;
    for (const auto& [root, members] : absent_components) {
        std::set<std::size_t> matched_roots;
        std::set<int> matched_years;
        for (const auto a : members) {
            const std::size_t length = norm[a].size();
            const std::size_t low = length > max_edit_distance ? length - max_edit_distance : 0;
            auto it = std::lower_bound(concrete_sorted.begin(), concrete_sorted.end(), Candidate{low, 0});
            for (; it != concrete_sorted.end() && it->length <= length + max_edit_distance; ++it) {
                const auto& other = norm[it->index];
                if (norm[a] == other ||
                    (max_edit_distance > 0 && edit_distance(norm[a], other, max_edit_distance) <= max_edit_distance)) {
                    matched_roots.insert(sets.find(it->index));
                    matched_years.insert(*records[it->index].year);
                }
            }
        }
        if (matched_years.size() == 1) {
            for (const auto target : matched_roots) bridges.emplace_back(root, target);
        } else if (matched_years.size() > 1) {
            report.ambiguous.insert(report.ambiguous.end(), members.begin(), members.end());
        }
    }
    for (const auto& [a, b] : bridges) sets.unite(a, b);
    std::sort(report.ambiguous.begin(), report.ambiguous.end());

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);
    // Roots are the smallest member index, so map order is first-appearance order.
    MergeResult result;
    result.records.reserve(groups.size());
    for (const auto& [root, members] : groups) {
        if (members.size() == 1) {
            result.records.push_back(records[root]);
        } else {
            result.records.push_back(combine(records, members));
            report.groups.push_back({members, result.records.back().title, result.records.back().cites_total});
        }
    }
    for (const auto& record : records) report.cites_before += record.cites_total;
    for (const auto& record : result.records) report.cites_after += record.cites_total;
    result.report = std::move(report);
    return result;
}

// ---------------------------------------------------------------------------
// Windows and grouping

WindowedSet filter_window(const RecordSet& set, const TimeWindow& window) {
    WindowedSet out;
    out.set.journal_canonical = set.journal_canonical;
    out.set.census_year = set.census_year;
    for (const auto& record : set.records) {
        if (!record.year) {
            ++out.dropped_absent_year;
        } else if (window.contains(*record.year)) {
            out.set.records.push_back(record);
        }
    }
    return out;
}

std::vector<RecordSet> group_by_journal(std::span<const PaperRecord> records, const AbbreviationTable& table,
                                        int census_year) {
    std::map<std::string, RecordSet> grouped;
    for (const auto& record : records) {
        auto canonical = normalize_title(record.journal_raw, table);
        auto& set = grouped[canonical];
        if (set.journal_canonical.empty()) {
            set.journal_canonical = std::move(canonical);
            set.census_year = census_year;
        }
        set.records.push_back(record);
    }
    std::vector<RecordSet> out;
    out.reserve(grouped.size());
    for (auto& [name, set] : grouped) out.push_back(std::move(set));
    return out;
}

} // namespace jrank
