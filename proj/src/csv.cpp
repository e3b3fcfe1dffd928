#include "jrank/csv.hpp"

#include "jrank/error.hpp"

namespace jrank::io {

std::vector<CsvRow> read_delimited(std::string_view text, char separator, bool skip_comments) {
    std::vector<CsvRow> rows;
    std::size_t pos = 0;
    std::size_t line = 1;
    const std::size_t size = text.size();

    while (pos < size) {
        const std::size_t row_line = line;
        if (text[pos] == '\n' || (text[pos] == '\r' && pos + 1 < size && text[pos + 1] == '\n')) {
            pos += text[pos] == '\r' ? 2 : 1;
            ++line;
            continue;
        }
        if (skip_comments && text[pos] == '#') {
            const auto eol = text.find('\n', pos);
            pos = eol == std::string_view::npos ? size : eol + 1;
            ++line;
            continue;
        }

        CsvRow row{row_line, {}};
        std::string field;
        bool quoted = false;
        bool field_started = false;
        while (pos < size) {
            const char ch = text[pos];
            if (quoted) {
                if (ch == '"') {
                    if (pos + 1 < size && text[pos + 1] == '"') {
                        field.push_back('"');
                        pos += 2;
                        continue;
                    }
                    quoted = false;
                    ++pos;
                    continue;
                }
                if (ch == '\n') ++line;
                field.push_back(ch);
                ++pos;
                continue;
            }
            if (ch == '"' && !field_started) {
                quoted = true;
                field_started = true;
                ++pos;
                continue;
            }
            if (ch == separator) {
                row.fields.push_back(std::move(field));
                field.clear();
                field_started = false;
                ++pos;
                continue;
            }
            if (ch == '\r' && pos + 1 < size && text[pos + 1] == '\n') {
                ++pos;
                continue;
            }
            if (ch == '\n') break;
            field.push_back(ch);
            field_started = true;
            ++pos;
        }
        if (quoted) throw RowError(Errc::MalformedRow, row_line, "unterminated quoted field");
        row.fields.push_back(std::move(field));
        rows.push_back(std::move(row));
        if (pos < size) {
            ++pos;
            ++line;
        }
    }
    return rows;
}

} // namespace jrank::io
