#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace jrank::io {

struct CsvRow {
    std::size_t line;  ///< physical line the row starts on
    std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
/// newlines. Blank lines are skipped; so are lines starting with '#' when
/// skip_comments is set. Throws MalformedRow on an unterminated quote.
std::vector<CsvRow> read_delimited(std::string_view text, char separator, bool skip_comments);

} // namespace jrank::io
