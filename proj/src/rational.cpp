#include "jrank/rational.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "jrank/error.hpp"

namespace jrank {

namespace {

std::string render_scaled(__int128 scaled, bool negative, int digits) {
    std::string text;
    if (scaled == 0) text = "0";
    while (scaled > 0) {
        text.insert(text.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
        scaled /= 10;
    }
    if (digits > 0) {
        if (text.size() <= static_cast<std::size_t>(digits))
            text.insert(0, static_cast<std::size_t>(digits) + 1 - text.size(), '0');
        text.insert(text.size() - static_cast<std::size_t>(digits), 1, '.');
    }
    if (negative && text.find_first_not_of("0.") != std::string::npos) text.insert(0, 1, '-');
    return text;
}

} // namespace

std::string format_fixed(const Rational& value, int digits) {
    if (digits < 0 || digits > 18) throw Error(Errc::InvalidArgument, "digits out of range");
    __int128 num = value.numerator();
    const __int128 den = value.denominator();
    const bool negative = num < 0;
    if (negative) num = -num;
    __int128 scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    // floor(num * scale / den + 1/2)
    const __int128 scaled = (2 * num * scale + den) / (2 * den);
    return render_scaled(scaled, negative, digits);
}

std::string format_fixed(double value, int digits) {
    if (std::isnan(value)) return "NA";
    if (digits < 0 || digits > 12) throw Error(Errc::InvalidArgument, "digits out of range");
    const double scale = std::pow(10.0, digits);
    // Values within a few ulps of a half count as halves.
    const double magnitude = std::fabs(value) * scale;
    const double rounded = std::floor(magnitude * (1.0 + 4 * 2.220446049250313e-16) + 0.5);
    if (rounded > 9.0e18) throw Error(Errc::InvalidArgument, "value too large to format");
    return render_scaled(static_cast<__int128>(rounded), value < 0, digits);
}

Rational parse_decimal(std::string_view text) {
    auto fail = [&] { return Error(Errc::InvalidArgument, "not a decimal number: '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        pos = 1;
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool seen_digit = false;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        const char ch = text[pos];
        if (ch == '.' && !seen_point) {
            seen_point = true;
            continue;
        }
        if (ch < '0' || ch > '9') throw fail();
        seen_digit = true;
        if (num > (INT64_MAX - 9) / 10 || (seen_point && den > INT64_MAX / 10)) throw fail();
        num = num * 10 + (ch - '0');
        if (seen_point) den *= 10;
    }
    if (!seen_digit) throw fail();
    return Rational(negative ? -num : num, den);
}

} // namespace jrank
