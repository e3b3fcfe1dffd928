#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace jrank {

using Rational = boost::rational<std::int64_t>;

/// Decimal rendering with round-half-up (away from zero for negatives).
std::string format_fixed(const Rational& value, int digits);

/// Same rounding rule for floating values; NaN renders as "NA".
std::string format_fixed(double value, int digits);

/// Parses an exact decimal such as "0.975", "-2", "1e-3" is rejected.
Rational parse_decimal(std::string_view text);

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

} // namespace jrank
