#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jrank {

enum class Errc {
    MalformedRow,
    InconsistentCites,
    NoSourceItems,
    MissingByYearData,
    NoCitations,
    InvalidAge,
    NoRatings,
    InsufficientData,
    ZeroVariance,
    UnknownColumn,
    EmptyInput,
    AllUncited,
    InsufficientPoints,
    EmptyTally,
    InvalidArgument,
    Io,
    Network,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// Input errors that can be pinned to a physical line (1-based) of the source.
class RowError : public Error {
public:
    RowError(Errc code, std::size_t line, const std::string& reason)
        : Error(code, "line " + std::to_string(line) + ": " + reason), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace jrank
