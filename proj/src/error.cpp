#include "jrank/error.hpp"

namespace jrank {

const char* to_string(Errc code) noexcept {
    switch (code) {
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::InconsistentCites: return "InconsistentCites";
    case Errc::NoSourceItems: return "NoSourceItems";
    case Errc::MissingByYearData: return "MissingByYearData";
    case Errc::NoCitations: return "NoCitations";
    case Errc::InvalidAge: return "InvalidAge";
    case Errc::NoRatings: return "NoRatings";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::UnknownColumn: return "UnknownColumn";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::AllUncited: return "AllUncited";
    case Errc::InsufficientPoints: return "InsufficientPoints";
    case Errc::EmptyTally: return "EmptyTally";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    case Errc::Network: return "Network";
    }
    return "Unknown";
}

} // namespace jrank
