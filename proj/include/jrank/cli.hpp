#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jrank/corpus.hpp"
#include "jrank/ranking.hpp"

namespace jrank::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInput = 2,
    kIo = 3,
    kNetwork = 4,
};

struct PipelineConfig {
    std::filesystem::path records;
    std::filesystem::path abbreviations;
    std::filesystem::path ratings;
    std::filesystem::path table;        ///< indicator table, alternative to data
    std::filesystem::path data;         ///< directory written by ingest
    std::filesystem::path out = ".";
    std::optional<TimeWindow> window;
    std::optional<int> census_year;
    BandScheme scheme;
    BandWeights weights;
    std::size_t max_edit_distance = kDefaultMaxEditDistance;
    double trim_top_fraction = 0.10;
    double departure_factor = 2.0;
};

struct RemoteSource {
    std::string base_url;
    int page_size = 100;
    std::chrono::milliseconds timeout{10000};
    int max_retries = 3;
    std::chrono::milliseconds delay{1000};
    std::chrono::milliseconds backoff{500};  ///< first retry wait, doubled per attempt
};

struct FetchStats {
    int pages = 0;
    int requests = 0;
    std::size_t lines = 0;
};

/// Thrown by fetch_journal; carries the exit code to report.
class FetchError : public std::runtime_error {
public:
    FetchError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

/// Pages through the source until an empty page and returns the concatenated
/// JSONL body. Every page is validated against the corpus schema.
std::string fetch_journal(const RemoteSource& source, std::string_view journal, FetchStats* stats = nullptr);

/// Entry point shared by the jrank binary and the tests.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace jrank::cli
