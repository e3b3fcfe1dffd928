#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "jrank/cli.hpp"

namespace jrank::cli {

/// Input problem tied to a file; reported as "path:line: message".
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IngestOptions {
    std::string format;  ///< "csv", "jsonl" or empty for by-extension
};

struct RankOptions {
    std::string key_column = "h_index";
};

struct CompareOptions {
    std::vector<std::string> journals;
    std::vector<std::string> columns;
    std::vector<TimeWindow> windows;
};

struct FitOptions {
    std::string journal;
    int year = 0;
};

struct FetchOptions {
    std::string journal;
    std::filesystem::path output;
};

int cmd_ingest(const PipelineConfig& config, const IngestOptions& options, std::ostream& out, std::ostream& err);
int cmd_rank(const PipelineConfig& config, const RankOptions& options, std::ostream& out, std::ostream& err);
int cmd_compare(const PipelineConfig& config, const CompareOptions& options, std::ostream& out, std::ostream& err);
int cmd_fit(const PipelineConfig& config, const FitOptions& options, std::ostream& out, std::ostream& err);
int cmd_fetch(const PipelineConfig& config, const RemoteSource& source, const FetchOptions& options,
              std::ostream& out, std::ostream& err);

} // namespace jrank::cli
