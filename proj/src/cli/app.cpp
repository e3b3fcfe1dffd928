#include <algorithm>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "jrank/error.hpp"

namespace jrank::cli {

namespace {

TimeWindow parse_window(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) throw std::invalid_argument(text);
        std::size_t used_first = 0, used_last = 0;
        const int first = std::stoi(text.substr(0, colon), &used_first);
        const int last = std::stoi(text.substr(colon + 1), &used_last);
        if (used_first != colon || used_last != text.size() - colon - 1) throw std::invalid_argument(text);
        return TimeWindow(first, last);
    } catch (const std::logic_error&) {
        throw InputError("window must look like 2000:2007, got '" + text + "'");
    }
}

template <std::size_t N>
std::array<Rational, N> parse_rationals(const std::vector<std::string>& texts, const char* what) {
    if (texts.size() != N) throw InputError(std::string(what) + " needs " + std::to_string(N) + " values");
    std::array<Rational, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = parse_decimal(texts[i]);
    return out;
}

// Strips "--config FILE" / "--config=FILE" out of args and returns FILE.
std::optional<std::string> take_config(std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 1; i < args.size();) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return path;
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Config keys at top level, or in a [subcommand] section, become defaults for
// that subcommand; anything on the command line wins.
void apply_config(const std::string& path, CLI::App& app, std::vector<std::string>& args) {
    std::size_t sub_pos = 0;
    for (std::size_t i = 1; i < args.size(); ++i)
        if (!args[i].empty() && args[i][0] != '-') {
            sub_pos = i;
            break;
        }
    if (sub_pos == 0) return;
    CLI::App* sub = app.get_subcommand_no_throw(args[sub_pos]);
    if (!sub) return;

    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_file(path);
    } catch (const CLI::FileError& e) {
        throw Error(Errc::Io, e.what());
    }
    std::vector<std::string> injected;
    for (const auto& item : items) {
        const bool top = item.parents.empty() || (item.parents.size() == 1 && item.parents[0] == "default");
        const bool section = item.parents.size() == 1 && item.parents[0] == sub->get_name();
        if (!top && !section) continue;
        std::string name = item.name;
        std::replace(name.begin(), name.end(), '_', '-');
        const std::string flag = "--" + name;
        if (!sub->get_option_no_throw(flag) || given(args, flag)) continue;
        std::string value;
        for (const auto& input : item.inputs) value += (value.empty() ? "" : ",") + input;
        injected.push_back(flag + "=" + value);
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, injected.begin(), injected.end());
}

} // namespace

int run(std::span<const std::string> raw_args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(raw_args.begin(), raw_args.end());
    if (args.empty()) args.emplace_back("jrank");

    PipelineConfig config;
    RemoteSource source;
    IngestOptions ingest;
    RankOptions rank;
    CompareOptions compare;
    FitOptions fit;
    FetchOptions fetch;

    std::string window, scheme = "percentile", tie = "demote", out_dir = ".";
    std::vector<std::string> windows, percentiles, weights;
    std::vector<double> cutoffs;
    std::optional<int> census;
    int delay_ms = 1000, timeout_ms = 10000, backoff_ms = 500;

    CLI::App app{"Journal ranking from per-paper citation records", "jrank"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--abbrev", config.abbreviations, "Abbreviation table (abbrev,canonical)");
    };
    auto data_source = [&](CLI::App* sub) {
        sub->add_option("--data", config.data, "Directory written by ingest");
        sub->add_option("--table", config.table, "Indicator table (TSV)");
        sub->add_option("--census", census, "Census year");
        sub->add_option("--ratings", config.ratings, "Expert ratings CSV (journal,expert_id,band)");
        sub->add_option("--weights", weights, "Band weights A1,A,B,C")->delimiter(',');
    };

    auto* ingest_cmd = app.add_subcommand("ingest", "Parse, normalize and deduplicate citation records");
    common(ingest_cmd);
    ingest_cmd->add_option("--records", config.records, "Record file (CSV or JSONL)")->required();
    ingest_cmd->add_option("--max-edit", config.max_edit_distance, "Title edit distance for duplicates");
    ingest_cmd->add_option("--census", census, "Census year (upper bound for record years)");
    ingest_cmd->add_option("--format", ingest.format, "csv or jsonl (default: by extension)");

    auto* fetch_cmd = app.add_subcommand("fetch", "Download a journal's records from a paged JSONL source");
    fetch_cmd->add_option("--out", out_dir, "Output directory");
    fetch_cmd->add_option("--url", source.base_url, "Base URL of the paged source")->required();
    fetch_cmd->add_option("--journal", fetch.journal, "Journal to request")->required();
    fetch_cmd->add_option("--page-size", source.page_size, "Records per page");
    fetch_cmd->add_option("--delay", delay_ms, "Minimum milliseconds between requests");
    fetch_cmd->add_option("--retries", source.max_retries, "Retries per page on 5xx or timeout");
    fetch_cmd->add_option("--timeout", timeout_ms, "Request timeout in milliseconds");
    fetch_cmd->add_option("--backoff", backoff_ms, "First retry wait in milliseconds, doubled per retry");
    fetch_cmd->add_option("--output", fetch.output, "Output file (default: <out>/<journal>.jsonl)");

    auto* rank_cmd = app.add_subcommand("rank", "Rank journals and assign A1/A/B/C classes");
    common(rank_cmd);
    data_source(rank_cmd);
    rank_cmd->add_option("--window", window, "Publication window Y1:Y2 (default: lifetime)");
    rank_cmd->add_option("--key", rank.key_column, "Ranking column when reading --table");
    rank_cmd->add_option("--scheme", scheme, "percentile or cutoff")->check(CLI::IsMember({"percentile", "cutoff"}));
    rank_cmd->add_option("--cutoffs", cutoffs, "h cutoffs for A1,A,B")->delimiter(',')->expected(3);
    rank_cmd->add_option("--percentiles", percentiles, "Lower percentiles for A1,A,B")->delimiter(',');
    rank_cmd->add_option("--tie", tie, "Tie groups straddling a boundary: promote or demote")
        ->check(CLI::IsMember({"promote", "demote"}));

    auto* compare_cmd = app.add_subcommand("compare", "Indicator panels and correlation matrix");
    common(compare_cmd);
    data_source(compare_cmd);
    compare_cmd->add_option("--journals", compare.journals, "Journals to tabulate")->delimiter(',');
    compare_cmd->add_option("--columns", compare.columns, "Columns to correlate")->delimiter(',');
    compare_cmd->add_option("--window", windows, "Publication window Y1:Y2 (repeatable)");

    auto* fit_cmd = app.add_subcommand("fit", "Fit the log-linear citation trend for one cohort");
    common(fit_cmd);
    fit_cmd->add_option("--data", config.data, "Directory written by ingest")->required();
    fit_cmd->add_option("--census", census, "Census year");
    fit_cmd->add_option("--journal", fit.journal, "Journal")->required();
    fit_cmd->add_option("--year", fit.year, "Publication year")->required();
    fit_cmd->add_option("--trim", config.trim_top_fraction, "Head fraction excluded from the fit");
    fit_cmd->add_option("--factor", config.departure_factor, "Departure threshold over the trend");

    try {
        if (auto path = take_config(args)) apply_config(*path, app, args);
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kOk : kUsage;
        }

        config.out = out_dir;
        config.census_year = census;
        if (!window.empty()) config.window = parse_window(window);
        for (const auto& w : windows) compare.windows.push_back(parse_window(w));
        if (config.window && config.census_year && config.window->last_year > *config.census_year)
            throw InputError("window ends after census year");
        if (!weights.empty()) {
            const auto w = parse_rationals<4>(weights, "--weights");
            config.weights = BandWeights(w[0], w[1], w[2], w[3]);
        }
        config.scheme.mode = scheme == "cutoff" ? BandMode::HCutoff : BandMode::Percentile;
        config.scheme.tie_policy = tie == "promote" ? TiePolicy::PromoteGroup : TiePolicy::DemoteGroup;
        if (!cutoffs.empty()) std::copy(cutoffs.begin(), cutoffs.end(), config.scheme.h_cutoffs.begin());
        if (!percentiles.empty()) config.scheme.percentiles = parse_rationals<3>(percentiles, "--percentiles");
        config.scheme.validate();
        source.delay = std::chrono::milliseconds(delay_ms);
        source.timeout = std::chrono::milliseconds(timeout_ms);
        source.backoff = std::chrono::milliseconds(backoff_ms);

        if (*ingest_cmd) return cmd_ingest(config, ingest, out, err);
        if (*fetch_cmd) return cmd_fetch(config, source, fetch, out, err);
        if (*rank_cmd) return cmd_rank(config, rank, out, err);
        if (*compare_cmd) return cmd_compare(config, compare, out, err);
        if (*fit_cmd) return cmd_fit(config, fit, out, err);
        return kUsage;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    } catch (const FetchError& e) {
        err << "error: " << e.what() << '\n';
        return e.code();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == Errc::Io ? kIo : kInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    }
}

} // namespace jrank::cli
