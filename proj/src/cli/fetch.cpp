#include "commands.hpp"
#include "jrank/error.hpp"
#include "jrank/io.hpp"

#include <ostream>
#include <regex>
#include <thread>

// After Eigen: <resolv.h> defines a `_res` macro that collides with Eigen internals.
#include <httplib.h>

namespace jrank::cli {

namespace {

struct Endpoint {
    std::string origin;  ///< scheme://host[:port]
    std::string path;
};

Endpoint split_url(const std::string& url) {
    static const std::regex pattern(R"(^(https?://[^/?#]+)(/[^?#]*)?$)", std::regex::icase);
    std::smatch match;
    if (!std::regex_match(url, match, pattern)) throw FetchError(kInput, "unsupported URL '" + url + "'");
    return {match[1].str(), match[2].matched ? match[2].str() : "/"};
}

bool blank(std::string_view body) {
    return body.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

} // namespace

std::string fetch_journal(const RemoteSource& source, std::string_view journal, FetchStats* stats) {
    if (source.page_size < 1) throw FetchError(kInput, "page size must be at least 1");
    if (source.delay.count() < 0 || source.backoff.count() < 0) throw FetchError(kInput, "delays must be >= 0");
    if (source.max_retries < 0) throw FetchError(kInput, "retries must be >= 0");

    const auto endpoint = split_url(source.base_url);
    httplib::Client client(endpoint.origin);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(source.timeout);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_keep_alive(false);

    using Clock = std::chrono::steady_clock;
    // Measured from the end of the previous exchange.
    std::optional<Clock::time_point> last_done;
    auto wait_politely = [&](std::chrono::milliseconds at_least) {
        if (!last_done) return;
        const auto ready = *last_done + std::max(source.delay, at_least);
        std::this_thread::sleep_until(ready);
    };

    FetchStats local;
    std::string body_all;
    for (int page = 1;; ++page) {
        const httplib::Params params{{"journal", std::string(journal)},
                                     {"page", std::to_string(page)},
                                     {"page_size", std::to_string(source.page_size)}};
        std::string body;
        for (int attempt = 0;; ++attempt) {
            const std::chrono::milliseconds backoff =
                attempt == 0 ? std::chrono::milliseconds(0) : source.backoff * (std::int64_t{1} << (attempt - 1));
            wait_politely(backoff);
            ++local.requests;
            auto result = client.Get(endpoint.path, params, httplib::Headers{});
            last_done = Clock::now();

            std::string failure;
            if (!result) {
                failure = "request failed: " + httplib::to_string(result.error());
            } else if (result->status >= 500) {
                failure = "server returned " + std::to_string(result->status);
            } else if (result->status != 200) {
                throw FetchError(kNetwork, "page " + std::to_string(page) + ": server returned " +
                                               std::to_string(result->status));
            } else {
                body = std::move(result->body);
                break;
            }
            if (attempt >= source.max_retries)
                throw FetchError(kNetwork, "page " + std::to_string(page) + ": " + failure + " after " +
                                               std::to_string(attempt + 1) + " attempts");
        }

        if (blank(body)) break;
        try {
            local.lines += parse_records(body, RecordFormat::Jsonl).size();
        } catch (const RowError& e) {
            throw FetchError(kInput, "page " + std::to_string(page) + ": " + e.what());
        }
        ++local.pages;
        if (body.back() != '\n') body.push_back('\n');
        body_all += body;
    }
    if (stats) *stats = local;
    return body_all;
}

int cmd_fetch(const PipelineConfig& config, const RemoteSource& source, const FetchOptions& options,
              std::ostream& out, std::ostream&) {
    if (options.journal.empty()) throw InputError("--journal is required");
    FetchStats stats;
    const auto body = fetch_journal(source, options.journal, &stats);
    const auto path = options.output.empty()
                          ? config.out / (io::journal_slug(normalize_title(options.journal)) + ".jsonl")
                          : options.output;
    io::write_file(path, body);
    out << "pages: " << stats.pages << "\nrequests: " << stats.requests << "\nrecords: " << stats.lines
        << "\noutput: " << path.string() << '\n';
    return kOk;
}

} // namespace jrank::cli
