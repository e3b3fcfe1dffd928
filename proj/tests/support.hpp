#pragma once

// Helpers shared by the CLI, fetch and acceptance tests.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "jrank/cli.hpp"
#include "jrank/io.hpp"

// After the Eigen-based headers: <resolv.h> defines a `_res` macro.
#include <httplib.h>

namespace support {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& name) { return fs::path(JRANK_FIXTURES) / name; }

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        for (;;) {
            path_ = fs::temp_directory_path() / ("jrank-test-" + std::to_string(rd()));
            if (fs::create_directory(path_)) break;
        }
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const noexcept { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }
    std::string str() const { return path_.string(); }

private:
    fs::path path_;
};

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

inline RunResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "jrank");
    std::ostringstream out, err;
    RunResult result;
    result.code = jrank::cli::run(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

inline std::string slurp(const fs::path& path) { return jrank::io::read_file(path); }

inline std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (const char c : text) n += c == '\n';
    return n;
}

// Every regular file under root, keyed by relative path.
inline std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file()) files[fs::relative(entry.path(), root).generic_string()] = slurp(entry.path());
    return files;
}

// Local paged-JSONL endpoint. Pages are 1-based; pages past the end are empty.
class StubServer {
public:
    using Clock = std::chrono::steady_clock;

    std::vector<std::string> pages;
    int fail_first = 0;        ///< 500 responses before each page succeeds
    bool always_fail = false;

    StubServer() {
        server_.Get("/records", [this](const httplib::Request& req, httplib::Response& res) {
            std::lock_guard lock(mutex_);
            const int page = std::stoi(req.get_param_value("page"));
            requests_.push_back({Clock::now(), page, req.get_param_value("journal")});
            int& failures = failures_[page];
            if (always_fail || failures < fail_first) {
                ++failures;
                res.status = 500;
                res.set_content("unavailable", "text/plain");
                return;
            }
            const auto index = static_cast<std::size_t>(page - 1);
            res.set_content(index < pages.size() ? pages[index] : std::string(), "application/x-ndjson");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubServer() {
        server_.stop();
        thread_.join();
    }
    StubServer(const StubServer&) = delete;
    StubServer& operator=(const StubServer&) = delete;

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/records"; }

    struct Request {
        Clock::time_point at;
        int page;
        std::string journal;
    };
    std::vector<Request> requests() {
        std::lock_guard lock(mutex_);
        return requests_;
    }

    // Smallest gap between consecutive requests.
    std::chrono::milliseconds min_gap() {
        const auto log = requests();
        auto gap = std::chrono::milliseconds::max();
        for (std::size_t i = 1; i < log.size(); ++i)
            gap = std::min(gap, std::chrono::duration_cast<std::chrono::milliseconds>(log[i].at - log[i - 1].at));
        return gap;
    }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::mutex mutex_;
    std::vector<Request> requests_;
    std::map<int, int> failures_;
};

// Titles that stay more than two edits apart: every base-26 digit of i is
// written three times.
inline std::string distinct_title(int i) {
    std::string title = "Study ";
    for (int d = 0; d < 4; ++d, i /= 26) title.append(3, static_cast<char>('a' + i % 26));
    return title;
}

// Two JSONL records per page.
inline std::vector<std::string> record_pages(int count, int per_page = 2) {
    std::vector<std::string> pages;
    for (int p = 0; p < count; ++p) {
        std::string body;
        for (int r = 0; r < per_page; ++r)
            body += R"({"journal":"Forestry","title":"Paper )" + std::to_string(p * per_page + r) +
                    R"(","year":2003,"cites_total":)" + std::to_string(p + r) + "}\n";
        pages.push_back(body);
    }
    return pages;
}

} // namespace support
