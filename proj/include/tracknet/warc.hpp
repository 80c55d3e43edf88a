#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace tracknet {

struct WarcRecord {
    std::string version;                        // e.g. "WARC/1.0"
    std::map<std::string, std::string> headers;  // names lowercased
    std::string block;

    const std::string* header(std::string_view name) const;
};

// Sequential reader over a WARC file. Plain and gzip-per-record
// (multi-member) files are both accepted.
class WarcReader {
public:
    explicit WarcReader(const std::filesystem::path& path);
    ~WarcReader();
    WarcReader(const WarcReader&) = delete;
    WarcReader& operator=(const WarcReader&) = delete;

    // Next complete record, or nullopt at end of input. A record whose
    // block is shorter than its Content-Length, or whose header is
    // malformed, ends the stream with truncated() set.
    std::optional<WarcRecord> next();

    bool truncated() const noexcept { return truncated_; }

private:
    bool fill();
    std::optional<std::string> read_line();
    bool read_exact(std::size_t count, std::string& out);

    struct GzFile;
    std::unique_ptr<GzFile> file_;
    std::string buffer_;
    std::size_t pos_ = 0;
    bool eof_ = false;
    bool truncated_ = false;
};

struct HttpResponse {
    int status = 0;
    std::map<std::string, std::string> headers;  // names lowercased
    std::string body;                            // transfer/content decoded
};

// Parses an HTTP/1.x response message as stored in a WARC response block.
std::optional<HttpResponse> parse_http_response(std::string_view block);

}  // namespace tracknet
