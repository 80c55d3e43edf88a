#include "tracknet/warc.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>

#include "tracknet/error.hpp"

namespace tracknet {
namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](char c) {
        return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c;
    });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<std::size_t> parse_size(std::string_view s, int base = 10) {
    s = trim(s);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, base);
    if (ec != std::errc() || ptr == s.data()) return std::nullopt;
    return value;
}

// Splits "name: value" header lines starting at `pos` until an empty line.
bool parse_header_lines(std::string_view text, std::size_t& pos, std::map<std::string, std::string>& headers) {
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        auto line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) return true;
        auto colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        headers[lowercase(trim(line.substr(0, colon)))] = std::string(trim(line.substr(colon + 1)));
    }
    return false;
}

std::optional<std::string> dechunk(std::string_view body) {
    std::string out;
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto eol = body.find('\n', pos);
        if (eol == std::string_view::npos) return std::nullopt;
        auto size_text = body.substr(pos, eol - pos);
        if (auto semi = size_text.find(';'); semi != std::string_view::npos) size_text = size_text.substr(0, semi);
        auto size = parse_size(size_text, 16);
        if (!size) return std::nullopt;
        pos = eol + 1;
        if (*size == 0) break;
        if (pos + *size > body.size()) {
            out.append(body.substr(pos));
            break;
        }
        out.append(body.substr(pos, *size));
        pos += *size;
        if (pos < body.size() && body[pos] == '\r') ++pos;
        if (pos < body.size() && body[pos] == '\n') ++pos;
    }
    return out;
}

// gzip or zlib/deflate payload; returns nullopt on corrupt data.
std::optional<std::string> inflate_body(std::string_view body, bool gzip) {
    z_stream zs{};
    int window = gzip ? 15 + 32 : 15;
    if (inflateInit2(&zs, window) != Z_OK) return std::nullopt;
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(body.data()));
    zs.avail_in = static_cast<uInt>(body.size());
    std::string out;
    char chunk[16384];
    int rc = Z_OK;
    while (rc == Z_OK) {
        zs.next_out = reinterpret_cast<Bytef*>(chunk);
        zs.avail_out = sizeof(chunk);
        rc = inflate(&zs, Z_NO_FLUSH);
        out.append(chunk, sizeof(chunk) - zs.avail_out);
        if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;
    }
    inflateEnd(&zs);
    if (rc != Z_STREAM_END && rc != Z_BUF_ERROR) return std::nullopt;
    return out;
}

}  // namespace

const std::string* WarcRecord::header(std::string_view name) const {
    auto it = headers.find(lowercase(name));
    return it == headers.end() ? nullptr : &it->second;
}

struct WarcReader::GzFile {
    gzFile handle = nullptr;
    ~GzFile() {
        if (handle) gzclose(handle);
    }
};

WarcReader::WarcReader(const std::filesystem::path& path) : file_(std::make_unique<GzFile>()) {
    file_->handle = gzopen(path.string().c_str(), "rb");
    if (!file_->handle) throw Error("cannot open WARC file: " + path.string());
    gzbuffer(file_->handle, 1 << 17);
}

WarcReader::~WarcReader() = default;

bool WarcReader::fill() {
    if (eof_) return false;
    if (pos_ > 0) {
        buffer_.erase(0, pos_);
        pos_ = 0;
    }
    char chunk[1 << 16];
    int got = gzread(file_->handle, chunk, sizeof(chunk));
    if (got <= 0) {
        eof_ = true;
        // A corrupt or cut-off gzip member surfaces as a read error.
        int err = 0;
        gzerror(file_->handle, &err);
        if (got < 0 || (err != Z_OK && err != Z_STREAM_END)) truncated_ = true;
        return false;
    }
    buffer_.append(chunk, static_cast<std::size_t>(got));
    return true;
}

std::optional<std::string> WarcReader::read_line() {
    while (true) {
        auto eol = buffer_.find('\n', pos_);
        if (eol != std::string::npos) {
            std::string line = buffer_.substr(pos_, eol - pos_);
            pos_ = eol + 1;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        if (!fill()) {
            if (pos_ < buffer_.size()) {
                std::string line = buffer_.substr(pos_);
                pos_ = buffer_.size();
                return line;
            }
            return std::nullopt;
        }
    }
}

bool WarcReader::read_exact(std::size_t count, std::string& out) {
    while (buffer_.size() - pos_ < count) {
        if (!fill()) break;
    }
    auto available = std::min(count, buffer_.size() - pos_);
    out.assign(buffer_, pos_, available);
    pos_ += available;
    return available == count;
}

std::optional<WarcRecord> WarcReader::next() {
    if (truncated_) return std::nullopt;
    std::optional<std::string> line;
    do {
        line = read_line();
        if (!line) return std::nullopt;
    } while (line->empty());

    WarcRecord record;
    if (!line->starts_with("WARC/")) {
        truncated_ = true;
        return std::nullopt;
    }
    record.version = *line;
    while (true) {
        line = read_line();
        if (!line) {
            truncated_ = true;
            return std::nullopt;
        }
        if (line->empty()) break;
        auto colon = line->find(':');
        if (colon == std::string::npos) continue;
        record.headers[lowercase(trim(std::string_view(*line).substr(0, colon)))] =
            std::string(trim(std::string_view(*line).substr(colon + 1)));
    }
    const std::string* length_text = record.header("content-length");
    auto length = length_text ? parse_size(*length_text) : std::nullopt;
    if (!length) {
        truncated_ = true;
        return std::nullopt;
    }
    if (!read_exact(*length, record.block)) {
        truncated_ = true;
        return std::nullopt;
    }
    return record;
}

std::optional<HttpResponse> parse_http_response(std::string_view block) {
    auto eol = block.find('\n');
    if (eol == std::string_view::npos) return std::nullopt;
    auto status_line = trim(block.substr(0, eol));
    if (!status_line.starts_with("HTTP/")) return std::nullopt;
    HttpResponse response;
    auto space = status_line.find(' ');
    if (space != std::string_view::npos) {
        auto code = parse_size(status_line.substr(space + 1, 3));
        response.status = code ? static_cast<int>(*code) : 0;
    }
    std::size_t pos = eol + 1;
    parse_header_lines(block, pos, response.headers);
    std::string body(block.substr(std::min(pos, block.size())));

    if (auto it = response.headers.find("transfer-encoding");
        it != response.headers.end() && lowercase(it->second).find("chunked") != std::string::npos) {
        if (auto decoded = dechunk(body)) body = std::move(*decoded);
    }
    if (auto it = response.headers.find("content-encoding"); it != response.headers.end()) {
        auto encoding = lowercase(it->second);
        if (encoding.find("gzip") != std::string::npos || encoding.find("deflate") != std::string::npos) {
            if (auto inflated = inflate_body(body, encoding.find("gzip") != std::string::npos)) body = std::move(*inflated);
        }
    }
    response.body = std::move(body);
    return response;
}

}  // namespace tracknet
