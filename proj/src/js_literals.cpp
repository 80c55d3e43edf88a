#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>

#include "tracknet/extractor.hpp"

namespace tracknet {
namespace {

bool is_ident_start(char c) {
    auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || u >= 0x80 || c == '\\';
}

bool is_ident_part(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool is_line_end(char c) { return c == '\n' || c == '\r'; }

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Decodes one escape sequence starting after the backslash at src[i].
// Advances i past the sequence.
void decode_escape(std::string_view src, std::size_t& i, std::string& out) {
    if (i >= src.size()) return;
    char c = src[i++];
    auto read_hex = [&](std::size_t digits) -> std::int64_t {
        if (i + digits > src.size()) return -1;
        std::int64_t v = 0;
        for (std::size_t k = 0; k < digits; ++k) {
            int h = hex_value(src[i + k]);
            if (h < 0) return -1;
            v = v * 16 + h;
        }
        i += digits;
        return v;
    };
    switch (c) {
        case 'n': out.push_back('\n'); return;
        case 't': out.push_back('\t'); return;
        case 'r': out.push_back('\r'); return;
        case 'b': out.push_back('\b'); return;
        case 'f': out.push_back('\f'); return;
        case 'v': out.push_back('\v'); return;
        case '0': out.push_back('\0'); return;
        case '\r':
            if (i < src.size() && src[i] == '\n') ++i;
            return;
        case '\n': return;
        case 'x': {
            auto v = read_hex(2);
            if (v < 0) out.push_back('x');
            else append_utf8(out, static_cast<std::uint32_t>(v));
            return;
        }
        case 'u': {
            if (i < src.size() && src[i] == '{') {
                auto close = src.find('}', i);
                if (close != std::string_view::npos && close - i <= 7) {
                    std::uint32_t v = 0;
                    bool ok = close > i + 1;
                    for (auto k = i + 1; k < close; ++k) {
                        int h = hex_value(src[k]);
                        if (h < 0) ok = false;
                        else v = v * 16 + static_cast<std::uint32_t>(h);
                    }
                    if (ok && v <= 0x10FFFF) {
                        append_utf8(out, v);
                        i = close + 1;
                        return;
                    }
                }
                out.push_back('u');
                return;
            }
            auto v = read_hex(4);
            if (v < 0) out.push_back('u');
            else append_utf8(out, static_cast<std::uint32_t>(v));
            return;
        }
        default: out.push_back(c); return;
    }
}

enum class Prev { none, operand, op, keyword_op };

bool regex_allowed(Prev prev) { return prev != Prev::operand; }

bool is_regex_preceding_keyword(std::string_view word) {
    static constexpr std::array<std::string_view, 14> kWords = {
        "return", "typeof", "instanceof", "in", "of", "new", "delete",
        "void", "throw", "case", "do", "else", "yield", "await"};
    return std::find(kWords.begin(), kWords.end(), word) != kWords.end();
}

}  // namespace

std::optional<std::vector<std::string>> lex_js_string_literals(std::string_view src) {
    std::vector<std::string> literals;
    // One entry per open "${": the brace depth at which the template resumes.
    std::vector<int> template_stack;
    int brace_depth = 0;
    Prev prev = Prev::none;
    std::size_t i = 0;
    const std::size_t n = src.size();

    // Scans template characters from i until "`" or "${". Returns false on EOF.
    auto scan_template_chunk = [&]() -> bool {
        std::string chunk;
        while (i < n) {
            char c = src[i];
            if (c == '\\') {
                ++i;
                decode_escape(src, i, chunk);
            } else if (c == '`') {
                ++i;
                literals.push_back(std::move(chunk));
                prev = Prev::operand;
                return true;
            } else if (c == '$' && i + 1 < n && src[i + 1] == '{') {
                i += 2;
                literals.push_back(std::move(chunk));
                template_stack.push_back(brace_depth);
                ++brace_depth;
                prev = Prev::op;
                return true;
            } else {
                chunk.push_back(c);
                ++i;
            }
        }
        return false;
    };

    while (i < n) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\f' || c == '\v' || is_line_end(c)) {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && !is_line_end(src[i])) ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            auto close = src.find("*/", i + 2);
            if (close == std::string_view::npos) return std::nullopt;
            i = close + 2;
            continue;
        }
        if (c == '<' && src.substr(i, 4) == "<!--") {
            while (i < n && !is_line_end(src[i])) ++i;
            continue;
        }
        if (c == '"' || c == '\'') {
            const char quote = c;
            std::string value;
            ++i;
            bool closed = false;
            while (i < n) {
                char d = src[i];
                if (d == quote) {
                    ++i;
                    closed = true;
                    break;
                }
                if (is_line_end(d)) return std::nullopt;
                if (d == '\\') {
                    ++i;
                    decode_escape(src, i, value);
                } else {
                    value.push_back(d);
                    ++i;
                }
            }
            if (!closed) return std::nullopt;
            literals.push_back(std::move(value));
            prev = Prev::operand;
            continue;
        }
        if (c == '`') {
            ++i;
            if (!scan_template_chunk()) return std::nullopt;
            continue;
        }
        if (c == '/') {
            if (regex_allowed(prev)) {
                ++i;
                bool in_class = false;
                bool closed = false;
                while (i < n) {
                    char d = src[i];
                    if (is_line_end(d)) return std::nullopt;
                    if (d == '\\') {
                        i += 2;
                        continue;
                    }
                    if (d == '[') in_class = true;
                    else if (d == ']') in_class = false;
                    else if (d == '/' && !in_class) {
                        ++i;
                        closed = true;
                        break;
                    }
                    ++i;
                }
                if (!closed) return std::nullopt;
                while (i < n && is_ident_part(src[i])) ++i;
                prev = Prev::operand;
            } else {
                ++i;
                prev = Prev::op;
            }
            continue;
        }
        if (is_ident_start(c)) {
            auto start = i;
            while (i < n && is_ident_part(src[i])) ++i;
            auto word = src.substr(start, i - start);
            prev = is_regex_preceding_keyword(word) ? Prev::keyword_op : Prev::operand;
            continue;
        }
        if (c >= '0' && c <= '9') {
            while (i < n && (is_ident_part(src[i]) || src[i] == '.')) ++i;
            prev = Prev::operand;
            continue;
        }
        if (c == '.' && i + 1 < n && src[i + 1] >= '0' && src[i + 1] <= '9') {
            ++i;
            while (i < n && (is_ident_part(src[i]) || src[i] == '.')) ++i;
            prev = Prev::operand;
            continue;
        }
        if (c == '{') {
            ++brace_depth;
            ++i;
            prev = Prev::op;
            continue;
        }
        if (c == '}') {
            --brace_depth;
            ++i;
            if (brace_depth < 0) return std::nullopt;
            if (!template_stack.empty() && template_stack.back() == brace_depth) {
                template_stack.pop_back();
                if (!scan_template_chunk()) return std::nullopt;
            } else {
                prev = Prev::operand;
            }
            continue;
        }
        // ")" and "]" end operands; everything else is an operator.
        prev = (c == ')' || c == ']') ? Prev::operand : Prev::op;
        ++i;
    }
    if (!template_stack.empty()) return std::nullopt;
    return literals;
}

std::vector<std::string> scan_quoted_spans(std::string_view src) {
    std::vector<std::string> spans;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        char c = src[i];
        if (c != '"' && c != '\'' && c != '`') {
            ++i;
            continue;
        }
        const char quote = c;
        ++i;
        std::string value;
        while (i < n && src[i] != quote && !is_line_end(src[i])) {
            if (src[i] == '\\') {
                ++i;
                decode_escape(src, i, value);
            } else {
                value.push_back(src[i++]);
            }
        }
        if (i < n && src[i] == quote) ++i;
        spans.push_back(std::move(value));
    }
    return spans;
}

std::optional<std::string> match_uri_literal(std::string_view literal, const UriLiteralPattern& pattern) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; };
    while (!literal.empty() && is_space(literal.front())) literal.remove_prefix(1);
    while (!literal.empty() && is_space(literal.back())) literal.remove_suffix(1);

    std::size_t pos = 0;
    std::string_view prefix;
    // Optional "scheme://".
    {
        std::size_t k = 0;
        if (k < literal.size() && ((literal[k] >= 'a' && literal[k] <= 'z') || (literal[k] >= 'A' && literal[k] <= 'Z'))) {
            while (k < literal.size() && (std::isalnum(static_cast<unsigned char>(literal[k])) || literal[k] == '+' ||
                                          literal[k] == '-' || literal[k] == '.')) {
                ++k;
            }
            if (literal.substr(k, 3) == "://") {
                prefix = literal.substr(0, k + 3);
                pos = k + 3;
            }
        }
    }
    if (prefix.empty() && literal.starts_with("//")) {
        prefix = "//";
        pos = 2;
    }
    if (prefix.empty()) {
        while (pos < literal.size() && literal[pos] == '.') ++pos;
    }

    // Host labels.
    const auto host_start = pos;
    std::size_t labels = 0;
    std::size_t last_label_start = pos;
    while (true) {
        auto label_start = pos;
        while (pos < literal.size()) {
            auto u = static_cast<unsigned char>(literal[pos]);
            if (std::isalnum(u) || literal[pos] == '-' || literal[pos] == '_' || u >= 0x80) ++pos;
            else break;
        }
        if (pos == label_start) return std::nullopt;
        ++labels;
        last_label_start = label_start;
        if (pos < literal.size() && literal[pos] == '.' && pos + 1 < literal.size() && literal[pos + 1] != '.' &&
            literal[pos + 1] != '/') {
            ++pos;
            continue;
        }
        break;
    }
    const auto host_end = pos;
    if (labels < 2) return std::nullopt;
    auto final_label = literal.substr(last_label_start, host_end - last_label_start);
    if (final_label.size() < pattern.min_final_label || final_label.size() > pattern.max_final_label) return std::nullopt;
    if (!std::all_of(final_label.begin(), final_label.end(),
                     [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); })) {
        return std::nullopt;
    }
    // Optional trailing dot and port.
    if (pos < literal.size() && literal[pos] == '.') ++pos;
    if (pos < literal.size() && literal[pos] == ':') {
        auto port_start = ++pos;
        while (pos < literal.size() && literal[pos] >= '0' && literal[pos] <= '9') ++pos;
        if (pos == port_start) return std::nullopt;
    }
    if (pos < literal.size() && literal[pos] != '/' && literal[pos] != '?' && literal[pos] != '#') return std::nullopt;

    std::string uri(prefix.empty() ? std::string_view("//") : prefix);
    uri += literal.substr(host_start, host_end - host_start);
    uri += literal.substr(pos);
    return uri;
}

}  // namespace tracknet
