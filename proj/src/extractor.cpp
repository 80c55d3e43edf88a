#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <utility>

#include "tracknet/extractor.hpp"
#include "tracknet/uri.hpp"

namespace tracknet {
namespace {

char lower(char c) { return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
        return lower(x) == lower(y);
    });
}

// Case-insensitive search for `needle` (lowercase) in `hay` from `from`.
std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from) {
    if (needle.empty() || hay.size() < needle.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
        if (lower(hay[i]) == needle[0] && iequals(hay.substr(i, needle.size()), needle)) return i;
    }
    return std::string_view::npos;
}

void append_code_point(std::string& out, std::uint32_t cp) {
    if (cp == 0 || cp > 0x10FFFF) return;
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

// Decodes the character references that matter inside URL attributes.
std::string decode_entities(std::string_view s) {
    static constexpr std::array<std::pair<std::string_view, char>, 6> kNamed = {{
        {"amp", '&'}, {"lt", '<'}, {"gt", '>'}, {"quot", '"'}, {"apos", '\''}, {"sol", '/'},
    }};
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        auto semi = s.find(';', i);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back(s[i++]);
            continue;
        }
        auto name = s.substr(i + 1, semi - i - 1);
        if (!name.empty() && name[0] == '#') {
            std::uint32_t cp = 0;
            bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
            auto digits = name.substr(hex ? 2 : 1);
            bool ok = !digits.empty();
            for (char c : digits) {
                int v = -1;
                if (c >= '0' && c <= '9') v = c - '0';
                else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
                if (v < 0 || cp > 0x10FFFF) {
                    ok = false;
                    break;
                }
                cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
            }
            if (ok) {
                append_code_point(out, cp);
                i = semi + 1;
                continue;
            }
        } else {
            auto it = std::find_if(kNamed.begin(), kNamed.end(), [&](const auto& e) { return iequals(e.first, name); });
            if (it != kNamed.end()) {
                out.push_back(it->second);
                i = semi + 1;
                continue;
            }
        }
        out.push_back(s[i++]);
    }
    return out;
}

struct Tag {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;

    const std::string* attribute(std::string_view key) const {
        for (const auto& [k, v] : attributes) {
            if (k == key) return &v;
        }
        return nullptr;
    }
};

// Parses a start tag whose '<' is at html[i]; on return i is past the '>'
// (or at end of input for an unterminated tag).
Tag parse_start_tag(std::string_view html, std::size_t& i) {
    Tag tag;
    const auto n = html.size();
    ++i;
    while (i < n && !is_space(html[i]) && html[i] != '>' && html[i] != '/') tag.name.push_back(lower(html[i++]));
    while (i < n) {
        while (i < n && (is_space(html[i]) || html[i] == '/')) ++i;
        if (i >= n) break;
        if (html[i] == '>') {
            ++i;
            break;
        }
        std::string key;
        while (i < n && !is_space(html[i]) && html[i] != '>' && html[i] != '=' && html[i] != '/') key.push_back(lower(html[i++]));
        while (i < n && is_space(html[i])) ++i;
        std::string value;
        if (i < n && html[i] == '=') {
            ++i;
            while (i < n && is_space(html[i])) ++i;
            if (i < n && (html[i] == '"' || html[i] == '\'')) {
                char quote = html[i++];
                auto close = html.find(quote, i);
                if (close == std::string_view::npos) close = n;
                value = decode_entities(html.substr(i, close - i));
                i = std::min(close + 1, n);
            } else {
                auto start = i;
                while (i < n && !is_space(html[i]) && html[i] != '>') ++i;
                value = decode_entities(html.substr(start, i - start));
            }
        }
        if (key.empty()) {
            ++i;  // stray character such as '"' or '='
            continue;
        }
        // The first occurrence of an attribute wins, as in browsers.
        if (!tag.attribute(key)) tag.attributes.emplace_back(std::move(key), std::move(value));
    }
    return tag;
}

bool is_javascript_type(const std::string* type) {
    if (!type) return true;
    std::string t;
    for (char c : *type) {
        if (!is_space(c)) t.push_back(lower(c));
    }
    if (auto semi = t.find(';'); semi != std::string::npos) t.resize(semi);
    static constexpr std::array<std::string_view, 9> kTypes = {
        "", "text/javascript", "application/javascript", "module", "text/ecmascript",
        "application/ecmascript", "application/x-javascript", "text/x-javascript", "text/jscript"};
    return std::find(kTypes.begin(), kTypes.end(), t) != kTypes.end();
}

void add_candidate(std::set<HostCandidate>& out, const std::string* value, HostSource source) {
    if (!value) return;
    std::string_view v(*value);
    while (!v.empty() && is_space(v.front())) v.remove_prefix(1);
    while (!v.empty() && is_space(v.back())) v.remove_suffix(1);
    if (!v.empty()) out.insert(HostCandidate{std::string(v), source});
}

void scan_html(std::string_view html, const UriLiteralPattern& pattern, bool from_script, std::set<HostCandidate>& out);

// Quoted values of src= attributes anywhere in a text fragment.
std::vector<std::string> quoted_src_values(std::string_view text) {
    std::vector<std::string> values;
    for (auto at = ifind(text, "src", 0); at != std::string_view::npos; at = ifind(text, "src", at + 3)) {
        auto i = at + 3;
        while (i < text.size() && is_space(text[i])) ++i;
        if (i >= text.size() || text[i] != '=') continue;
        ++i;
        while (i < text.size() && is_space(text[i])) ++i;
        if (i >= text.size() || (text[i] != '"' && text[i] != '\'')) continue;
        auto close = text.find(text[i], i + 1);
        if (close == std::string_view::npos) continue;
        values.push_back(decode_entities(text.substr(i + 1, close - i - 1)));
    }
    return values;
}

void scan_js(std::string_view js, const UriLiteralPattern& pattern, bool nested, std::set<HostCandidate>& out) {
    auto literals = lex_js_string_literals(js);
    if (!literals) literals = scan_quoted_spans(js);
    for (const auto& literal : *literals) {
        if (match_uri_literal(literal, pattern)) {
            std::string_view trimmed(literal);
            while (!trimmed.empty() && is_space(trimmed.front())) trimmed.remove_prefix(1);
            while (!trimmed.empty() && is_space(trimmed.back())) trimmed.remove_suffix(1);
            out.insert(HostCandidate{std::string(trimmed), HostSource::js_literal});
        }
        if (nested) continue;
        if (literal.find('<') != std::string::npos) scan_html(literal, pattern, true, out);
        // src values of tags split across literals ('<scr' + 'ipt src="...">').
        for (const auto& value : quoted_src_values(literal)) {
            if (match_uri_literal(value, pattern)) out.insert(HostCandidate{value, HostSource::js_literal});
        }
    }
}

void scan_html(std::string_view html, const UriLiteralPattern& pattern, bool from_script, std::set<HostCandidate>& out) {
    const auto n = html.size();
    std::size_t i = 0;
    auto source_for = [&](HostSource s) { return from_script ? HostSource::js_literal : s; };
    while (i < n) {
        auto lt = html.find('<', i);
        if (lt == std::string_view::npos) break;
        i = lt;
        if (html.substr(i, 4) == "<!--") {
            auto close = html.find("-->", i + 4);
            i = close == std::string_view::npos ? n : close + 3;
            continue;
        }
        if (i + 1 >= n) break;
        char next = html[i + 1];
        if (next == '!' || next == '?' || next == '/') {
            auto close = html.find('>', i + 1);
            i = close == std::string_view::npos ? n : close + 1;
            continue;
        }
        if (!std::isalpha(static_cast<unsigned char>(next))) {
            ++i;
            continue;
        }
        Tag tag = parse_start_tag(html, i);
        if (tag.name == "script") {
            add_candidate(out, tag.attribute("src"), source_for(HostSource::script_src));
            auto close = ifind(html, "</script", i);
            auto body = html.substr(i, (close == std::string_view::npos ? n : close) - i);
            if (!from_script && is_javascript_type(tag.attribute("type"))) scan_js(body, pattern, false, out);
            i = close == std::string_view::npos ? n : close;
        } else if (tag.name == "iframe") {
            add_candidate(out, tag.attribute("src"), source_for(HostSource::iframe_src));
        } else if (tag.name == "img" || tag.name == "image") {
            add_candidate(out, tag.attribute("src"), source_for(HostSource::image_src));
        } else if (tag.name == "link") {
            add_candidate(out, tag.attribute("href"), source_for(HostSource::link_ref));
            add_candidate(out, tag.attribute("src"), source_for(HostSource::link_ref));
        } else if (tag.name == "style" || tag.name == "textarea" || tag.name == "title" || tag.name == "xmp") {
            auto close = ifind(html, "</" + tag.name, i);
            i = close == std::string_view::npos ? n : close;
        }
    }
}

}  // namespace

std::set<HostCandidate> extract_js_uri_literals(std::string_view js_source, const UriLiteralPattern& pattern) {
    std::set<HostCandidate> out;
    scan_js(js_source, pattern, false, out);
    return out;
}

std::set<HostCandidate> extract_embedded_hosts(std::string_view html, const UriLiteralPattern& pattern) {
    std::set<HostCandidate> out;
    scan_html(html, pattern, false, out);
    return out;
}

std::optional<std::string> candidate_host(const HostCandidate& candidate, const UriLiteralPattern& pattern) {
    if (candidate.source == HostSource::js_literal) {
        if (auto uri = match_uri_literal(candidate.raw, pattern)) return canonicalize_uri(*uri);
    }
    return canonicalize_uri(candidate.raw);
}

std::optional<PageRecord> make_page_record(std::string url, std::string body, const SuffixRuleSet& rules) {
    auto host = canonicalize_uri(url);
    if (!host) return std::nullopt;
    auto pld = try_resolve_pld(*host, rules);
    if (!pld) return std::nullopt;
    return PageRecord{std::move(url), std::move(body), std::move(*pld)};
}

std::set<PayLevelDomain> extract_page(const PageRecord& page, const SuffixRuleSet& rules,
                                      const UriLiteralPattern& pattern) {
    std::set<PayLevelDomain> out;
    for (const auto& candidate : extract_embedded_hosts(page.body, pattern)) {
        auto host = candidate_host(candidate, pattern);
        if (!host) continue;
        auto pld = try_resolve_pld(*host, rules, true);
        if (!pld || *pld == page.site_pld) continue;
        out.insert(std::move(*pld));
    }
    return out;
}

}  // namespace tracknet
