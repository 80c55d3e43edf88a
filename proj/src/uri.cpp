#include "tracknet/uri.hpp"

#include <algorithm>
#include <array>

#include "tracknet/punycode.hpp"

namespace tracknet {
namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Length of a leading "scheme:" prefix, or 0.
std::size_t scheme_length(std::string_view s) {
    if (s.empty() || !is_alpha(s.front())) return 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        char c = s[i];
        if (c == ':') return i;
        if (!(is_alpha(c) || is_digit(c) || c == '+' || c == '-' || c == '.')) return 0;
    }
    return 0;
}

bool is_hierarchical_scheme(std::string_view scheme) {
    static constexpr std::array<std::string_view, 6> kSchemes = {"http", "https", "ftp", "ws", "wss", "ftps"};
    std::string lower(scheme);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](char c) {
        return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c;
    });
    return std::find(kSchemes.begin(), kSchemes.end(), lower) != kSchemes.end();
}

// Host part of an authority "[user[:pass]@]host[:port]".
std::string_view host_of_authority(std::string_view authority) {
    auto at = authority.rfind('@');
    if (at != std::string_view::npos) authority.remove_prefix(at + 1);
    if (!authority.empty() && authority.front() == '[') {
        auto close = authority.find(']');
        return close == std::string_view::npos ? authority : authority.substr(0, close + 1);
    }
    auto colon = authority.find(':');
    return authority.substr(0, colon);
}

std::optional<std::string> finish_host(std::string_view host) {
    while (!host.empty() && host.back() == '.') host.remove_suffix(1);
    if (host.empty() || is_ip_literal(host)) return std::nullopt;
    for (char c : host) {
        auto u = static_cast<unsigned char>(c);
        bool ok = u >= 0x80 || is_alpha(c) || is_digit(c) || c == '-' || c == '_' || c == '.';
        if (!ok) return std::nullopt;
    }
    auto ascii = host_to_ascii(host);
    if (!ascii || ascii->find('.') == std::string::npos) return std::nullopt;
    // Reject empty labels and over-long labels.
    std::size_t label = 0;
    for (char c : *ascii) {
        if (c == '.') {
            if (label == 0) return std::nullopt;
            label = 0;
        } else if (++label > 63) {
            return std::nullopt;
        }
    }
    if (is_ip_literal(*ascii)) return std::nullopt;
    return ascii;
}

std::string_view authority_at(std::string_view rest) {
    auto end = rest.find_first_of("/?#\\");
    return rest.substr(0, end);
}

}  // namespace

bool is_ip_literal(std::string_view host) {
    if (host.empty()) return false;
    if (host.front() == '[') return true;
    // All-numeric dotted labels ("10.0.0.1", "127.1") are IPv4 per WHATWG host parsing.
    std::size_t labels = 0;
    std::size_t start = 0;
    while (start <= host.size()) {
        auto dot = host.find('.', start);
        auto label = host.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        if (label.empty()) {
            if (dot == std::string_view::npos) break;
            return false;
        }
        bool numeric = std::all_of(label.begin(), label.end(), is_digit);
        bool hex = label.size() > 2 && label[0] == '0' && (label[1] == 'x' || label[1] == 'X') &&
                   std::all_of(label.begin() + 2, label.end(), [](char c) {
                       return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
                   });
        if (!numeric && !hex) return false;
        ++labels;
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return labels > 0 && labels <= 4;
}

std::optional<std::string> canonicalize_uri(std::string_view raw) {
    auto s = trim(raw);
    if (s.empty()) return std::nullopt;

    if (s.starts_with("//")) return finish_host(host_of_authority(authority_at(s.substr(2))));

    if (auto len = scheme_length(s); len > 0) {
        auto scheme = s.substr(0, len);
        auto rest = s.substr(len + 1);
        if (rest.starts_with("//")) {
            if (!is_hierarchical_scheme(scheme)) return std::nullopt;
            return finish_host(host_of_authority(authority_at(rest.substr(2))));
        }
        // "host.tld:8080/path" parses like a scheme; only accept it when a
        // numeric port follows.
        auto port_end = rest.find_first_of("/?#");
        auto port = rest.substr(0, port_end);
        if (port.empty() || !std::all_of(port.begin(), port.end(), is_digit) || port_end == std::string_view::npos) {
            return std::nullopt;
        }
        return finish_host(scheme);
    }

    // Bare host followed by a path: the first segment must look like a domain
    // and a '/' must follow it.
    auto slash = s.find('/');
    if (slash == std::string_view::npos || slash == 0) return std::nullopt;
    auto segment = s.substr(0, slash);
    if (segment.find_first_of("?#") != std::string_view::npos) return std::nullopt;
    auto host = host_of_authority(segment);
    while (!host.empty() && host.back() == '.') host.remove_suffix(1);
    auto last_dot = host.rfind('.');
    if (last_dot == std::string_view::npos) return std::nullopt;
    auto tld = host.substr(last_dot + 1);
    if (tld.size() < 2 || !std::all_of(tld.begin(), tld.end(), is_alpha)) return std::nullopt;
    return finish_host(host);
}

}  // namespace tracknet
