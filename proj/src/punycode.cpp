#include "tracknet/punycode.hpp"

#include <cstdint>
#include <vector>

namespace tracknet {
namespace {

constexpr std::uint32_t kBase = 36;
constexpr std::uint32_t kTMin = 1;
constexpr std::uint32_t kTMax = 26;
constexpr std::uint32_t kSkew = 38;
constexpr std::uint32_t kDamp = 700;
constexpr std::uint32_t kInitialBias = 72;
constexpr std::uint32_t kInitialN = 128;

std::optional<std::vector<std::uint32_t>> decode_utf8(std::string_view s) {
    std::vector<std::uint32_t> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        auto c = static_cast<unsigned char>(s[i]);
        std::uint32_t cp = 0;
        int extra = 0;
        if (c < 0x80) {
            cp = c;
        } else if ((c & 0xE0) == 0xC0) {
            cp = c & 0x1F;
            extra = 1;
        } else if ((c & 0xF0) == 0xE0) {
            cp = c & 0x0F;
            extra = 2;
        } else if ((c & 0xF8) == 0xF0) {
            cp = c & 0x07;
            extra = 3;
        } else {
            return std::nullopt;
        }
        if (i + extra >= s.size() && extra > 0) return std::nullopt;
        for (int k = 1; k <= extra; ++k) {
            auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return std::nullopt;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // Overlong forms and surrogates are rejected.
        if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
            cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            return std::nullopt;
        }
        out.push_back(cp);
        i += extra + 1;
    }
    return out;
}

char encode_digit(std::uint32_t d) {
    return static_cast<char>(d < 26 ? 'a' + d : '0' + (d - 26));
}

std::uint32_t adapt(std::uint32_t delta, std::uint32_t num_points, bool first_time) {
    delta = first_time ? delta / kDamp : delta / 2;
    delta += delta / num_points;
    std::uint32_t k = 0;
    while (delta > ((kBase - kTMin) * kTMax) / 2) {
        delta /= kBase - kTMin;
        k += kBase;
    }
    return k + (kBase - kTMin + 1) * delta / (delta + kSkew);
}

}  // namespace

std::optional<std::string> punycode_encode_label(std::string_view utf8_label) {
    auto decoded = decode_utf8(utf8_label);
    if (!decoded) return std::nullopt;
    const auto& input = *decoded;

    std::string output;
    for (auto cp : input) {
        if (cp < 0x80) output.push_back(static_cast<char>(cp));
    }
    const auto basic = static_cast<std::uint32_t>(output.size());
    if (basic == input.size()) return output;
    if (basic > 0) output.push_back('-');

    std::uint32_t n = kInitialN;
    std::uint32_t delta = 0;
    std::uint32_t bias = kInitialBias;
    std::uint32_t handled = basic;
    const auto total = static_cast<std::uint32_t>(input.size());

    while (handled < total) {
        std::uint32_t m = UINT32_MAX;
        for (auto cp : input) {
            if (cp >= n && cp < m) m = cp;
        }
        if (static_cast<std::uint64_t>(m - n) * (handled + 1) + delta > UINT32_MAX) return std::nullopt;
        delta += (m - n) * (handled + 1);
        n = m;
        for (auto cp : input) {
            if (cp < n) {
                if (++delta == 0) return std::nullopt;
            }
            if (cp == n) {
                std::uint32_t q = delta;
                for (std::uint32_t k = kBase;; k += kBase) {
                    std::uint32_t t = k <= bias ? kTMin : (k >= bias + kTMax ? kTMax : k - bias);
                    if (q < t) break;
                    output.push_back(encode_digit(t + (q - t) % (kBase - t)));
                    q = (q - t) / (kBase - t);
                }
                output.push_back(encode_digit(q));
                bias = adapt(delta, handled + 1, handled == basic);
                delta = 0;
                ++handled;
            }
        }
        ++delta;
        ++n;
    }
    return output;
}

std::optional<std::string> host_to_ascii(std::string_view utf8_host) {
    std::string out;
    out.reserve(utf8_host.size());
    std::size_t start = 0;
    while (start <= utf8_host.size()) {
        auto dot = utf8_host.find('.', start);
        auto label = utf8_host.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        bool ascii = true;
        for (char c : label) {
            if (static_cast<unsigned char>(c) >= 0x80) ascii = false;
        }
        if (ascii) {
            for (char c : label) out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
        } else {
            std::string lowered(label);
            for (auto& c : lowered) {
                if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            }
            auto encoded = punycode_encode_label(lowered);
            if (!encoded) return std::nullopt;
            out += "xn--";
            out += *encoded;
        }
        if (dot == std::string_view::npos) break;
        out.push_back('.');
        start = dot + 1;
    }
    return out;
}

}  // namespace tracknet
