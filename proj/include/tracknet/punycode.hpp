#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tracknet {

// RFC 3492 encoding of a single label given as UTF-8. Returns nullopt for
// malformed UTF-8. ASCII-only input is returned unchanged.
std::optional<std::string> punycode_encode_label(std::string_view utf8_label);

// Lowercases ASCII letters and rewrites every non-ASCII label as "xn--...".
// No Unicode case folding or nameprep mapping is applied.
std::optional<std::string> host_to_ascii(std::string_view utf8_host);

}  // namespace tracknet
