#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tracknet {

// Extracts the lowercased host from an absolute URI ("scheme://..."), a
// protocol-relative reference ("//host/...") or a bare host followed by a
// path ("host.tld/..."). Scheme, credentials, port, path, query, fragment
// and trailing dots are removed. Non-ASCII hosts come back punycoded.
//
// Relative paths, non-hierarchical schemes (data:, javascript:, mailto:...),
// IP literals and dotless hosts yield nullopt.
std::optional<std::string> canonicalize_uri(std::string_view raw);

// True for dotted-quad IPv4 (including shorthand numeric forms) and
// bracketed IPv6 literals.
bool is_ip_literal(std::string_view host);

}  // namespace tracknet
