#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tracknet/domain.hpp"
#include "tracknet/suffix_rules.hpp"

namespace tracknet {

// Shape of a string literal that counts as a URI reference: optional
// "scheme://", "//" or leading dots, then at least two dot-separated labels
// whose last label is alphabetic, then optionally a port and "/...".
// The final-label bounds keep version strings and file extensions of odd
// length out; they are the main recall/precision knob of literal scanning.
struct UriLiteralPattern {
    std::size_t min_final_label = 2;
    std::size_t max_final_label = 24;
};

inline constexpr UriLiteralPattern kDefaultUriLiteralPattern{};

// If `literal` matches the pattern, returns it rewritten as a
// protocol-relative or absolute URI that canonicalize_uri() accepts.
std::optional<std::string> match_uri_literal(std::string_view literal,
                                             const UriLiteralPattern& pattern = kDefaultUriLiteralPattern);

// String literal contents of a script, escape sequences decoded. Template
// literal chunks are returned individually. Returns nullopt when the source
// does not tokenize (unterminated string, comment or regex, unbalanced
// template).
std::optional<std::vector<std::string>> lex_js_string_literals(std::string_view js_source);

// Error-tolerant fallback: quote-delimited spans, bounded by line ends.
std::vector<std::string> scan_quoted_spans(std::string_view js_source);

// Hosts referenced by string literals of a script. Literals that contain
// markup are scanned as HTML fragments as well (document.write payloads),
// and their quoted src= values are matched on their own so that tags split
// across concatenated literals still count.
std::set<HostCandidate> extract_js_uri_literals(std::string_view js_source,
                                                const UriLiteralPattern& pattern = kDefaultUriLiteralPattern);

// src of script/iframe/img/image, href and src of link, plus the literals of
// inline scripts. Malformed markup is scanned on a best-effort basis.
std::set<HostCandidate> extract_embedded_hosts(std::string_view html,
                                               const UriLiteralPattern& pattern = kDefaultUriLiteralPattern);

// Canonical host for a candidate, or nullopt when it does not name one.
std::optional<std::string> candidate_host(const HostCandidate& candidate,
                                          const UriLiteralPattern& pattern = kDefaultUriLiteralPattern);

struct PageRecord {
    std::string url;
    std::string body;
    PayLevelDomain site_pld;
};

// Builds a record when the URL has a resolvable pay-level domain.
std::optional<PageRecord> make_page_record(std::string url, std::string body, const SuffixRuleSet& rules);

// Third-party pay-level domains embedded in a page. Candidates that resolve
// to the page's own PLD are first-party and dropped; so are hosts whose
// suffix is not in the rule set ("jquery.min.js" style false positives).
std::set<PayLevelDomain> extract_page(const PageRecord& page, const SuffixRuleSet& rules,
                                      const UriLiteralPattern& pattern = kDefaultUriLiteralPattern);

}  // namespace tracknet
