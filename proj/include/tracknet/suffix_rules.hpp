#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

#include "tracknet/domain.hpp"

namespace tracknet {

enum class RuleKind { normal, wildcard, exception };

// Result of matching a host against the rule set.
struct SuffixMatch {
    std::size_t suffix_labels = 0;  // labels belonging to the public suffix
    bool listed = false;            // false when only the implicit "*" rule applied
};

// Public suffix rules in Mozilla Public Suffix List text format. Immutable
// after construction; safe to share across threads.
class SuffixRuleSet {
public:
    SuffixRuleSet() = default;

    static SuffixRuleSet parse(std::istream& in);
    static SuffixRuleSet parse(std::string_view text);
    static SuffixRuleSet load(const std::filesystem::path& path);

    // Longest matching rule wins, exception rules beat wildcards. Hosts that
    // match nothing fall back to the implicit "*" rule (one-label suffix).
    SuffixMatch match(std::string_view host) const;

    bool contains(std::string_view rule, RuleKind kind) const;
    std::size_t size() const noexcept { return normal_.size() + wildcard_.size() + exception_.size(); }

private:
    void add_rule(std::string_view rule);
    void validate() const;

    // Keys are the rule text without the "*." or "!" marker.
    std::unordered_set<std::string> normal_;
    std::unordered_set<std::string> wildcard_;
    std::unordered_set<std::string> exception_;
};

// Lowercase ASCII labels of [a-z0-9_-], none empty, at most 63 bytes each
// and 253 in total.
bool is_canonical_host(std::string_view host);

// Returns the public suffix plus one label. Throws Error when `host` is not
// canonical, is itself a public suffix, or has no registrable part.
PayLevelDomain resolve_pld(std::string_view host, const SuffixRuleSet& rules);

// Non-throwing variant. With `require_listed`, hosts whose suffix only
// matched the implicit "*" rule are rejected too.
std::optional<PayLevelDomain> try_resolve_pld(std::string_view host, const SuffixRuleSet& rules,
                                              bool require_listed = false);

}  // namespace tracknet
