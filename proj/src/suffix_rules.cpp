#include "tracknet/suffix_rules.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "tracknet/error.hpp"
#include "tracknet/punycode.hpp"

namespace tracknet {
namespace {

std::vector<std::string_view> split_labels(std::string_view host) {
    std::vector<std::string_view> labels;
    std::size_t start = 0;
    while (true) {
        auto dot = host.find('.', start);
        labels.push_back(host.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return labels;
}

}  // namespace

bool is_canonical_host(std::string_view host) {
    if (host.empty() || host.size() > 253) return false;
    std::size_t label_len = 0;
    for (char c : host) {
        if (c == '.') {
            if (label_len == 0) return false;
            label_len = 0;
            continue;
        }
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
        if (!ok) return false;
        if (++label_len > 63) return false;
    }
    return label_len > 0;
}

SuffixRuleSet SuffixRuleSet::parse(std::istream& in) {
    SuffixRuleSet rules;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view view(line);
        while (!view.empty() && (view.front() == ' ' || view.front() == '\t')) view.remove_prefix(1);
        if (view.empty() || view.starts_with("//")) continue;
        auto end = view.find_first_of(" \t\r");
        rules.add_rule(view.substr(0, end));
    }
    rules.validate();
    return rules;
}

SuffixRuleSet SuffixRuleSet::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse(in);
}

SuffixRuleSet SuffixRuleSet::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open suffix list: " + path.string());
    return parse(in);
}

void SuffixRuleSet::add_rule(std::string_view rule) {
    if (rule.empty()) return;
    RuleKind kind = RuleKind::normal;
    if (rule.front() == '!') {
        kind = RuleKind::exception;
        rule.remove_prefix(1);
    } else if (rule.starts_with("*.")) {
        kind = RuleKind::wildcard;
        rule.remove_prefix(2);
    } else if (rule == "*") {
        return;  // the implicit default rule
    }
    auto ascii = host_to_ascii(rule);
    if (!ascii || !is_canonical_host(*ascii)) throw Error("malformed suffix rule: " + std::string(rule));
    switch (kind) {
        case RuleKind::normal: normal_.insert(std::move(*ascii)); break;
        case RuleKind::wildcard: wildcard_.insert(std::move(*ascii)); break;
        case RuleKind::exception: exception_.insert(std::move(*ascii)); break;
    }
}

void SuffixRuleSet::validate() const {
    for (const auto& ex : exception_) {
        auto dot = ex.find('.');
        if (dot == std::string::npos || !wildcard_.contains(ex.substr(dot + 1))) {
            throw Error("exception rule !" + ex + " has no covering wildcard rule");
        }
    }
}

bool SuffixRuleSet::contains(std::string_view rule, RuleKind kind) const {
    std::string key(rule);
    switch (kind) {
        case RuleKind::normal: return normal_.contains(key);
        case RuleKind::wildcard: return wildcard_.contains(key);
        case RuleKind::exception: return exception_.contains(key);
    }
    return false;
}

SuffixMatch SuffixRuleSet::match(std::string_view host) const {
    auto labels = split_labels(host);
    const auto n = labels.size();
    SuffixMatch best{1, false};
    std::string candidate;
    for (std::size_t i = 0; i < n; ++i) {
        // candidate = labels[i..n)
        std::string_view tail = host.substr(static_cast<std::size_t>(labels[i].data() - host.data()));
        candidate.assign(tail);
        if (exception_.contains(candidate)) return SuffixMatch{n - i - 1, true};
        if (!best.listed || n - i > best.suffix_labels) {
            if (normal_.contains(candidate)) {
                best = SuffixMatch{n - i, true};
            } else if (i + 1 < n) {
                std::string_view rest = host.substr(static_cast<std::size_t>(labels[i + 1].data() - host.data()));
                if (wildcard_.contains(std::string(rest))) best = SuffixMatch{n - i, true};
            }
        }
    }
    return best;
}

std::optional<PayLevelDomain> try_resolve_pld(std::string_view host, const SuffixRuleSet& rules, bool require_listed) {
    if (!is_canonical_host(host)) return std::nullopt;
    auto m = rules.match(host);
    if (require_listed && !m.listed) return std::nullopt;
    auto labels = split_labels(host);
    if (labels.size() <= m.suffix_labels) return std::nullopt;
    auto first = labels[labels.size() - m.suffix_labels - 1];
    return PayLevelDomain(std::string(host.substr(static_cast<std::size_t>(first.data() - host.data()))));
}

PayLevelDomain resolve_pld(std::string_view host, const SuffixRuleSet& rules) {
    if (!is_canonical_host(host)) throw Error("not a canonical host: '" + std::string(host) + "'");
    auto pld = try_resolve_pld(host, rules);
    if (!pld) throw Error("host has no registrable part: " + std::string(host));
    return *pld;
}

std::string_view to_string(HostSource source) noexcept {
    switch (source) {
        case HostSource::script_src: return "script_src";
        case HostSource::iframe_src: return "iframe_src";
        case HostSource::link_ref: return "link_ref";
        case HostSource::image_src: return "image_src";
        case HostSource::js_literal: return "js_literal";
    }
    return "unknown";
}

}  // namespace tracknet
