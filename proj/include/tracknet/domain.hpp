#pragma once

#include <compare>
#include <functional>
#include <string>
#include <string_view>

namespace tracknet {

// Registrable domain directly under a public suffix, e.g. "example.co.uk".
// Instances are only produced by resolve_pld() or by trusted readers of
// files that were written from resolved values.
class PayLevelDomain {
public:
    PayLevelDomain() = default;
    explicit PayLevelDomain(std::string name) : name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }
    bool empty() const noexcept { return name_.empty(); }

    // Last label, e.g. "uk" for "example.co.uk".
    std::string_view tld() const noexcept {
        auto dot = name_.rfind('.');
        return dot == std::string::npos ? std::string_view(name_) : std::string_view(name_).substr(dot + 1);
    }

    friend auto operator<=>(const PayLevelDomain&, const PayLevelDomain&) = default;

private:
    std::string name_;
};

// Where a host reference was found.
enum class HostSource { script_src, iframe_src, link_ref, image_src, js_literal };

std::string_view to_string(HostSource source) noexcept;

struct HostCandidate {
    std::string raw;
    HostSource source = HostSource::script_src;

    friend auto operator<=>(const HostCandidate&, const HostCandidate&) = default;
};

}  // namespace tracknet

template <>
struct std::hash<tracknet::PayLevelDomain> {
    std::size_t operator()(const tracknet::PayLevelDomain& d) const noexcept {
        return std::hash<std::string>{}(d.name());
    }
};
