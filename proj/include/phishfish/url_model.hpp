#pragma once

// Lexical URL decomposition for the phishing rules. Nothing here touches the
// network; a URL is only ever a string.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "phishfish/error.hpp"

namespace phishfish {

namespace detail {

inline bool is_ascii_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
inline bool is_lower_alpha(char c) noexcept { return c >= 'a' && c <= 'z'; }

inline char to_lower(char c) noexcept
{
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string lowercase(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), to_lower);
    return out;
}

inline std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && is_ascii_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_ascii_space(s.back()))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string join(const std::vector<std::string>& parts, std::size_t first, char sep)
{
    std::string out;
    for (std::size_t i = first; i < parts.size(); ++i) {
        if (i != first)
            out += sep;
        out += parts[i];
    }
    return out;
}

inline bool is_scheme(std::string_view s) noexcept
{
    if (s.empty() || !is_lower_alpha(to_lower(s.front())))
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        char l = to_lower(c);
        return is_lower_alpha(l) || is_digit(l) || l == '+' || l == '-' || l == '.';
    });
}

// 0-255, digits only. Leading zeros are accepted.
inline bool is_octet(std::string_view label) noexcept
{
    if (label.empty())
        return false;
    std::size_t value = 0;
    for (char c : label) {
        if (!is_digit(c))
            return false;
        value = value * 10 + static_cast<std::size_t>(c - '0');
        if (value > 255)
            return false;
    }
    return true;
}

} // namespace detail

struct parsed_url {
    std::string raw;
    std::optional<std::string> scheme;
    std::string host;
    std::vector<std::string> host_labels;
    std::string path;
    bool is_ip_host = false;
    bool uses_https = false;

    bool operator==(const parsed_url&) const = default;
};

// True when the host is an IPv4 dotted quad. IPv6 literals are not recognized.
inline bool is_dotted_quad(const std::vector<std::string>& labels) noexcept
{
    return labels.size() == 4 && std::all_of(labels.begin(), labels.end(), [](const std::string& l) {
               return detail::is_octet(l);
           });
}

inline parsed_url parse_url(std::string_view raw)
{
    std::string_view rest = detail::trim(raw);
    if (rest.empty())
        throw error(errc::empty_input, "empty URL");

    parsed_url out;
    out.raw = std::string(raw);

    if (auto sep = rest.find("://"); sep != std::string_view::npos) {
        auto scheme = rest.substr(0, sep);
        if (!detail::is_scheme(scheme))
            throw error(errc::malformed_host, "invalid scheme '" + std::string(scheme) + "'");
        out.scheme = detail::lowercase(scheme);
        rest.remove_prefix(sep + 3);
    }

    auto authority_end = rest.find_first_of("/?#");
    auto authority = rest.substr(0, authority_end);
    if (authority_end != std::string_view::npos)
        out.path = std::string(rest.substr(authority_end));

    if (auto at = authority.rfind('@'); at != std::string_view::npos)
        authority.remove_prefix(at + 1);
    if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
        auto port = authority.substr(colon + 1);
        if (std::all_of(port.begin(), port.end(), detail::is_digit))
            authority = authority.substr(0, colon);
    }

    std::string host = detail::lowercase(authority);
    if (!host.empty() && host.back() == '.')
        host.pop_back();
    if (host.empty())
        throw error(errc::malformed_host, "URL has no host: '" + std::string(raw) + "'");
    for (char c : host) {
        if (!(detail::is_lower_alpha(c) || detail::is_digit(c) || c == '.' || c == '-'))
            throw error(errc::malformed_host, "invalid character in host '" + host + "'");
    }

    out.host_labels = detail::split(host, '.');
    if (std::any_of(out.host_labels.begin(), out.host_labels.end(), [](const std::string& l) { return l.empty(); }))
        throw error(errc::malformed_host, "empty label in host '" + host + "'");

    out.host = std::move(host);
    out.is_ip_host = is_dotted_quad(out.host_labels);
    out.uses_https = out.scheme == "https";
    return out;
}

// "scheme://host+path", or "host+path" without a scheme. Userinfo and port
// are not retained by parse_url and so are not reproduced.
inline std::string format_url(const parsed_url& p)
{
    std::string out;
    if (p.scheme)
        out = *p.scheme + "://";
    return out + p.host + p.path;
}

// Equality ignoring `raw`.
inline bool same_structure(const parsed_url& a, const parsed_url& b)
{
    return a.scheme == b.scheme && a.host == b.host && a.host_labels == b.host_labels && a.path == b.path &&
           a.is_ip_host == b.is_ip_host && a.uses_https == b.uses_https;
}

class suffix_table {
public:
    suffix_table() : suffix_table(builtin_entries()) {}

    explicit suffix_table(const std::vector<std::string>& entries)
    {
        if (entries.empty())
            throw error(errc::validation_error, "suffix table is empty");
        for (const auto& e : entries)
            add(e);
    }

    static const std::vector<std::string>& builtin_entries()
    {
        static const std::vector<std::string> entries{"com", "co.uk", "uk", "org", "net", "edu"};
        return entries;
    }

    void add(const std::string& suffix)
    {
        if (suffix.empty() || suffix.front() == '.' || suffix.back() == '.')
            throw error(errc::validation_error, "invalid public suffix '" + suffix + "'");
        if (detail::lowercase(suffix) != suffix)
            throw error(errc::validation_error, "public suffix must be lowercase: '" + suffix + "'");
        suffixes_.insert(suffix);
    }

    bool contains(std::string_view s) const { return suffixes_.find(std::string(s)) != suffixes_.end(); }
    const std::set<std::string>& entries() const noexcept { return suffixes_; }

private:
    std::set<std::string> suffixes_;
};

// One label above the longest public suffix matching the end of the host.
inline std::optional<std::string> registrable_domain(const parsed_url& p, const suffix_table& t)
{
    if (p.is_ip_host)
        throw error(errc::ip_host_has_no_domain, "IP host '" + p.host + "' has no registrable domain");

    const auto& labels = p.host_labels;
    const std::size_t n = labels.size();
    std::size_t matched = 0;
    for (std::size_t len = n; len >= 1; --len) {
        if (t.contains(detail::join(labels, n - len, '.'))) {
            matched = len;
            break;
        }
    }
    if (matched == 0 || matched == n)
        return std::nullopt;
    return detail::join(labels, n - matched - 1, '.');
}

} // namespace phishfish
