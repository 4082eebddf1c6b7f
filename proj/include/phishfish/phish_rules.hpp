#pragma once

// Rule-based URL classification. Each rule corresponds to one of the
// teacher's training messages, and rules are tried in a fixed order so that
// every URL gets exactly one verdict and one tip.

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "phishfish/error.hpp"
#include "phishfish/url_model.hpp"

namespace phishfish {

// Levenshtein distance with unit costs, two-row dynamic programme.
inline std::size_t edit_distance(std::string_view a, std::string_view b)
{
    if (a.size() < b.size())
        std::swap(a, b);
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

struct brand {
    std::string name;
    std::vector<std::string> domains;

    bool operator==(const brand&) const = default;
};

class brand_registry {
public:
    brand_registry() = default;

    explicit brand_registry(std::vector<brand> entries)
    {
        for (auto& b : entries)
            add(std::move(b));
    }

    static brand_registry builtin()
    {
        return brand_registry({
            {"nationwide", {"nationwide.co.uk"}},
            {"smile", {"smile.co.uk"}},
            {"halifax", {"halifax.co.uk"}},
            {"barclays", {"barclays.co.uk"}},
            {"lloydsbank", {"lloydsbank.co.uk"}},
            {"paypal", {"paypal.com"}},
            {"msn", {"msn.com"}},
            {"ebay", {"ebay.com"}},
            {"arguments", {"arguments.co.uk"}},
        });
    }

    void add(brand b)
    {
        if (b.name.empty() || !std::all_of(b.name.begin(), b.name.end(), [](char c) {
                return detail::is_lower_alpha(c) || detail::is_digit(c);
            }))
            throw error(errc::validation_error, "brand name must be lowercase alphanumeric: '" + b.name + "'");
        if (find(b.name))
            throw error(errc::validation_error, "duplicate brand '" + b.name + "'");
        for (const auto& d : b.domains) {
            auto p = parse_url(d);
            if (p.host != d || !p.path.empty() || p.scheme)
                throw error(errc::validation_error, "brand domain is not a bare host: '" + d + "'");
        }
        entries_.push_back(std::move(b));
    }

    const brand* find(std::string_view name) const
    {
        auto it = std::find_if(entries_.begin(), entries_.end(), [&](const brand& b) { return b.name == name; });
        return it == entries_.end() ? nullptr : &*it;
    }

    bool is_canonical_domain(std::string_view domain) const
    {
        return std::any_of(entries_.begin(), entries_.end(), [&](const brand& b) {
            return std::find(b.domains.begin(), b.domains.end(), domain) != b.domains.end();
        });
    }

    const std::vector<brand>& entries() const noexcept { return entries_; }

private:
    std::vector<brand> entries_;
};

inline const std::vector<std::string>& default_security_keywords()
{
    static const std::vector<std::string> words{"security", "secure", "verify", "verification",
                                                "login", "signin", "account"};
    return words;
}

enum class rule_id {
    ip_host,
    embedded_brand,
    misspelled_brand,
    hyphen_brand,
    security_keyword,
    https_well_formed,
    well_formed_known,
};

inline constexpr std::array all_rules{rule_id::ip_host,          rule_id::embedded_brand,
                                      rule_id::misspelled_brand, rule_id::hyphen_brand,
                                      rule_id::security_keyword, rule_id::https_well_formed,
                                      rule_id::well_formed_known};

constexpr std::string_view to_string(rule_id r) noexcept
{
    switch (r) {
    case rule_id::ip_host: return "IP_HOST";
    case rule_id::embedded_brand: return "EMBEDDED_BRAND";
    case rule_id::misspelled_brand: return "MISSPELLED_BRAND";
    case rule_id::hyphen_brand: return "HYPHEN_BRAND";
    case rule_id::security_keyword: return "SECURITY_KEYWORD";
    case rule_id::https_well_formed: return "HTTPS_WELL_FORMED";
    case rule_id::well_formed_known: return "WELL_FORMED_KNOWN";
    }
    return "";
}

// Teacher messages, verbatim from the game's corpus.
constexpr std::string_view tip_for(rule_id r) noexcept
{
    switch (r) {
    case rule_id::ip_host: return "Don't trust URLs with all numbers in the front";
    case rule_id::embedded_brand:
        return "Don't trust URLs with large host names that contained a part of a well-known web addresses";
    case rule_id::misspelled_brand: return "Don't trust URLs with misspelled known websites";
    case rule_id::hyphen_brand: return "Company name followed by a hyphen usually means, it's a scam website";
    case rule_id::security_keyword: return "Companies don't use security related keywords in their domains";
    case rule_id::https_well_formed: return "URL with 'https://?' usually a legitimate website";
    case rule_id::well_formed_known: return "URLs with well-known domain and correctly spelled are legitimate";
    }
    return "";
}

inline std::optional<rule_id> rule_for_tip(std::string_view tip) noexcept
{
    for (auto r : all_rules) {
        if (tip_for(r) == tip)
            return r;
    }
    return std::nullopt;
}

enum class verdict_label { legit, phishing };

constexpr std::string_view to_string(verdict_label l) noexcept { return l == verdict_label::legit ? "legit" : "phishing"; }

constexpr verdict_label label_of(rule_id r) noexcept
{
    return (r == rule_id::https_well_formed || r == rule_id::well_formed_known) ? verdict_label::legit : verdict_label::phishing;
}

struct verdict {
    verdict_label label;
    rule_id fired_rule;
    std::string tip;

    bool operator==(const verdict&) const = default;
};

namespace detail {

inline bool contains_label_run(const std::vector<std::string>& labels, const std::vector<std::string>& run)
{
    if (run.empty() || run.size() > labels.size())
        return false;
    return std::search(labels.begin(), labels.end(), run.begin(), run.end()) != labels.end();
}

inline bool within_misspelling(std::string_view a, std::string_view b)
{
    auto d = edit_distance(a, b);
    return d >= 1 && d <= 2;
}

} // namespace detail

// Applies the rules in precedence order; the first that matches wins.
// Throws errc::unknown_domain when no rule applies.
inline verdict classify(const parsed_url& p, const brand_registry& reg, const suffix_table& t,
                        const std::vector<std::string>& security_keywords = default_security_keywords())
{
    auto fire = [](rule_id r) { return verdict{label_of(r), r, std::string(tip_for(r))}; };

    if (p.is_ip_host)
        return fire(rule_id::ip_host);

    const auto domain = registrable_domain(p, t);

    for (const auto& b : reg.entries()) {
        for (const auto& d : b.domains) {
            if (domain != d && detail::contains_label_run(p.host_labels, detail::split(d, '.')))
                return fire(rule_id::embedded_brand);
        }
    }

    if (!domain)
        throw error(errc::unknown_domain, "no registrable domain for host '" + p.host + "'");

    const std::string lead = domain->substr(0, domain->find('.'));
    const bool canonical = reg.is_canonical_domain(*domain);

    if (!canonical) {
        for (const auto& b : reg.entries()) {
            if (detail::within_misspelling(lead, b.name))
                return fire(rule_id::misspelled_brand);
            for (const auto& d : b.domains) {
                if (detail::within_misspelling(*domain, d))
                    return fire(rule_id::misspelled_brand);
            }
        }
    }

    const auto segments = detail::split(lead, '-');
    if (lead.find('-') != std::string::npos) {
        for (const auto& s : segments) {
            if (reg.find(s))
                return fire(rule_id::hyphen_brand);
        }
    }

    for (const auto& s : segments) {
        if (std::find(security_keywords.begin(), security_keywords.end(), s) != security_keywords.end())
            return fire(rule_id::security_keyword);
    }

    if (canonical)
        return fire(p.uses_https ? rule_id::https_well_formed : rule_id::well_formed_known);

    throw error(errc::unknown_domain, "'" + *domain + "' is neither suspicious nor a known brand domain");
}

} // namespace phishfish
