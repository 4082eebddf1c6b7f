#pragma once

// The worm corpus: cards, the built-in ten-URL deck, the JSON deck file
// format, and the tier-ordered deterministic round arrangement.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "phishfish/error.hpp"
#include "phishfish/phish_rules.hpp"
#include "phishfish/url_model.hpp"
#include "phishfish/xorshift.hpp"

namespace phishfish {

// good = legitimate URL (real worm), bad = phishing URL (fake worm).
enum class worm_truth { good, bad };

constexpr std::string_view to_string(worm_truth t) noexcept { return t == worm_truth::good ? "good" : "bad"; }

struct worm_card {
    std::string url;
    worm_truth truth = worm_truth::good;
    std::string focus;
    std::string tip;
    int tier = 1;

    bool operator==(const worm_card&) const = default;
};

struct deck {
    std::string name;
    std::vector<worm_card> cards;
    // Additions to the built-in classifier data; empty for the built-in deck.
    std::vector<std::string> suffixes;
    std::vector<brand> brands;
    std::optional<std::vector<std::string>> security_keywords;

    bool operator==(const deck&) const = default;
};

// Classifier inputs for one deck: built-in brands and suffixes plus the
// deck's own additions.
struct rulebook {
    brand_registry brands;
    suffix_table suffixes;
    std::vector<std::string> security_keywords;

    verdict classify(const parsed_url& p) const { return phishfish::classify(p, brands, suffixes, security_keywords); }
    verdict classify(std::string_view url) const { return classify(parse_url(url)); }
};

inline rulebook rulebook_for(const deck& d)
{
    rulebook r{brand_registry::builtin(), suffix_table(), d.security_keywords.value_or(default_security_keywords())};
    for (const auto& s : d.suffixes)
        r.suffixes.add(s);
    for (const auto& b : d.brands)
        r.brands.add(b);
    return r;
}

// The original game's card list, reconciled:
//  - the misspelled-PayPal row printed the genuine "www.paypal.com"; it is
//    replaced by the look-alike "www.paypa1.com";
//  - "www ebay-security.com" (printed with a space) is "www.ebay-security.com"
//    and is a bad worm, as its scam-warning tip says;
//  - "www.online.lloydsbank.co.uk" is a good worm, restoring five good and
//    five bad.
// Tips are kept exactly as printed, including on the two relabelled rows.
inline deck builtin_deck()
{
    const std::string appropriate = "URLs with well-known domain and correctly spelled are legitimate";
    const std::string misspelled = "Don't trust URLs with misspelled known websites";
    using enum worm_truth;
    return deck{
        "builtin",
        {
            {"http://www.nationwide.co.uk/default.htm", good, "Appropriate URL", appropriate, 1},
            {"http://147.46.236.5/PayPal/login.html", bad, "IP address URL",
             "Don't trust URLs with all numbers in the front", 1},
            {"www.paypa1.com", bad, "Miss spelled URL", misspelled, 3},
            {"www.smile.co.uk/", good, "Appropriate URL", appropriate, 1},
            {"www.arguments.co.uk.myshop.com", bad, "Sub domain URL",
             "Don't trust URLs with large host names that contained a part of a well-known web addresses", 3},
            {"http://www.msn-verify.com/", bad, "Similar and deceptive domains",
             "Company name followed by a hyphen usually means, it's a scam website", 2},
            {"http://www.halifax.co.uk/aboutonline/home.asp", good, "Appropriate URL", appropriate, 1},
            {"www.ebay-security.com", bad, "Similar and deceptive domains",
             "Companies don't use security related keywords in their domains", 2},
            {"www.online.lloydsbank.co.uk", good, "Miss spelled URL", misspelled, 3},
            {"https://bank.barclays.co.uk/", good, "Appropriate URL",
             "URL with 'https://?' usually a legitimate website", 1},
        },
        {},
        {},
        std::nullopt,
    };
}

// Returns every violated invariant; empty means the deck is valid.
inline std::vector<std::string> validate(const deck& d)
{
    std::vector<std::string> problems;
    if (d.name.empty())
        problems.emplace_back("deck name is empty");
    if (d.cards.size() < 2)
        problems.emplace_back("deck too small");

    std::set<std::string> seen;
    bool any_good = false, any_bad = false;
    for (std::size_t i = 0; i < d.cards.size(); ++i) {
        const auto& c = d.cards[i];
        const std::string where = "card " + std::to_string(i) + " (" + c.url + ")";
        try {
            parse_url(c.url);
        } catch (const error& e) {
            problems.push_back(where + ": url does not parse: " + e.what());
        }
        if (!seen.insert(c.url).second)
            problems.push_back(where + ": duplicate url");
        if (c.tip.empty())
            problems.push_back(where + ": missing tip");
        if (c.tier < 1 || c.tier > 3)
            problems.push_back(where + ": bad tier " + std::to_string(c.tier));
        (c.truth == worm_truth::good ? any_good : any_bad) = true;
    }
    if (!d.cards.empty() && !any_good)
        problems.emplace_back("no good card");
    if (!d.cards.empty() && !any_bad)
        problems.emplace_back("no bad card");

    try {
        rulebook_for(d);
    } catch (const error& e) {
        problems.emplace_back(e.what());
    }
    return problems;
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                                std::string_view where)
{
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw error(errc::parse_error, std::string(where) + ": unknown key '" + key + "'");
    }
}

template <typename T>
T required(const nlohmann::json& obj, const char* key, std::string_view where)
{
    if (!obj.contains(key))
        throw error(errc::parse_error, std::string(where) + ": missing key '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw error(errc::parse_error, std::string(where) + ": wrong type for '" + key + "'");
    }
}

template <typename T>
std::vector<T> optional_array(const nlohmann::json& obj, const char* key, std::string_view where)
{
    if (!obj.contains(key))
        return {};
    return required<std::vector<T>>(obj, key, where);
}

} // namespace detail

// Parses and validates a deck document. Throws errc::parse_error for a
// malformed document and validation_error listing every violated invariant.
inline deck load_deck(std::string_view document)
{
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw error(errc::parse_error, std::string("deck is not valid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw error(errc::parse_error, "deck: top level must be an object");
    detail::reject_unknown_keys(root, {"name", "suffixes", "brands", "security_keywords", "cards"}, "deck");

    deck d;
    d.name = detail::required<std::string>(root, "name", "deck");
    d.suffixes = detail::optional_array<std::string>(root, "suffixes", "deck");
    if (root.contains("security_keywords"))
        d.security_keywords = detail::required<std::vector<std::string>>(root, "security_keywords", "deck");

    for (const auto& jb : detail::optional_array<nlohmann::json>(root, "brands", "deck")) {
        if (!jb.is_object())
            throw error(errc::parse_error, "brand: must be an object");
        detail::reject_unknown_keys(jb, {"name", "domains"}, "brand");
        d.brands.push_back({detail::required<std::string>(jb, "name", "brand"),
                            detail::required<std::vector<std::string>>(jb, "domains", "brand")});
    }

    const auto cards = detail::required<std::vector<nlohmann::json>>(root, "cards", "deck");
    for (std::size_t i = 0; i < cards.size(); ++i) {
        const auto& jc = cards[i];
        const std::string where = "card " + std::to_string(i);
        if (!jc.is_object())
            throw error(errc::parse_error, where + ": must be an object");
        detail::reject_unknown_keys(jc, {"url", "truth", "focus", "tip", "tier"}, where);
        worm_card c;
        c.url = detail::required<std::string>(jc, "url", where);
        auto truth = detail::required<std::string>(jc, "truth", where);
        if (truth != "good" && truth != "bad")
            throw error(errc::parse_error, where + ": truth must be \"good\" or \"bad\"");
        c.truth = truth == "good" ? worm_truth::good : worm_truth::bad;
        c.focus = detail::required<std::string>(jc, "focus", where);
        c.tip = detail::required<std::string>(jc, "tip", where);
        if (!jc.contains("tier") || !jc.at("tier").is_number_integer())
            throw error(errc::parse_error, where + ": tier must be an integer");
        c.tier = jc.at("tier").get<int>();
        d.cards.push_back(std::move(c));
    }

    if (auto problems = validate(d); !problems.empty())
        throw validation_error(std::move(problems));
    return d;
}

inline std::string serialize_deck(const deck& d)
{
    nlohmann::ordered_json root;
    root["name"] = d.name;
    if (!d.suffixes.empty())
        root["suffixes"] = d.suffixes;
    if (!d.brands.empty()) {
        auto& brands = root["brands"] = nlohmann::ordered_json::array();
        for (const auto& b : d.brands)
            brands.push_back({{"name", b.name}, {"domains", b.domains}});
    }
    if (d.security_keywords)
        root["security_keywords"] = *d.security_keywords;
    auto& cards = root["cards"] = nlohmann::ordered_json::array();
    for (const auto& c : d.cards) {
        cards.push_back({{"url", c.url},
                         {"truth", std::string(to_string(c.truth))},
                         {"focus", c.focus},
                         {"tip", c.tip},
                         {"tier", c.tier}});
    }
    return root.dump(2) + "\n";
}

// Cards sorted by ascending tier; each tier group, taken in deck order, is
// Fisher-Yates shuffled (i = n-1 .. 1, j = next() % (i + 1)) from a single
// xorshift64* stream seeded once per call.
inline std::vector<worm_card> arrange(const deck& d, std::uint64_t seed)
{
    xorshift64star rng(seed);
    std::map<int, std::vector<worm_card>> by_tier;
    for (const auto& c : d.cards)
        by_tier[c.tier].push_back(c);

    std::vector<worm_card> out;
    out.reserve(d.cards.size());
    for (auto& [tier, group] : by_tier) {
        for (std::size_t i = group.size() - 1; i > 0; --i) {
            auto j = static_cast<std::size_t>(rng.below(i + 1));
            std::swap(group[i], group[j]);
        }
        out.insert(out.end(), group.begin(), group.end());
    }
    return out;
}

// Named decks available to sessions and replay. Always holds "builtin".
class deck_catalog {
public:
    deck_catalog() { decks_.emplace("builtin", builtin_deck()); }

    void add(deck d)
    {
        auto name = d.name;
        decks_.insert_or_assign(std::move(name), std::move(d));
    }

    // Loads every *.json file in `dir` as a deck, keyed by its "name".
    void load_directory(const std::filesystem::path& dir)
    {
        if (!std::filesystem::is_directory(dir))
            throw error(errc::unknown_deck, "deck directory not found: " + dir.string());
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            std::ifstream in(f, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            try {
                add(load_deck(ss.str()));
            } catch (const error& e) {
                throw error(e.code(), f.string() + ": " + e.what());
            }
        }
    }

    const deck* find(std::string_view name) const
    {
        auto it = decks_.find(std::string(name));
        return it == decks_.end() ? nullptr : &it->second;
    }

    const deck& at(std::string_view name) const
    {
        if (auto d = find(name))
            return *d;
        throw error(errc::unknown_deck, "unknown deck '" + std::string(name) + "'");
    }

    std::vector<std::string> names() const
    {
        std::vector<std::string> out;
        for (const auto& [name, _] : decks_)
            out.push_back(name);
        return out;
    }

private:
    std::map<std::string, deck> decks_;
};

} // namespace phishfish
