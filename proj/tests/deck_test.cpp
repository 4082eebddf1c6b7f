#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "phishfish/deck.hpp"

using namespace phishfish;

namespace {

std::vector<std::string> validation_messages(std::string_view doc)
{
    try {
        load_deck(doc);
    } catch (const validation_error& e) {
        return e.violations();
    }
    return {};
}

errc load_error(std::string_view doc)
{
    try {
        load_deck(doc);
    } catch (const error& e) {
        return e.code();
    }
    return errc::invalid_argument;
}

bool contains_substring(const std::vector<std::string>& v, std::string_view needle)
{
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

std::vector<std::string> urls(const std::vector<worm_card>& cards)
{
    std::vector<std::string> out;
    for (const auto& c : cards)
        out.push_back(c.url);
    return out;
}

} // namespace

TEST(Xorshift, GoldenSequences)
{
    // From tests/oracles/reference.py.
    xorshift64star one(1);
    EXPECT_EQ(one.next(), 5180492295206395165ULL);
    EXPECT_EQ(one.next(), 12380297144915551517ULL);
    EXPECT_EQ(one.next(), 13389498078930870103ULL);

    xorshift64star zero(0);
    EXPECT_EQ(zero.next(), 973819730272012410ULL);
    EXPECT_EQ(zero.next(), 6108091081255984487ULL);

    xorshift64star remapped(0x9E3779B97F4A7C15ULL);
    xorshift64star zero_again(0);
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(remapped.next(), zero_again.next());

    xorshift64star answer(42);
    EXPECT_EQ(answer.next(), 6255019084209693600ULL);
}

TEST(BuiltinDeck, ShapeMatchesTheGame)
{
    const auto d = builtin_deck();
    EXPECT_EQ(d.name, "builtin");
    ASSERT_EQ(d.cards.size(), 10u);
    EXPECT_EQ(std::count_if(d.cards.begin(), d.cards.end(), [](auto& c) { return c.truth == worm_truth::good; }), 5);
    EXPECT_EQ(std::count_if(d.cards.begin(), d.cards.end(), [](auto& c) { return c.truth == worm_truth::bad; }), 5);
    EXPECT_TRUE(validate(d).empty());

    auto ip = std::find_if(d.cards.begin(), d.cards.end(),
                           [](auto& c) { return c.url == "http://147.46.236.5/PayPal/login.html"; });
    ASSERT_NE(ip, d.cards.end());
    EXPECT_EQ(ip->truth, worm_truth::bad);
    EXPECT_EQ(ip->tip, "Don't trust URLs with all numbers in the front");
}

TEST(BuiltinDeck, ClassifierAgreesWithCurriculum)
{
    const auto d = builtin_deck();
    const auto rules = rulebook_for(d);
    for (const auto& c : d.cards) {
        const auto v = rules.classify(c.url);
        EXPECT_EQ(v.label == verdict_label::legit, c.truth == worm_truth::good) << c.url;
    }
}

// The printed tips of two reconciled rows name a different rule than the one
// that classifies them; every other card's tip is its own rule's message.
TEST(BuiltinDeck, TipMatchesFiredRuleExceptReconciledRows)
{
    const std::vector<std::string> reconciled{"www.ebay-security.com", "www.online.lloydsbank.co.uk"};
    const auto d = builtin_deck();
    const auto rules = rulebook_for(d);
    int agreeing = 0;
    for (const auto& c : d.cards) {
        const auto v = rules.classify(c.url);
        const bool is_reconciled = std::find(reconciled.begin(), reconciled.end(), c.url) != reconciled.end();
        if (is_reconciled) {
            EXPECT_NE(c.tip, v.tip) << c.url;
            EXPECT_TRUE(rule_for_tip(c.tip).has_value()) << c.url;
        } else {
            EXPECT_EQ(c.tip, tip_for(v.fired_rule)) << c.url;
            ++agreeing;
        }
    }
    EXPECT_EQ(agreeing, 8);
    EXPECT_EQ(rules.classify("www.ebay-security.com").fired_rule, rule_id::hyphen_brand);
    EXPECT_EQ(rule_for_tip(d.cards[7].tip), rule_id::security_keyword);
}

TEST(BuiltinDeck, TiersFollowScrutinyNeeded)
{
    for (const auto& c : builtin_deck().cards) {
        const auto rule = rulebook_for(builtin_deck()).classify(c.url).fired_rule;
        switch (rule) {
        case rule_id::ip_host:
        case rule_id::https_well_formed:
            EXPECT_EQ(c.tier, 1) << c.url;
            break;
        case rule_id::hyphen_brand:
        case rule_id::security_keyword:
            EXPECT_EQ(c.tier, 2) << c.url;
            break;
        case rule_id::misspelled_brand:
        case rule_id::embedded_brand:
            EXPECT_EQ(c.tier, 3) << c.url;
            break;
        case rule_id::well_formed_known:
            // lloydsbank keeps the tier of its misspelling row.
            EXPECT_TRUE(c.tier == 1 || c.url == "www.online.lloydsbank.co.uk") << c.url;
            break;
        }
    }
}

TEST(DeckFile, BuiltinRoundTrip)
{
    const auto d = builtin_deck();
    const auto text = serialize_deck(d);
    EXPECT_EQ(load_deck(text), d);
    EXPECT_EQ(serialize_deck(load_deck(text)), text);
}

TEST(DeckFile, ExtrasRoundTripAndFeedTheClassifier)
{
    const std::string doc = R"({
        "name": "extra",
        "suffixes": ["io"],
        "brands": [{"name": "acme", "domains": ["acme.io"]}],
        "security_keywords": ["urgent"],
        "cards": [
            {"url": "https://acme.io/", "truth": "good", "focus": "Appropriate URL", "tip": "ok", "tier": 1},
            {"url": "acme-urgent.io", "truth": "bad", "focus": "Similar", "tip": "hyphen", "tier": 2}
        ]})";
    const auto d = load_deck(doc);
    EXPECT_EQ(load_deck(serialize_deck(d)), d);
    const auto rules = rulebook_for(d);
    EXPECT_EQ(rules.classify("https://acme.io/").fired_rule, rule_id::https_well_formed);
    EXPECT_EQ(rules.classify("acme-urgent.io").fired_rule, rule_id::hyphen_brand);
    EXPECT_EQ(rules.classify("urgent.io").fired_rule, rule_id::security_keyword);
    EXPECT_THROW(rules.classify("verify.io"), error);
}

TEST(DeckFile, ValidationErrors)
{
    const std::string card_a = R"({"url": "a.com", "truth": "good", "focus": "f", "tip": "t", "tier": 1})";
    const std::string card_b = R"({"url": "b.com", "truth": "bad", "focus": "f", "tip": "t", "tier": 1})";

    auto v = validation_messages(R"({"name": "d", "cards": [)" + card_a + "," + card_a + "]}");
    EXPECT_TRUE(contains_substring(v, "duplicate url"));

    v = validation_messages(R"({"name": "d", "cards": [)" + card_a + "]}");
    EXPECT_TRUE(contains_substring(v, "deck too small"));
    EXPECT_TRUE(contains_substring(v, "no bad card"));

    v = validation_messages(
        R"({"name": "d", "cards": [{"url": "a.com", "truth": "good", "focus": "f", "tip": "", "tier": 4}, )" + card_b +
        "]}");
    EXPECT_TRUE(contains_substring(v, "missing tip"));
    EXPECT_TRUE(contains_substring(v, "bad tier 4"));

    v = validation_messages(
        R"({"name": "d", "cards": [{"url": "a..com", "truth": "good", "focus": "f", "tip": "t", "tier": 1}, )" +
        card_b + "]}");
    EXPECT_TRUE(contains_substring(v, "does not parse"));

    v = validation_messages(R"({"name": "d", "brands": [{"name": "Bad Name", "domains": []}], "cards": [)" + card_a +
                            "," + card_b + "]}");
    EXPECT_TRUE(contains_substring(v, "lowercase alphanumeric"));

    EXPECT_EQ(load_deck(R"({"name": "d", "cards": [)" + card_a + "," + card_b + "]}").cards.size(), 2u);
}

TEST(DeckFile, ParseErrors)
{
    const std::string card = R"({"url": "a.com", "truth": "good", "focus": "f", "tip": "t", "tier": 1})";
    EXPECT_EQ(load_error("{"), errc::parse_error);
    EXPECT_EQ(load_error("[]"), errc::parse_error);
    EXPECT_EQ(load_error(R"({"cards": []})"), errc::parse_error);
    EXPECT_EQ(load_error(R"({"name": "d", "cards": [], "colour": "red"})"), errc::parse_error);
    EXPECT_EQ(load_error(R"({"name": "d", "cards": [{"url": "a.com", "truth": "maybe", "focus": "f", "tip": "t", "tier": 1}]})"),
              errc::parse_error);
    EXPECT_EQ(load_error(R"({"name": "d", "cards": [{"url": "a.com", "truth": "good", "focus": "f", "tip": "t", "tier": 1.5}]})"),
              errc::parse_error);
    EXPECT_EQ(load_error(R"({"name": "d", "cards": [{"url": "a.com", "truth": "good", "focus": "f", "tip": "t", "tier": 1, "x": 1}]})"),
              errc::parse_error);
    EXPECT_EQ(load_error(R"({"name": 3, "cards": [)" + card + "]}"), errc::parse_error);
    EXPECT_EQ(load_error(R"({"name": "d", "cards": [)" + card + "]}"), errc::validation_error);
}

TEST(Arrange, GoldenOrders)
{
    // From tests/oracles/reference.py.
    EXPECT_EQ(urls(arrange(builtin_deck(), 42)), (std::vector<std::string>{
                                                      "https://bank.barclays.co.uk/",
                                                      "http://147.46.236.5/PayPal/login.html",
                                                      "http://www.halifax.co.uk/aboutonline/home.asp",
                                                      "www.smile.co.uk/",
                                                      "http://www.nationwide.co.uk/default.htm",
                                                      "www.ebay-security.com",
                                                      "http://www.msn-verify.com/",
                                                      "www.arguments.co.uk.myshop.com",
                                                      "www.paypa1.com",
                                                      "www.online.lloydsbank.co.uk",
                                                  }));
    EXPECT_EQ(urls(arrange(builtin_deck(), 7)), (std::vector<std::string>{
                                                     "http://147.46.236.5/PayPal/login.html",
                                                     "http://www.halifax.co.uk/aboutonline/home.asp",
                                                     "http://www.nationwide.co.uk/default.htm",
                                                     "https://bank.barclays.co.uk/",
                                                     "www.smile.co.uk/",
                                                     "http://www.msn-verify.com/",
                                                     "www.ebay-security.com",
                                                     "www.paypa1.com",
                                                     "www.online.lloydsbank.co.uk",
                                                     "www.arguments.co.uk.myshop.com",
                                                 }));
}

TEST(Arrange, DeterministicPermutationWithRisingTiers)
{
    const auto d = builtin_deck();
    auto sorted_urls = urls(d.cards);
    std::sort(sorted_urls.begin(), sorted_urls.end());
    std::set<std::vector<std::string>> distinct_orders;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto a = arrange(d, seed * 0x9E3779B97F4A7C15ULL + 1);
        EXPECT_EQ(a, arrange(d, seed * 0x9E3779B97F4A7C15ULL + 1));
        auto got = urls(a);
        distinct_orders.insert(got);
        std::sort(got.begin(), got.end());
        ASSERT_EQ(got, sorted_urls);
        EXPECT_TRUE(std::is_sorted(a.begin(), a.end(), [](auto& x, auto& y) { return x.tier < y.tier; }));
    }
    EXPECT_GT(distinct_orders.size(), 100u);
}

TEST(DeckCatalog, LoadsDirectoryByName)
{
    const auto dir = std::filesystem::temp_directory_path() / "phishfish_deck_catalog_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto d = builtin_deck();
    d.name = "copy";
    std::ofstream(dir / "copy.json") << serialize_deck(d);
    std::ofstream(dir / "notes.txt") << "ignored";

    deck_catalog catalog;
    catalog.load_directory(dir);
    EXPECT_EQ(catalog.names(), (std::vector<std::string>{"builtin", "copy"}));
    EXPECT_EQ(catalog.at("copy").cards, builtin_deck().cards);
    EXPECT_THROW(catalog.at("missing"), error);

    std::ofstream(dir / "broken.json") << "{";
    EXPECT_THROW(catalog.load_directory(dir), error);
    std::filesystem::remove_all(dir);
}
