#include <gtest/gtest.h>

#include "phishfish/phish_rules.hpp"
#include "support/oracles.hpp"

using namespace phishfish;

TEST(EditDistance, Examples)
{
    EXPECT_EQ(edit_distance("paypal", "paypal"), 0u);
    EXPECT_EQ(edit_distance("", "abc"), 3u);
    EXPECT_EQ(edit_distance("abc", ""), 3u);
    EXPECT_EQ(edit_distance("", ""), 0u);
    // Frozen from tests/oracles/reference.py.
    EXPECT_EQ(edit_distance("paypa1", "paypal"), 1u);
    EXPECT_EQ(edit_distance("loyds", "lloyds"), 1u);
    EXPECT_EQ(edit_distance("kitten", "sitting"), 3u);
    EXPECT_EQ(edit_distance("myshop", "msn"), 4u);
}

TEST(EditDistance, MatchesBruteForceOnSmallAlphabet)
{
    const auto words = test::all_strings("abc", 4);
    for (const auto& a : words)
        for (const auto& b : words)
            ASSERT_EQ(edit_distance(a, b), test::brute_force_distance(a, b)) << a << " / " << b;
}

TEST(EditDistance, IsAMetric)
{
    test::input_rng rng(31337);
    for (int i = 0; i < 3000; ++i) {
        const auto a = rng.string_over("abcd", 9);
        const auto b = rng.string_over("abcd", 9);
        const auto c = rng.string_over("abcd", 9);
        const auto ab = edit_distance(a, b);
        EXPECT_EQ(ab, edit_distance(b, a));
        EXPECT_EQ(ab == 0, a == b);
        EXPECT_LE(edit_distance(a, c), ab + edit_distance(b, c));
        EXPECT_LE(ab, std::max(a.size(), b.size()));
    }
}

TEST(TipFor, VerbatimStrings)
{
    EXPECT_EQ(tip_for(rule_id::ip_host), "Don't trust URLs with all numbers in the front");
    EXPECT_EQ(tip_for(rule_id::misspelled_brand), "Don't trust URLs with misspelled known websites");
    EXPECT_EQ(tip_for(rule_id::well_formed_known), "URLs with well-known domain and correctly spelled are legitimate");
    EXPECT_EQ(tip_for(rule_id::https_well_formed), "URL with 'https://?' usually a legitimate website");
    for (auto r : all_rules) {
        EXPECT_FALSE(tip_for(r).empty());
        EXPECT_EQ(rule_for_tip(tip_for(r)), r);
    }
    EXPECT_EQ(rule_for_tip("something else"), std::nullopt);
}

TEST(BrandRegistry, Validation)
{
    brand_registry reg;
    reg.add({"acme", {"acme.com"}});
    EXPECT_THROW(reg.add({"acme", {"acme.org"}}), error);
    EXPECT_THROW(reg.add({"Acme2", {"acme2.com"}}), error);
    EXPECT_THROW(reg.add({"acme-x", {"acmex.com"}}), error);
    EXPECT_THROW(reg.add({"bad", {"http://bad.com/"}}), error);
    EXPECT_THROW(reg.add({"bad", {"bad..com"}}), error);
    EXPECT_TRUE(reg.is_canonical_domain("acme.com"));
    EXPECT_EQ(brand_registry::builtin().entries().size(), 9u);
}

namespace {

struct classifier_fixture : ::testing::Test {
    brand_registry reg = brand_registry::builtin();
    suffix_table suffixes;

    verdict classify(std::string_view url) const { return phishfish::classify(parse_url(url), reg, suffixes); }
};

} // namespace

TEST_F(classifier_fixture, TableExamples)
{
    auto v = classify("http://147.46.236.5/PayPal/login.html");
    EXPECT_EQ(v, (verdict{verdict_label::phishing, rule_id::ip_host, "Don't trust URLs with all numbers in the front"}));

    v = classify("www.arguments.co.uk.myshop.com");
    EXPECT_EQ(v.label, verdict_label::phishing);
    EXPECT_EQ(v.fired_rule, rule_id::embedded_brand);
    EXPECT_EQ(v.tip, "Don't trust URLs with large host names that contained a part of a well-known web addresses");

    v = classify("http://www.msn-verify.com/");
    EXPECT_EQ(v.fired_rule, rule_id::hyphen_brand);
    EXPECT_EQ(v.tip, "Company name followed by a hyphen usually means, it's a scam website");

    EXPECT_EQ(classify("www.ebay-security.com").fired_rule, rule_id::hyphen_brand);
    EXPECT_EQ(classify("www.ebay-security.com").label, verdict_label::phishing);

    v = classify("https://bank.barclays.co.uk/");
    EXPECT_EQ(v, (verdict{verdict_label::legit, rule_id::https_well_formed,
                          "URL with 'https://?' usually a legitimate website"}));

    EXPECT_EQ(classify("www.paypa1.com").fired_rule, rule_id::misspelled_brand);
    EXPECT_EQ(classify("www.smile.co.uk/").fired_rule, rule_id::well_formed_known);
}

TEST_F(classifier_fixture, MoreRules)
{
    EXPECT_EQ(classify("www.lloydbank.co.uk").fired_rule, rule_id::misspelled_brand);
    EXPECT_THROW(classify("www.paypal.net"), error) << "paypal.net is 3 edits from paypal.com";
    EXPECT_EQ(classify("secure-login.com").fired_rule, rule_id::security_keyword);
    EXPECT_EQ(classify("account.com").fired_rule, rule_id::security_keyword);
    EXPECT_EQ(classify("http://paypal.com.evil.net/").fired_rule, rule_id::embedded_brand);
    EXPECT_EQ(classify("http://www.paypal.com/").fired_rule, rule_id::well_formed_known);
    EXPECT_EQ(classify("https://www.paypal.com/").fired_rule, rule_id::https_well_formed);
}

TEST_F(classifier_fixture, UnknownDomain)
{
    for (const char* url : {"example.org", "https://example.org", "co.uk", "localhost"}) {
        try {
            classify(url);
            ADD_FAILURE() << url;
        } catch (const error& e) {
            EXPECT_EQ(e.code(), errc::unknown_domain) << url;
        }
    }
}

TEST_F(classifier_fixture, PrecedenceOnMultiTriggerUrls)
{
    // IP host with a keyword and a brand in the path.
    EXPECT_EQ(classify("https://10.1.2.3/verify/paypal").fired_rule, rule_id::ip_host);
    // Embedded brand whose registrable label is also a hyphenated keyword.
    EXPECT_EQ(classify("ebay.com.ebay-verify.com").fired_rule, rule_id::embedded_brand);
    // Misspelled brand that also carries a keyword segment.
    EXPECT_EQ(classify("paypa1-secure.com").fired_rule, rule_id::security_keyword)
        << "whole label is the misspelling candidate and is far from every brand";
    EXPECT_EQ(classify("ebau.com").fired_rule, rule_id::misspelled_brand);
    // Hyphen-brand outranks security keyword.
    EXPECT_EQ(classify("https://login-paypal.com/").fired_rule, rule_id::hyphen_brand);
    // HTTPS never rescues a suspicious host.
    EXPECT_EQ(classify("https://msn-verify.com").label, verdict_label::phishing);
}

TEST_F(classifier_fixture, MisspelledDomainWithCorrectBrandLabel)
{
    suffixes.add("cm");
    const auto v = classify("www.paypal.cm");
    EXPECT_EQ(v.fired_rule, rule_id::misspelled_brand);
    EXPECT_EQ(edit_distance("paypal.cm", "paypal.com"), 1u);
}

TEST_F(classifier_fixture, CustomKeywordList)
{
    auto v = phishfish::classify(parse_url("update-now.com"), reg, suffixes, {"update"});
    EXPECT_EQ(v.fired_rule, rule_id::security_keyword);
}

TEST_F(classifier_fixture, VerdictConsistencyAndDeterminism)
{
    test::input_rng rng(5);
    const std::vector<std::string> parts{"paypal", "paypa1", "ebay", "msn", "verify", "secure", "halifax",
                                         "co",     "uk",     "com",  "www", "shop",   "10",     "200"};
    int classified = 0;
    for (int i = 0; i < 5000; ++i) {
        std::string host;
        const auto n = 1 + rng.below(5);
        for (std::uint64_t k = 0; k < n; ++k) {
            if (k)
                host += rng.below(4) ? "." : "-";
            host += parts[rng.below(parts.size())];
        }
        const std::string url = (rng.below(2) ? "https://" : "") + host;
        try {
            const auto v = classify(url);
            EXPECT_EQ(v.label, label_of(v.fired_rule)) << url;
            EXPECT_EQ(v.tip, tip_for(v.fired_rule)) << url;
            EXPECT_EQ(v, classify(url)) << url;
            ++classified;
        } catch (const error& e) {
            EXPECT_TRUE(e.code() == errc::unknown_domain || e.code() == errc::malformed_host) << url;
        }
    }
    EXPECT_GT(classified, 200);
}
