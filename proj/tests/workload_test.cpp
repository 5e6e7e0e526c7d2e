#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lss/oracle.hpp"
#include "lss/workload.hpp"

namespace {

using lss::item_id;
using lss::make_item;

TEST(Zipf, AlphaZeroIsUniform) {
    const std::uint64_t n = 20, len = 200'000;
    const auto stream = lss::gen_zipf(0.0, n, len, 1);
    std::vector<double> counts(n, 0.0);
    for (item_id x : stream) {
        ASSERT_GE(lss::raw(x), 1u);
        ASSERT_LE(lss::raw(x), n);
        counts[lss::raw(x) - 1] += 1;
    }
    const double expected = static_cast<double>(len) / n;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // chi-square with n-1 degrees of freedom: mean 19, sd sqrt(38)
    EXPECT_LT(chi2, 19.0 + 3.0 * std::sqrt(38.0));
}

TEST(Zipf, RankOneFrequency) {
    const std::uint64_t n = 10'000, len = 200'000;
    const double alpha = 1.3;
    const auto stream = lss::gen_zipf(alpha, n, len, 2);
    double h = 0.0;
    for (std::uint64_t r = 1; r <= n; ++r) h += std::pow(static_cast<double>(r), -alpha);
    EXPECT_NEAR(lss::zipf_normalizer(alpha, n), h, 1e-9);
    const double p1 = 1.0 / h;
    const auto ones = std::count(stream.begin(), stream.end(), make_item(1));
    EXPECT_NEAR(static_cast<double>(ones), p1 * len, 3.0 * std::sqrt(len * p1 * (1.0 - p1)));
}

TEST(Zipf, SameSeedSameStream) {
    EXPECT_EQ(lss::gen_zipf(1.1, 1000, 5000, 9), lss::gen_zipf(1.1, 1000, 5000, 9));
    EXPECT_NE(lss::gen_zipf(1.1, 1000, 5000, 9), lss::gen_zipf(1.1, 1000, 5000, 10));
}

TEST(Zipf, RejectsBadParameters) {
    EXPECT_THROW(lss::zipf_generator(-0.5, 10, 1), std::invalid_argument);
    EXPECT_THROW(lss::zipf_generator(1.0, 0, 1), std::invalid_argument);
    EXPECT_THROW(lss::gen_zipf(1.0, 10, 0, 1), std::invalid_argument);
}

TEST(Trace, ParsesTokens) {
    lss::token_dictionary dict;
    std::istringstream in("a\nb\na\n");
    const auto stream = lss::parse_trace(in, dict);
    ASSERT_EQ(stream.size(), 3u);
    EXPECT_EQ(stream[0], stream[2]);
    const lss::exact_oracle oracle(stream);
    EXPECT_EQ(oracle.count(dict.intern("a")), 2u);
    EXPECT_EQ(oracle.count(dict.intern("b")), 1u);
    EXPECT_EQ(*dict.token(stream[1]), "b");
}

TEST(Trace, EmptyTraceRejected) {
    lss::token_dictionary dict;
    std::istringstream empty(""), blank("\n\n");
    EXPECT_THROW(lss::parse_trace(empty, dict), lss::trace_error);
    try {
        lss::parse_trace(blank, dict);
        FAIL();
    } catch (const lss::trace_error& e) {
        EXPECT_STREQ(e.what(), "empty trace");
    }
}

TEST(Trace, InvalidUtf8ReportsLine) {
    lss::token_dictionary dict;
    std::istringstream in("ok\n\xc3\x28\n");
    try {
        lss::parse_trace(in, dict);
        FAIL();
    } catch (const lss::trace_error& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_TRUE(lss::valid_utf8("caf\xc3\xa9 \xe2\x82\xac \xf0\x9f\x98\x80"));
    EXPECT_FALSE(lss::valid_utf8("\xc0\xaf"));          // overlong
    EXPECT_FALSE(lss::valid_utf8("\xed\xa0\x80"));      // surrogate
    EXPECT_FALSE(lss::valid_utf8("\xe2\x82"));          // truncated
}

TEST(Trace, FileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "lss_workload_round_trip.trace";
    const auto stream = lss::gen_zipf(1.3, 100'000, 1'000'000, 4);
    lss::write_trace(path.string(), stream);
    lss::token_dictionary dict;
    const auto back = lss::read_trace(path.string(), dict);
    std::filesystem::remove(path);
    ASSERT_EQ(back.size(), stream.size());
    const lss::exact_oracle a(stream), b(back);
    EXPECT_EQ(b.total(), 1'000'000u);
    EXPECT_EQ(a.distinct(), b.distinct());
    EXPECT_EQ(a.singletons(), b.singletons());
    EXPECT_EQ(*dict.token(back[0]), std::to_string(lss::raw(stream[0])));
}

TEST(Trace, MissingFile) {
    lss::token_dictionary dict;
    EXPECT_THROW(lss::read_trace("/nonexistent/dir/x.trace", dict), lss::trace_error);
}

TEST(Oracle, TopKBreaksTiesByFirstArrival) {
    const item_id a = make_item(1), b = make_item(2), c = make_item(3);
    const lss::exact_oracle oracle(std::vector<item_id>{c, b, a, a, b, c, a});
    EXPECT_EQ(oracle.top_k(2), (std::vector<item_id>{a, c}));
    EXPECT_EQ(oracle.top_k(10).size(), 3u);
    EXPECT_EQ(oracle.heavy_hitters(0.4), std::vector<item_id>{a});
    EXPECT_EQ(oracle.singletons(), 0u);
}

}  // namespace
