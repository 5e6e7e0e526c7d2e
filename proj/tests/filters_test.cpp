#include <gtest/gtest.h>

#include <cmath>
#include <unordered_map>

#include "lss/filters.hpp"

namespace {

using lss::bloom_filter;
using lss::counting_bloom_filter;
using lss::filter_kind;
using lss::make_item;

TEST(BloomFilter, NoFalseNegatives) {
    bloom_filter bf(4096, 4, 17);
    for (std::uint64_t i = 0; i < 300; ++i) bf.add(make_item(i * 7919));
    for (std::uint64_t i = 0; i < 300; ++i) EXPECT_TRUE(bf.contains(make_item(i * 7919)));
}

TEST(BloomFilter, FreshFilterIsEmpty) {
    bloom_filter bf(1024, 3);
    EXPECT_FALSE(bf.contains(make_item(1)));
    EXPECT_EQ(bf.memory_bits(), 1024u);
}

TEST(BloomFilter, FalsePositiveRateMatchesFormula) {
    const std::size_t m = 1024, n = 100, probes = 100'000;
    const unsigned h = 2;
    bloom_filter bf(m, h, 3);
    for (std::uint64_t i = 0; i < n; ++i) bf.add(make_item(i));
    std::size_t hits = 0;
    for (std::uint64_t i = 0; i < probes; ++i) hits += bf.contains(make_item(1'000'000 + i));
    const double expected = std::pow(1.0 - std::exp(-static_cast<double>(h * n) / m), h);
    EXPECT_DOUBLE_EQ(lss::bloom_false_positive_rate(m, h, n), expected);
    const double sigma = std::sqrt(expected * (1.0 - expected) / probes);
    EXPECT_NEAR(static_cast<double>(hits) / probes, expected, 3.0 * sigma);
}

TEST(BloomFilter, SeedChangesLayoutDeterministically) {
    bloom_filter a(512, 3, 1), b(512, 3, 1), c(512, 3, 2);
    for (std::uint64_t i = 0; i < 40; ++i) {
        a.add(make_item(i));
        b.add(make_item(i));
        c.add(make_item(i));
    }
    EXPECT_TRUE(a == b);
    EXPECT_FALSE(a == c);
}

TEST(BloomFilter, RejectsEmptyGeometry) {
    EXPECT_THROW(bloom_filter(0, 3), std::invalid_argument);
    EXPECT_THROW(bloom_filter(64, 0), std::invalid_argument);
}

TEST(CountingBloomFilter, ExactAtNegligibleLoad) {
    counting_bloom_filter cbf(1 << 16, 4);
    for (int i = 0; i < 3; ++i) cbf.add(make_item(42));
    EXPECT_EQ(cbf.get(make_item(42)), 3u);
    EXPECT_EQ(cbf.get(make_item(43)), 0u);
}

TEST(CountingBloomFilter, NeverUndercountsUnderCollisions) {
    // m=4, h=1: every pair of items shares a cell with probability 1/4
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        counting_bloom_filter cbf(4, 1, 4, seed);
        std::unordered_map<std::uint64_t, std::uint64_t> truth;
        for (std::uint64_t i = 0; i < 12; ++i) {
            const std::uint64_t x = (i * 3 + seed) % 6;
            cbf.add(make_item(x));
            ++truth[x];
        }
        for (const auto& [x, n] : truth) EXPECT_GE(cbf.get(make_item(x)), std::min<std::uint64_t>(n, 15));
    }
}

TEST(CountingBloomFilter, SaturatesAtCellWidth) {
    counting_bloom_filter cbf(1024, 2, 4);
    for (int i = 0; i < 40; ++i) cbf.add(make_item(5));
    EXPECT_EQ(cbf.get(make_item(5)), 15u);
    counting_bloom_filter narrow(1024, 2, 2);
    for (int i = 0; i < 10; ++i) narrow.add(make_item(5));
    EXPECT_EQ(narrow.get(make_item(5)), 3u);
}

TEST(CountingBloomFilter, ConservativeUpdateNeverExceedsStandard) {
    counting_bloom_filter standard(64, 3, 4, 9), conservative(64, 3, 4, 9, lss::cbf_update::conservative);
    std::unordered_map<std::uint64_t, std::uint64_t> truth;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const std::uint64_t x = (i * i) % 37;
        standard.add(make_item(x));
        conservative.add(make_item(x));
        ++truth[x];
    }
    for (const auto& [x, n] : truth) {
        EXPECT_LE(conservative.get(make_item(x)), standard.get(make_item(x)));
        EXPECT_GE(conservative.get(make_item(x)), std::min<std::uint64_t>(n, 15));
    }
}

TEST(CountingBloomFilter, MemoryIsCellsTimesWidth) {
    counting_bloom_filter cbf(256, 4, 4);
    EXPECT_EQ(cbf.memory_bits(), 1024u);
    EXPECT_THROW(counting_bloom_filter(16, 2, 9), std::invalid_argument);
}

TEST(FilterSizing, CellsFromBudget) {
    EXPECT_EQ(lss::filter_sizing(1024, filter_kind::membership, 1).cells, 1024u);
    EXPECT_EQ(lss::filter_sizing(1024, filter_kind::counting, 4).cells, 256u);
    EXPECT_EQ(lss::filter_sizing(1000, filter_kind::counting, 4).cells, 250u);
    EXPECT_EQ(lss::filter_sizing(1000, filter_kind::membership, 4).cell_width, 1u);
    EXPECT_THROW(lss::filter_sizing(0, filter_kind::membership), std::invalid_argument);
    EXPECT_THROW(lss::filter_sizing(3, filter_kind::counting, 4), std::invalid_argument);
}

TEST(FilterSizing, HashCount) {
    EXPECT_EQ(lss::optimal_hash_count(1000, std::nullopt), 4u);
    EXPECT_EQ(lss::optimal_hash_count(1000, 100), 7u);     // round(6.93)
    EXPECT_EQ(lss::optimal_hash_count(1000, 1000), 1u);    // round(0.69)
    EXPECT_EQ(lss::optimal_hash_count(100000, 10), 8u);    // clamped
    EXPECT_EQ(lss::optimal_hash_count(1000, 100000), 1u);  // clamped
    EXPECT_EQ(lss::filter_sizing(2000, filter_kind::counting, 4, 100).hashes, 3u);  // 500 cells
}

}  // namespace
