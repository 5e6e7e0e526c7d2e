#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "lss/oracle.hpp"
#include "lss/space_saving.hpp"
#include "lss/testing/reference.hpp"
#include "lss/workload.hpp"

namespace {

using lss::item_id;
using lss::make_item;
using lss::space_saving_table;

const item_id A = make_item(1), B = make_item(2), C = make_item(3), D = make_item(4);

void feed(space_saving_table& t, std::initializer_list<item_id> items) {
    for (item_id x : items) t.insert(x);
}

TEST(SpaceSavingTable, Construction) {
    space_saving_table two(2);
    EXPECT_TRUE(two.empty());
    EXPECT_EQ(two.capacity(), 2u);
    space_saving_table three(3, 1);
    EXPECT_EQ(three.fixed_cap(), 1u);
    EXPECT_EQ(three.fixed_used(), 0u);
    EXPECT_THROW(space_saving_table(1, 1), std::invalid_argument);
    EXPECT_THROW(space_saving_table(0), std::invalid_argument);
}

TEST(SpaceSavingTable, EvictsOldestMinimum) {
    space_saving_table t(2);
    feed(t, {A, B, A, C});
    EXPECT_TRUE(t.contains(A));
    EXPECT_TRUE(t.contains(C));
    EXPECT_FALSE(t.contains(B));
    EXPECT_EQ(t.query(A), 2u);
    EXPECT_EQ(t.query(C), 2u);
    EXPECT_EQ(t.query(B), 2u);
    EXPECT_EQ(t.min_count(), 2u);
}

TEST(SpaceSavingTable, FixedEntrySurvivesEviction) {
    space_saving_table t(3, 1);
    t.insert(A, true);
    feed(t, {B, C, D});
    ASSERT_NE(t.find(A), nullptr);
    EXPECT_TRUE(t.find(A)->fixed);
    EXPECT_EQ(t.query(A), 1u);
    EXPECT_EQ(t.query(C), 1u);
    EXPECT_EQ(t.query(D), 2u);
    EXPECT_FALSE(t.contains(B));
    EXPECT_EQ(t.fixed_used(), 1u);
}

TEST(SpaceSavingTable, ResidentIncrementNeverMarksFixed) {
    space_saving_table t(3, 1);
    t.insert(A);
    t.insert(A, true);
    EXPECT_FALSE(t.find(A)->fixed);
    EXPECT_EQ(t.fixed_used(), 0u);
}

TEST(SpaceSavingTable, FixedCapIsRespected) {
    space_saving_table t(4, 2);
    for (item_id x : {A, B, C, D}) t.insert(x, true);
    EXPECT_EQ(t.fixed_used(), 2u);
    EXPECT_TRUE(t.find(A)->fixed);
    EXPECT_TRUE(t.find(B)->fixed);
    EXPECT_FALSE(t.find(C)->fixed);
}

TEST(SpaceSavingTable, NonResidentQueryIgnoresFixedEntries) {
    // A holds a fixed 1 while B, evicted at count 3, must not be reported below 3.
    space_saving_table t(2, 1);
    t.insert(A, true);
    feed(t, {B, B, B, C});
    EXPECT_EQ(t.query(A), 1u);
    EXPECT_EQ(t.query(C), 4u);
    EXPECT_GE(t.query(B), 3u);
}

TEST(SpaceSavingTable, ResidentIncrementsOnly) {
    space_saving_table t(2);
    feed(t, {A, A, A});
    EXPECT_EQ(t.query(A), 3u);
    EXPECT_EQ(t.inserted(), 3u);
    EXPECT_EQ(t.total_count(), 3u);
}

TEST(SpaceSavingTable, EmptyTableQueriesZero) {
    space_saving_table t(4);
    EXPECT_EQ(t.query(A), 0u);
    EXPECT_TRUE(t.top_k(5).empty());
}

TEST(SpaceSavingTable, TopKOrdering) {
    space_saving_table t(2);
    feed(t, {A, B, A, C});
    const auto top = t.top_k(2);
    ASSERT_EQ(top.size(), 2u);
    EXPECT_EQ(top[0], std::make_pair(A, std::uint64_t{2}));
    EXPECT_EQ(top[1], std::make_pair(C, std::uint64_t{2}));

    space_saving_table u(3);
    feed(u, {A, A, A, A, A, B, C, C, C});
    const auto best = u.top_k(2);
    ASSERT_EQ(best.size(), 2u);
    EXPECT_EQ(best[0], std::make_pair(A, std::uint64_t{5}));
    EXPECT_EQ(best[1], std::make_pair(C, std::uint64_t{3}));
}

TEST(SpaceSavingTable, HeavyHitterThreshold) {
    space_saving_table t(3);
    feed(t, {A, A, A, A, A, B});
    EXPECT_EQ(t.heavy_hitters(3), std::vector<item_id>{A});
    EXPECT_EQ(t.heavy_hitters(0).size(), 2u);

    space_saving_table u(2);
    feed(u, {A, B, A, C});
    EXPECT_EQ(u.heavy_hitters(2).size(), 2u);
}

TEST(SpaceSavingTable, WeightedIncrement) {
    space_saving_table t(1);
    t.insert(A, false, 3);
    t.insert(B, false, 2);
    EXPECT_EQ(t.query(B), 5u);
    EXPECT_EQ(t.total_count(), 5u);
    EXPECT_EQ(t.inserted(), 2u);
    EXPECT_THROW(t.insert(A, false, 0), std::invalid_argument);
}

class ZipfPrefix : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ZipfPrefix, BoundsHoldAtEveryArrival) {
    const auto stream = lss::gen_zipf(1.1, 500, 5000, GetParam());
    const std::size_t k = 25;
    space_saving_table t(k);
    lss::exact_oracle oracle;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        t.insert(stream[i]);
        oracle.add(stream[i]);
        ASSERT_EQ(t.total_count(), t.inserted());
        if (t.full()) ASSERT_LE(t.min_count(), (t.inserted() + k - 1) / k);
        if (i % 97 != 0) continue;
        for (std::size_t j = 0; j < oracle.distinct(); ++j) {
            const auto f = oracle.counts()[j];
            const auto q = t.query(oracle.items()[j]);
            ASSERT_GE(q, f);
            ASSERT_LE(q, f + t.min_count());
            if (f > t.min_count()) ASSERT_TRUE(t.contains(oracle.items()[j]));
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ZipfPrefix, ::testing::Values(1, 2, 3, 4, 5));

TEST(SpaceSavingTable, ContainmentNeedsStrictInequality) {
    space_saving_table t(2);
    feed(t, {A, B, C});
    EXPECT_EQ(t.min_count(), 1u);
    EXPECT_FALSE(t.contains(A));  // f_A == minCount, yet evicted
}

TEST(SpaceSavingTable, MatchesReferenceWithFixedEntries) {
    std::mt19937_64 rng(99);
    for (int s = 0; s < 500; ++s) {
        const std::size_t k = 2 + rng() % 10;
        const std::size_t k_hh = rng() % k;
        space_saving_table fast(k, k_hh);
        lss::testing::reference_space_saving slow(k, k_hh);
        for (int i = 0; i < 150; ++i) {
            const item_id x = make_item(rng() % 30);
            const bool mark = rng() % 4 == 0;
            fast.insert(x, mark);
            slow.insert(x, mark);
        }
        ASSERT_EQ(fast.entries(), slow.entries());
        for (std::uint64_t u = 0; u < 30; ++u) ASSERT_EQ(fast.query(make_item(u)), slow.query(make_item(u)));
    }
}

TEST(SpaceSavingTable, DeterministicReplay) {
    const auto stream = lss::gen_zipf(1.0, 200, 3000, 5);
    space_saving_table a(20), b(20);
    for (item_id x : stream) {
        a.insert(x);
        b.insert(x);
    }
    EXPECT_TRUE(a == b);
}

}  // namespace
