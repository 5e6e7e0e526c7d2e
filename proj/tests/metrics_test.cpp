#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lss/metrics.hpp"
#include "lss/space_saving.hpp"

namespace {

using lss::item_id;
using lss::make_item;

const item_id A = make_item(1), B = make_item(2), C = make_item(3);

TEST(Rmse, HandValues) {
    const std::vector<double> truth{2, 1}, same{2, 1}, est{3, 1};
    EXPECT_EQ(lss::rmse(truth, same), 0.0);
    EXPECT_EQ(lss::rmse(truth, est), std::sqrt(0.5));
    EXPECT_EQ(lss::rmse(std::vector<double>{10}, std::vector<double>{7}), 3.0);
    EXPECT_THROW(lss::rmse(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW(lss::rmse(truth, std::vector<double>{1}), std::invalid_argument);
}

TEST(Rmse, AgainstSketch) {
    lss::space_saving_table t(2);
    lss::exact_oracle oracle;
    for (item_id x : {A, B, A, C}) {
        t.insert(x);
        oracle.add(x);
    }
    // truth A2 B1 C1, estimates A2 B2 C2
    EXPECT_DOUBLE_EQ(lss::rmse(oracle, t), std::sqrt(2.0 / 3.0));
}

TEST(Precision, HandValues) {
    const std::vector<item_id> top{A, B};
    EXPECT_EQ(lss::precision(top, top), 1.0);
    EXPECT_EQ(lss::precision(top, std::vector<item_id>{A, C}), 0.5);
    EXPECT_EQ(lss::precision({}, top), 0.0);
}

TEST(Recall, HandValues) {
    const std::vector<item_id> truth{A, B};
    EXPECT_EQ(lss::recall(truth, truth), 1.0);
    EXPECT_EQ(lss::recall(std::vector<item_id>{A}, truth), 0.5);
    EXPECT_EQ(lss::recall(std::vector<item_id>{A}, {}), 1.0);
}

TEST(Precision, EmptyTableScoresZero) {
    lss::space_saving_table t(3);
    lss::exact_oracle oracle;
    oracle.add(A);
    EXPECT_EQ(lss::precision_topk(oracle, t, 2), 0.0);
}

}  // namespace
