// Acceptance suite: one PASS/FAIL line per criterion, then a gtest verdict
// per criterion so ctest reports failures individually.

#include <gtest/gtest.h>

#include <iostream>
#include <map>

#include "lss/selftest.hpp"

namespace {

const std::map<std::string, lss::selftest::check_result>& results() {
    static const auto all = [] {
        std::map<std::string, lss::selftest::check_result> out;
        for (auto& r : lss::selftest::run(lss::selftest::options{})) {
            lss::selftest::print(std::cout, r);
            out.emplace(r.id, std::move(r));
        }
        std::cout.flush();
        return out;
    }();
    return all;
}

class Acceptance : public ::testing::TestWithParam<std::string> {};

TEST_P(Acceptance, Criterion) {
    const auto& r = results().at(GetParam());
    EXPECT_TRUE(r.passed) << r.name << ": measured " << r.measured << " | allowed " << r.allowed;
}

INSTANTIATE_TEST_SUITE_P(All, Acceptance, ::testing::ValuesIn(lss::selftest::check_ids()),
                         [](const auto& info) { return "c" + info.param; });

}  // namespace

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    results();
    return RUN_ALL_TESTS();
}
