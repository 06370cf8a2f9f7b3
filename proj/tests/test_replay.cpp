#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "projens/replay.hpp"

using namespace projens;

namespace
{
    Transition make(double r)
    {
        return Transition{{r}, 0, r, {r + 1}, false};
    }
}

TEST(Replay, RingOverwritesOldest)
{
    ReplayBuffer buf(3);
    EXPECT_THROW(ReplayBuffer(0), std::invalid_argument);
    for (int i = 0; i < 5; ++i) {
        buf.push(make(i));
    }
    EXPECT_EQ(buf.size(), 3u);
    std::vector<double> rewards;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        rewards.push_back(buf[i].reward);
    }
    std::sort(rewards.begin(), rewards.end());
    EXPECT_EQ(rewards, (std::vector<double>{2, 3, 4}));
}

TEST(Replay, RejectsNonFinite)
{
    ReplayBuffer buf(4);
    EXPECT_THROW(buf.push(make(std::nan(""))), std::invalid_argument);
    Transition t = make(1);
    t.next_obs[0] = INFINITY;
    EXPECT_THROW(buf.push(t), std::invalid_argument);
    EXPECT_EQ(buf.size(), 0u);
}

TEST(Replay, SampleNeedsEnough)
{
    ReplayBuffer buf(10);
    std::mt19937_64 rng(1);
    buf.push(make(1));
    EXPECT_FALSE(buf.can_sample(2));
    EXPECT_FALSE(buf.can_sample(0));
    EXPECT_THROW(buf.sample(2, rng), std::logic_error);
    buf.push(make(2));
    EXPECT_EQ(buf.sample(2, rng).size(), 2u);
}

TEST(Replay, SamplingIsUniformWithReplacement)
{
    ReplayBuffer buf(4);
    for (int i = 0; i < 4; ++i) {
        buf.push(make(i));
    }
    std::mt19937_64 rng(7);
    std::map<double, int> counts;
    const int n = 40000;
    for (int i = 0; i < n / 4; ++i) {
        for (const auto *t : buf.sample(4, rng)) {
            ++counts[t->reward];
        }
    }
    ASSERT_EQ(counts.size(), 4u);
    for (const auto &[r, c] : counts) {
        // 5 standard deviations of a binomial(n, 1/4)
        EXPECT_NEAR(c, n / 4.0, 5.0 * std::sqrt(n * 0.1875));
    }
    std::mt19937_64 a(3), b(3);
    EXPECT_EQ(buf.sample(4, a), buf.sample(4, b));
}
