#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "projens/envs.hpp"

using namespace projens;

namespace
{
    double run(DeepSea &env, bool go_right)
    {
        env.reset();
        double ret = 0.0;
        while (!env.done()) {
            const auto right = env.right_action(env.row(), env.col());
            ret += env.step(go_right ? right : 1 - right).reward;
        }
        return ret;
    }
}

TEST(DeepSea, ObservationIsOneHot)
{
    DeepSea env(5, false, 3);
    auto obs = env.reset();
    ASSERT_EQ(obs.size(), 25u);
    EXPECT_DOUBLE_EQ(obs[0], 1.0);
    EXPECT_DOUBLE_EQ(std::accumulate(obs.begin(), obs.end(), 0.0), 1.0);
    const auto step = env.step(env.right_action(0, 0));
    EXPECT_DOUBLE_EQ(step.observation[1 * 5 + 1], 1.0);
    EXPECT_DOUBLE_EQ(std::accumulate(step.observation.begin(), step.observation.end(), 0.0), 1.0);
}

TEST(DeepSea, OptimalPathPays)
{
    for (std::size_t n : {1u, 4u, 10u}) {
        DeepSea env(n, false, 7);
        const double ret = run(env, true);
        EXPECT_NEAR(ret, 1.0 - 0.01, 1e-12) << n;
    }
}

TEST(DeepSea, LeftPathIsFree)
{
    DeepSea env(6, false, 1);
    EXPECT_DOUBLE_EQ(run(env, false), 0.0);
}

TEST(DeepSea, EpisodeLengthAndTerminal)
{
    DeepSea env(4, false, 0);
    env.reset();
    StepResult last;
    std::size_t steps = 0;
    while (!env.done()) {
        last = env.step(0);
        ++steps;
    }
    EXPECT_EQ(steps, 4u);
    EXPECT_TRUE(last.done);
    EXPECT_DOUBLE_EQ(std::accumulate(last.observation.begin(), last.observation.end(), 0.0), 0.0);
    EXPECT_THROW(env.step(0), std::logic_error);
    env.reset();
    EXPECT_THROW(env.step(2), std::invalid_argument);
}

TEST(DeepSea, LeftWallHolds)
{
    DeepSea env(3, false, 2);
    env.reset();
    env.step(1 - env.right_action(0, 0));
    EXPECT_EQ(env.col(), 0u);
    EXPECT_EQ(env.row(), 1u);
}

TEST(DeepSea, ActionMapDependsOnSeed)
{
    DeepSea a(8, false, 1), b(8, false, 1), c(8, false, 2);
    bool differs = false;
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t col = 0; col < 8; ++col) {
            EXPECT_EQ(a.right_action(r, col), b.right_action(r, col));
            differs = differs || a.right_action(r, col) != c.right_action(r, col);
        }
    }
    EXPECT_TRUE(differs);
}

TEST(DeepSea, StochasticFlipRate)
{
    const std::size_t n = 5;
    DeepSea env(n, true, 9);
    EXPECT_DOUBLE_EQ(env.flip_prob(), 1.0 / n);
    std::size_t steps = 0;
    for (int e = 0; e < 4000; ++e) {
        env.reset();
        while (!env.done()) {
            env.step(0);
            ++steps;
        }
    }
    const double rate = static_cast<double>(env.flip_count()) / static_cast<double>(steps);
    EXPECT_NEAR(rate, 0.2, 0.02);
}

TEST(DeepSea, DeterministicHasNoFlips)
{
    DeepSea env(5, false, 9);
    for (int e = 0; e < 50; ++e) {
        run(env, e % 2 == 0);
    }
    EXPECT_EQ(env.flip_count(), 0u);
}

TEST(ToyRegression, ClustersAndDeterminism)
{
    const auto a = toy_regression_sample(4, 500);
    const auto b = toy_regression_sample(4, 500);
    ASSERT_EQ(a.size(), 500u);
    std::size_t left = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].x, b[i].x);
        EXPECT_EQ(a[i].y, b[i].y);
        const bool in_left = a[i].x >= kToyClusters[0].lo && a[i].x <= kToyClusters[0].hi;
        const bool in_right = a[i].x >= kToyClusters[1].lo && a[i].x <= kToyClusters[1].hi;
        EXPECT_TRUE(in_left || in_right) << a[i].x;
        left += in_left ? 1 : 0;
    }
    EXPECT_GT(left, 200u);
    EXPECT_LT(left, 300u);
}

TEST(ToyRegression, NoiseAroundSine)
{
    const auto pts = toy_regression_sample(5, 4000);
    double sum = 0.0;
    for (const auto &p : pts) {
        sum += p.y - std::sin(3.0 * p.x);
    }
    EXPECT_NEAR(sum / 4000.0, 0.0, 0.02);
}
