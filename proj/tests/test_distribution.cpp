#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "projens/distribution.hpp"

using namespace projens;

namespace
{
    ParticleDistribution make(std::vector<double> xs, std::vector<double> ws)
    {
        return ParticleDistribution::make(xs, ws);
    }

    void expect_atoms(const ParticleDistribution &d, const oracle::Atoms &want)
    {
        ASSERT_EQ(d.size(), want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            EXPECT_NEAR(d.atoms()[i].loc, want[i].first, 1e-12);
            EXPECT_NEAR(d.atoms()[i].weight, want[i].second, 1e-12);
        }
    }
}

TEST(Particle, SortsAndNormalizes)
{
    expect_atoms(make({1, 0}, {0.5, 0.5}), {{0, 0.5}, {1, 0.5}});
    expect_atoms(make({2, 2}, {0.3, 0.7}), {{2, 1.0}});
    expect_atoms(make({0, 1, 2}, {1, 1, 2}), {{0, 0.25}, {1, 0.25}, {2, 0.5}});
}

TEST(Particle, RejectsBadInput)
{
    EXPECT_THROW(make({}, {}), std::invalid_argument);
    EXPECT_THROW(make({0, 1}, {1}), std::invalid_argument);
    EXPECT_THROW(make({0, 1}, {1, -0.1}), std::invalid_argument);
    EXPECT_THROW(make({0, 1}, {0, 0}), std::invalid_argument);
    EXPECT_THROW(make({std::nan("")}, {1}), std::invalid_argument);
    EXPECT_THROW(Quantile(1.5), std::invalid_argument);
    EXPECT_THROW(Quantile(-0.1), std::invalid_argument);
}

TEST(Particle, ZeroWeightAtomsDropped)
{
    expect_atoms(make({0, 1, 2}, {1, 0, 1}), {{0, 0.5}, {2, 0.5}});
}

TEST(Particle, Cdf)
{
    EXPECT_DOUBLE_EQ(ParticleDistribution::dirac(0).cdf(0), 1.0);
    EXPECT_DOUBLE_EQ(make({0, 1}, {1, 1}).cdf(0.5), 0.5);
    EXPECT_DOUBLE_EQ(make({0, 1, 2}, {1, 1, 2}).cdf(1), 0.5);
    EXPECT_DOUBLE_EQ(make({0, 1, 2}, {1, 1, 2}).cdf(-1), 0.0);
}

TEST(Particle, InverseCdf)
{
    EXPECT_DOUBLE_EQ(ParticleDistribution::dirac(3.5).inverse_cdf(Quantile(0.3)), 3.5);
    const std::vector<double> xs{0, 1, 2, 3};
    const auto u = ParticleDistribution::uniform(xs);
    EXPECT_DOUBLE_EQ(u.inverse_cdf(Quantile(0.25)), 0.0);
    EXPECT_DOUBLE_EQ(u.inverse_cdf(Quantile(0.75)), 2.0);
    EXPECT_DOUBLE_EQ(u.inverse_cdf(Quantile(0.0)), 0.0);
    EXPECT_DOUBLE_EQ(u.inverse_cdf(Quantile(1.0)), 3.0);
}

TEST(Particle, InverseCdfMatchesScan)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const auto d = oracle::random_distribution(rng, 6, -3, 3);
        const double u = unit(rng);
        EXPECT_DOUBLE_EQ(d.inverse_cdf(Quantile(u)), oracle::inverse_cdf(oracle::atoms_of(d), u));
    }
}

TEST(Particle, Mean)
{
    EXPECT_DOUBLE_EQ(make({0, 2}, {1, 1}).mean(), 1.0);
    EXPECT_DOUBLE_EQ(ParticleDistribution::dirac(3).mean(), 3.0);
    EXPECT_DOUBLE_EQ(make({0, 4}, {1, 3}).mean(), 3.0);
}

TEST(Wasserstein, Examples)
{
    EXPECT_DOUBLE_EQ(wasserstein(ParticleDistribution::dirac(-1), ParticleDistribution::dirac(2.5)), 3.5);
    EXPECT_DOUBLE_EQ(wasserstein(make({0, 1}, {1, 1}), ParticleDistribution::dirac(0)), 0.5);
    const auto d = make({0, 1, 5}, {1, 2, 3});
    for (double p : {1.0, 2.0, 3.5, std::numeric_limits<double>::infinity()}) {
        EXPECT_EQ(wasserstein(d, d, p), 0.0);
    }
    EXPECT_THROW(wasserstein(d, d, 0.5), std::invalid_argument);
}

TEST(Wasserstein, MatchesOracles)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        const auto a = oracle::random_distribution(rng, 6, -2, 2);
        const auto b = oracle::random_distribution(rng, 6, -1, 3);
        for (double p : {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
            EXPECT_NEAR(wasserstein(a, b, p), oracle::wasserstein(oracle::atoms_of(a), oracle::atoms_of(b), p), 1e-10);
        }
        EXPECT_NEAR(wasserstein(a, b, 1.0), cdf_area_distance(a, b), 1e-12);
    }
}

TEST(Wasserstein, SortedMatchingForEqualWeights)
{
    std::mt19937_64 rng(12);
    std::normal_distribution<double> normal;
    for (int t = 0; t < 100; ++t) {
        std::vector<double> x(7), y(7);
        for (auto &v : x) {
            v = normal(rng);
        }
        for (auto &v : y) {
            v = normal(rng) + 0.5;
        }
        EXPECT_NEAR(wasserstein(ParticleDistribution::uniform(x), ParticleDistribution::uniform(y), 2.0),
                    oracle::matched_wasserstein(x, y, 2.0), 1e-10);
    }
}

TEST(Mixture, Examples)
{
    const std::vector<ParticleDistribution> diracs{ParticleDistribution::dirac(0), ParticleDistribution::dirac(1)};
    expect_atoms(uniform_mixture(diracs), {{0, 0.5}, {1, 0.5}});
    const auto d = make({0, 1, 5}, {1, 2, 3});
    const std::vector<ParticleDistribution> same{d, d};
    expect_atoms(uniform_mixture(same), oracle::atoms_of(d));
    const std::vector<ParticleDistribution> parts{make({0, 2}, {1, 1}), ParticleDistribution::dirac(1)};
    expect_atoms(uniform_mixture(parts), {{0, 0.25}, {1, 0.5}, {2, 0.25}});
    const std::vector<double> bad{0.5};
    EXPECT_THROW(mixture(parts, bad), std::invalid_argument);
}

TEST(Pushforward, Examples)
{
    expect_atoms(pushforward_affine(make({0, 2}, {1, 1}), 1.0, 0.5), {{1, 0.5}, {2, 0.5}});
    const auto d = make({0, 1, 5}, {1, 2, 3});
    expect_atoms(pushforward_affine(d, 0.0, 1.0), oracle::atoms_of(d));
    expect_atoms(pushforward_affine(ParticleDistribution::dirac(2), -1.0, 0.9), {{0.8, 1.0}});
}

TEST(Pushforward, NegativeScaleKeepsOrder)
{
    const auto d = pushforward_affine(make({0, 1}, {1, 3}), 0.0, -2.0);
    expect_atoms(d, {{-2, 0.75}, {0, 0.25}});
}

TEST(Convolve, MatchesDoubleLoop)
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const auto a = oracle::random_distribution(rng, 3, -1, 1);
        const auto b = oracle::random_distribution(rng, 3, -1, 1);
        const auto c = convolve(a, b);
        const auto want = oracle::convolve(oracle::atoms_of(a), oracle::atoms_of(b));
        EXPECT_NEAR(c.mean(), oracle::mean(want), 1e-12);
        EXPECT_NEAR(wasserstein(c, ParticleDistribution::from_atoms([&] {
                                    std::vector<Atom> v;
                                    for (auto [x, w] : want) {
                                        v.push_back({x, w});
                                    }
                                    return v;
                                }())),
                    0.0, 1e-12);
    }
}

TEST(Csv, RoundTrip)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const auto d = oracle::random_distribution(rng, 8, -10, 10);
        const auto back = from_csv_row(to_csv_row(d));
        ASSERT_EQ(back.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            EXPECT_EQ(back.atoms()[i].loc, d.atoms()[i].loc);
            EXPECT_EQ(back.atoms()[i].weight, d.atoms()[i].weight);
        }
    }
    EXPECT_THROW(from_csv_row("1,0.5,2"), std::invalid_argument);
}
