#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "projens/projection.hpp"

using namespace projens;

namespace
{
    ParticleDistribution make(std::vector<double> xs, std::vector<double> ws)
    {
        return ParticleDistribution::make(xs, ws);
    }

    ParticleDistribution from_pairs(const oracle::Atoms &atoms)
    {
        std::vector<Atom> v;
        for (auto [x, w] : atoms) {
            v.push_back({x, w});
        }
        return ParticleDistribution::from_atoms(v);
    }

    const CategoricalSupport k012(0.0, 2.0, 3);
}

TEST(Support, Grid)
{
    const CategoricalSupport s(-1.0, 1.0, 51);
    EXPECT_EQ(s.size(), 51u);
    EXPECT_DOUBLE_EQ(s[0], -1.0);
    EXPECT_DOUBLE_EQ(s[50], 1.0);
    EXPECT_NEAR(s.spacing(), 0.04, 1e-15);
    EXPECT_EQ(s.index_of(s[17]), 17u);
    EXPECT_EQ(s.index_of(0.01), CategoricalSupport::npos);
    EXPECT_THROW(CategoricalSupport(0.0, 1.0, 1), std::invalid_argument);
    EXPECT_THROW(CategoricalSupport(1.0, 1.0, 5), std::invalid_argument);
}

TEST(Categorical, Examples)
{
    const auto a = project_categorical(ParticleDistribution::dirac(0.25), k012);
    EXPECT_NEAR(wasserstein(a, make({0, 1}, {0.75, 0.25})), 0.0, 1e-15);
    const auto b = project_categorical(ParticleDistribution::dirac(-3), k012);
    EXPECT_NEAR(wasserstein(b, ParticleDistribution::dirac(0)), 0.0, 1e-15);
    const auto c = project_categorical(make({0.5, 1.5}, {1, 1}), k012);
    EXPECT_NEAR(wasserstein(c, make({0, 1, 2}, {0.25, 0.5, 0.25})), 0.0, 1e-15);
    const auto d = project_categorical(ParticleDistribution::dirac(7), k012);
    EXPECT_NEAR(wasserstein(d, ParticleDistribution::dirac(2)), 0.0, 1e-15);
}

TEST(Categorical, MatchesOracleAndPreservesMean)
{
    std::mt19937_64 rng(21);
    const CategoricalSupport s(-2.0, 3.0, 11);
    for (int t = 0; t < 300; ++t) {
        const auto d = oracle::random_distribution(rng, 6, -2.0, 3.0);
        const auto probs = categorical_probabilities(d, s);
        const auto want = oracle::categorical(oracle::atoms_of(d), -2.0, 3.0, 11);
        for (std::size_t k = 0; k < 11; ++k) {
            EXPECT_NEAR(probs[k], want[k], 1e-12);
        }
        EXPECT_NEAR(project_categorical(d, s).mean(), d.mean(), 1e-12);
    }
}

TEST(Categorical, ClampsOutOfRange)
{
    std::mt19937_64 rng(22);
    const CategoricalSupport s(-1.0, 1.0, 5);
    for (int t = 0; t < 100; ++t) {
        const auto d = oracle::random_distribution(rng, 5, -4.0, 4.0);
        const auto probs = categorical_probabilities(d, s);
        const auto want = oracle::categorical(oracle::atoms_of(d), -1.0, 1.0, 5);
        for (std::size_t k = 0; k < 5; ++k) {
            EXPECT_NEAR(probs[k], want[k], 1e-12);
        }
    }
}

TEST(Quantile, Examples)
{
    const std::vector<double> xs{0, 1, 2, 3};
    const auto a = project_quantile(ParticleDistribution::uniform(xs), 2);
    EXPECT_NEAR(wasserstein(a, make({0, 2}, {1, 1})), 0.0, 1e-15);
    const auto b = project_quantile(ParticleDistribution::dirac(1.5), 7);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_DOUBLE_EQ(b.atoms()[0].loc, 1.5);
    const auto c = project_quantile(make({0, 8}, {3, 1}), 1);
    EXPECT_NEAR(wasserstein(c, ParticleDistribution::dirac(0)), 0.0, 1e-15);
    EXPECT_THROW(project_quantile(c, 0), std::invalid_argument);
}

TEST(Quantile, MidpointLevels)
{
    const auto taus = midpoint_quantiles(4);
    ASSERT_EQ(taus.size(), 4u);
    EXPECT_DOUBLE_EQ(taus[0], 0.125);
    EXPECT_DOUBLE_EQ(taus[3], 0.875);
}

TEST(Quantile, LocationsMatchScan)
{
    std::mt19937_64 rng(23);
    for (int t = 0; t < 200; ++t) {
        const auto d = oracle::random_distribution(rng, 6, -1.0, 1.0);
        const std::size_t k = 1 + t % 9;
        const auto locs = quantile_locations(d, k);
        for (std::size_t i = 0; i < k; ++i) {
            const double tau = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(k));
            EXPECT_DOUBLE_EQ(locs[i], oracle::inverse_cdf(oracle::atoms_of(d), tau));
        }
    }
}

TEST(QuantileLoss, Examples)
{
    EXPECT_DOUBLE_EQ(quantile_loss(0.0, Quantile(0.5), ParticleDistribution::dirac(1)), 0.5);
    EXPECT_DOUBLE_EQ(quantile_loss(1.0, Quantile(0.5), ParticleDistribution::dirac(1)), 0.0);
    // The indicator includes zero residuals.
    EXPECT_DOUBLE_EQ(quantile_check(0.0, 0.3), 0.0);
    EXPECT_DOUBLE_EQ(quantile_check(-2.0, 0.3), 1.4);
    EXPECT_DOUBLE_EQ(quantile_check(2.0, 0.3), 0.6);
}

TEST(QuantileLoss, QuantileIsMinimizer)
{
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> unit(0.02, 0.98);
    for (int t = 0; t < 100; ++t) {
        const auto d = oracle::random_distribution(rng, 5, -1.0, 1.0);
        const Quantile tau(unit(rng));
        const double best = quantile_loss(d.inverse_cdf(tau), tau, d);
        for (double theta = -1.2; theta <= 1.2; theta += 0.01) {
            EXPECT_LE(best, quantile_loss(theta, tau, d) + 1e-12);
        }
    }
}

TEST(ProjectionMixture, Examples)
{
    const std::vector<ProjectionSpec> q{ProjectionSpec::quantile(3)};
    const auto d = make({0, 1, 4}, {1, 2, 1});
    EXPECT_NEAR(wasserstein(projection_mixture(d, q), project_quantile(d, 3)), 0.0, 1e-15);

    const std::vector<ProjectionSpec> both{ProjectionSpec::categorical(k012), ProjectionSpec::quantile(1)};
    const auto m = projection_mixture(ParticleDistribution::dirac(0.25), both);
    const auto want = make({0, 0.25, 1}, {0.375, 0.5, 0.125});
    EXPECT_NEAR(wasserstein(m, want), 0.0, 1e-15);

    // Representable in both families: unchanged.
    const auto r = make({0, 2}, {1, 1});
    const std::vector<ProjectionSpec> both2{ProjectionSpec::categorical(k012), ProjectionSpec::quantile(2)};
    EXPECT_NEAR(wasserstein(projection_mixture(r, both2), r), 0.0, 1e-15);

    EXPECT_THROW(projection_mixture(r, std::span<const ProjectionSpec>{}), std::invalid_argument);
}

TEST(Projection, Idempotent)
{
    std::mt19937_64 rng(25);
    const CategoricalSupport s(-1.0, 1.0, 9);
    for (int t = 0; t < 200; ++t) {
        const auto d = oracle::random_distribution(rng, 6, -1.5, 1.5);
        const auto c = project_categorical(d, s);
        EXPECT_NEAR(wasserstein(project_categorical(c, s), c), 0.0, 1e-12);
        const auto q = project_quantile(d, 5);
        EXPECT_NEAR(wasserstein(project_quantile(q, 5), q), 0.0, 1e-12);
    }
}

TEST(Projection, ErrorBoundsAndModuli)
{
    const auto c = ProjectionSpec::categorical(CategoricalSupport(0.0, 1.0, 11));
    EXPECT_NEAR(c.error_bound(0.0, 1.0), 0.1, 1e-15);
    const auto q = ProjectionSpec::quantile(4);
    EXPECT_NEAR(q.error_bound(-1.0, 1.0), 0.5, 1e-15);
    const std::vector<ProjectionSpec> specs{c, q};
    EXPECT_DOUBLE_EQ(mean_modulus(specs), 1.0);
    EXPECT_NEAR(mean_error_bound(specs, 0.0, 1.0), 0.5 * (0.1 + 0.25), 1e-15);
    EXPECT_THROW(ProjectionSpec::quantile(0), std::invalid_argument);
    EXPECT_THROW(ProjectionSpec::quantile(3, 0.0), std::invalid_argument);
    EXPECT_THROW(q.support(), std::logic_error);
}

TEST(Projection, MixtureWeightsNormalized)
{
    std::mt19937_64 rng(26);
    const std::vector<ProjectionSpec> specs{ProjectionSpec::categorical(CategoricalSupport(-1, 1, 7)),
                                            ProjectionSpec::quantile(5)};
    for (int t = 0; t < 100; ++t) {
        const auto m = projection_mixture(oracle::random_distribution(rng, 6, -2, 2), specs);
        double total = 0.0;
        for (const auto &a : m.atoms()) {
            total += a.weight;
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}
