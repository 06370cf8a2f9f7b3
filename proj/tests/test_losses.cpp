#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gradcheck.hpp"
#include "oracles.hpp"
#include "projens/losses.hpp"

using namespace projens;

namespace
{
    // Direct double sum, no sorting.
    double qr_direct(const std::vector<double> &theta, const std::vector<Atom> &target)
    {
        const auto taus = midpoint_quantiles(theta.size());
        double loss = 0.0;
        for (std::size_t k = 0; k < theta.size(); ++k) {
            for (const auto &a : target) {
                const double u = a.loc - theta[k];
                loss += a.weight * u * (taus[k] - (u <= 0.0 ? 1.0 : 0.0));
            }
        }
        return loss / static_cast<double>(theta.size());
    }
}

TEST(Softmax, StableAndNormalized)
{
    const std::vector<double> big{1000.0, 1000.0, 999.0};
    const auto p = softmax(big);
    EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-15);
    EXPECT_NEAR(p[0], p[1], 1e-15);
    EXPECT_NEAR(p[2] / p[0], std::exp(-1.0), 1e-12);
}

TEST(Decode, Members)
{
    const std::vector<double> locs{0.5, -1.0, 0.5};
    const auto q = decode_quantile(locs);
    EXPECT_NEAR(wasserstein(q, ParticleDistribution::make(std::vector<double>{-1.0, 0.5}, std::vector<double>{1, 2})),
                0.0, 1e-15);
    const CategoricalSupport s(0.0, 2.0, 3);
    const std::vector<double> logits{0.0, 0.0, std::log(2.0)};
    const auto c = decode_categorical(logits, s);
    EXPECT_NEAR(c.mean(), (0.0 + 1.0 + 2.0 * 2.0) / 4.0, 1e-12);
    MixtureHead head{{0.0, 2.0, 4.0}, {0.0, 0.0, std::log(2.0)}};
    EXPECT_NEAR(decode_distribution(head, s).mean(), 0.5 * 2.0 + 0.5 * 1.25, 1e-12);
}

TEST(QrLoss, SingleAtomExample)
{
    const std::vector<double> theta{0.0};
    const std::vector<Atom> target{{1.0, 1.0}};
    const std::vector<double> tau{0.5};
    const auto r = qr_loss_grad(theta, target, tau);
    EXPECT_DOUBLE_EQ(r.loss, 0.5);
    ASSERT_EQ(r.grad.size(), 1u);
    EXPECT_DOUBLE_EQ(r.grad[0], -0.5);
}

TEST(QrLoss, KinkTakesLowerBranch)
{
    const std::vector<double> theta{1.0};
    const std::vector<Atom> target{{1.0, 1.0}};
    const std::vector<double> tau{0.25};
    const auto r = qr_loss_grad(theta, target, tau);
    EXPECT_DOUBLE_EQ(r.loss, 0.0);
    EXPECT_DOUBLE_EQ(r.grad[0], 0.75); // 1{y <= theta} - tau
}

TEST(QrLoss, MatchesDirectSum)
{
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        const auto d = oracle::random_distribution(rng, 20, -3, 3);
        std::vector<Atom> target(d.atoms().begin(), d.atoms().end());
        std::shuffle(target.begin(), target.end(), rng);
        std::uniform_real_distribution<double> loc(-3, 3);
        std::vector<double> theta(1 + t % 15);
        for (auto &x : theta) {
            x = loc(rng);
        }
        if (t % 5 == 0) {
            theta[0] = target[0].loc; // exact tie
        }
        const auto r = qr_loss_grad(theta, target, midpoint_quantiles(theta.size()));
        EXPECT_NEAR(r.loss, qr_direct(theta, target), 1e-12);
        const auto taus = midpoint_quantiles(theta.size());
        for (std::size_t k = 0; k < theta.size(); ++k) {
            double g = 0.0;
            for (const auto &a : target) {
                g += a.weight * ((a.loc <= theta[k] ? 1.0 : 0.0) - taus[k]);
            }
            EXPECT_NEAR(r.grad[k], g / static_cast<double>(theta.size()), 1e-12);
        }
        EXPECT_NEAR(qr_loss_grad(theta, d, taus).loss, r.loss, 1e-12);
    }
}

TEST(QrLoss, MinimizedAtQuantileProjection)
{
    std::mt19937_64 rng(32);
    for (int t = 0; t < 50; ++t) {
        const auto d = oracle::random_distribution(rng, 6, -1, 1);
        const std::size_t k = 1 + t % 6;
        const auto best = quantile_locations(d, k);
        const auto taus = midpoint_quantiles(k);
        const double at_best = qr_loss_grad(best, d, taus).loss;
        std::normal_distribution<double> jitter(0.0, 0.1);
        for (int j = 0; j < 20; ++j) {
            auto other = best;
            for (auto &x : other) {
                x += jitter(rng);
            }
            EXPECT_LE(at_best, qr_loss_grad(other, d, taus).loss + 1e-12);
        }
    }
}

TEST(QrLoss, FiniteDifferences)
{
    std::mt19937_64 rng(33);
    for (int t = 0; t < 100; ++t) {
        EXPECT_LE(gradcheck::qr_point(rng), 1e-4);
    }
}

TEST(KlLoss, Log2Example)
{
    // Target delta on atom 0, uniform prediction over two atoms.
    const std::vector<double> logits{0.0, 0.0};
    const std::vector<double> target{1.0, 0.0};
    const auto r = kl_loss_grad(logits, target);
    EXPECT_NEAR(r.loss, std::log(2.0), 1e-15);
    EXPECT_NEAR(r.grad[0], -0.5, 1e-15);
    EXPECT_NEAR(r.grad[1], 0.5, 1e-15);
}

TEST(KlLoss, ZeroAtMatch)
{
    const std::vector<double> logits{0.3, -1.0, 2.0};
    const auto p = softmax(logits);
    const auto r = kl_loss_grad(logits, p);
    EXPECT_NEAR(r.loss, 0.0, 1e-14);
    for (double g : r.grad) {
        EXPECT_NEAR(g, 0.0, 1e-14);
    }
}

TEST(KlLoss, FiniteDifferences)
{
    std::mt19937_64 rng(34);
    for (int t = 0; t < 100; ++t) {
        EXPECT_LE(gradcheck::kl_point(rng), 1e-4);
    }
}

TEST(KlLoss, RejectsOffSupportTarget)
{
    const CategoricalSupport s(0.0, 1.0, 3);
    const std::vector<double> logits(3, 0.0);
    EXPECT_THROW(kl_loss_grad(logits, ParticleDistribution::dirac(0.3), s), std::invalid_argument);
    const auto ok = kl_loss_grad(logits, ParticleDistribution::dirac(0.5), s);
    EXPECT_NEAR(ok.loss, std::log(3.0), 1e-12);
}
