#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "projens/distribution.hpp"
#include "projens/projection.hpp"

namespace projens
{
    /// Numerically stable softmax (max-subtracted).
    std::vector<double> softmax(std::span<const double> logits);

    /// One (s, a) output of a quantile + categorical pair: K quantile
    /// locations and K pre-softmax categorical logits over a fixed support.
    struct MixtureHead
    {
        std::vector<double> quantile_logits;
        std::vector<double> categorical_logits;

        std::size_t n_atoms() const { return quantile_logits.size(); }
        std::vector<double> categorical_probabilities() const { return softmax(categorical_logits); }
    };

    /// Uniform atoms at the quantile locations.
    ParticleDistribution decode_quantile(std::span<const double> locations);
    /// Softmax weights on the support atoms.
    ParticleDistribution decode_categorical(std::span<const double> logits, const CategoricalSupport &support);
    /// Equal-weight mixture of both decoded members (2K atoms before merging).
    ParticleDistribution decode_distribution(const MixtureHead &head, const CategoricalSupport &support);

    struct LossGrad
    {
        double loss = 0.0;
        std::vector<double> grad;
    };

    /// Quantile regression loss of `locations` against a weighted target,
    ///   (1/K) sum_k sum_j w_j rho_{tau_k}(y_j - theta_k),
    /// with target weights summing to one. Gradient w.r.t. theta_k is
    /// (1/K) sum_j w_j (1{y_j <= theta_k} - tau_k).
    LossGrad qr_loss_grad(std::span<const double> locations, std::span<const Atom> target, std::span<const double> taus);
    LossGrad qr_loss_grad(std::span<const double> locations, const ParticleDistribution &target,
                          std::span<const double> taus);

    /// KL(t || softmax(logits)) with 0 log 0 = 0 and target entries below
    /// 1e-12 treated as zero. Gradient w.r.t. the logits is softmax - t.
    LossGrad kl_loss_grad(std::span<const double> logits, std::span<const double> target_probs);
    /// Target must sit exactly on the support; throws std::invalid_argument otherwise.
    LossGrad kl_loss_grad(std::span<const double> logits, const ParticleDistribution &target,
                          const CategoricalSupport &support);
}
