#include "projens/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace projens
{
    namespace
    {
        constexpr double kProbFloor = 1e-12;
    }

    std::vector<double> softmax(std::span<const double> logits)
    {
        if (logits.empty()) {
            throw std::invalid_argument("softmax of an empty vector");
        }
        const double top = *std::max_element(logits.begin(), logits.end());
        std::vector<double> out(logits.size());
        double total = 0.0;
        for (std::size_t i = 0; i < logits.size(); ++i) {
            out[i] = std::exp(logits[i] - top);
            total += out[i];
        }
        for (auto &p : out) {
            p /= total;
        }
        return out;
    }

    ParticleDistribution decode_quantile(std::span<const double> locations)
    {
        return ParticleDistribution::uniform(locations);
    }

    ParticleDistribution decode_categorical(std::span<const double> logits, const CategoricalSupport &support)
    {
        if (logits.size() != support.size()) {
            throw std::invalid_argument("categorical logits do not match the support size");
        }
        return ParticleDistribution::make(support.atoms(), softmax(logits));
    }

    ParticleDistribution decode_distribution(const MixtureHead &head, const CategoricalSupport &support)
    {
        const std::size_t k = head.n_atoms();
        if (head.categorical_logits.size() != support.size()) {
            throw std::invalid_argument("categorical logits do not match the support size");
        }
        const auto probs = head.categorical_probabilities();
        std::vector<Atom> atoms;
        atoms.reserve(2 * k + probs.size());
        for (double loc : head.quantile_logits) {
            atoms.push_back({loc, 0.5 / static_cast<double>(k)});
        }
        for (std::size_t i = 0; i < probs.size(); ++i) {
            atoms.push_back({support[i], 0.5 * probs[i]});
        }
        return ParticleDistribution::from_atoms(std::move(atoms));
    }

    LossGrad qr_loss_grad(std::span<const double> locations, std::span<const Atom> target, std::span<const double> taus)
    {
        const std::size_t k = locations.size();
        if (k == 0 || taus.size() != k) {
            throw std::invalid_argument("qr loss: locations and taus must have the same nonzero length");
        }
        if (target.empty()) {
            throw std::invalid_argument("qr loss: empty target");
        }
        // With atoms sorted and prefix sums W(t) = sum_{y <= t} w, S(t) = sum_{y <= t} w y:
        //   sum_j w_j rho_tau(y_j - theta) = tau (S - theta W)_total - (S - theta W)(theta)
        std::vector<Atom> sorted(target.begin(), target.end());
        std::sort(sorted.begin(), sorted.end(), [](const Atom &a, const Atom &b) { return a.loc < b.loc; });
        std::vector<double> locs(sorted.size());
        std::vector<double> cum_w(sorted.size() + 1, 0.0);
        std::vector<double> cum_wy(sorted.size() + 1, 0.0);
        for (std::size_t j = 0; j < sorted.size(); ++j) {
            locs[j] = sorted[j].loc;
            cum_w[j + 1] = cum_w[j] + sorted[j].weight;
            cum_wy[j + 1] = cum_wy[j] + sorted[j].weight * sorted[j].loc;
        }
        const double total_w = cum_w.back();
        const double total_wy = cum_wy.back();

        LossGrad out;
        out.grad.assign(k, 0.0);
        const double inv_k = 1.0 / static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double theta = locations[i];
            const double tau = taus[i];
            // Atoms with y <= theta, i.e. u = y - theta <= 0, take the tau - 1 branch.
            const auto n_le = static_cast<std::size_t>(std::upper_bound(locs.begin(), locs.end(), theta) - locs.begin());
            const double below = cum_w[n_le];
            const double loss = tau * (total_wy - theta * total_w) - (cum_wy[n_le] - theta * below);
            out.loss += inv_k * loss;
            out.grad[i] = inv_k * (below - tau * total_w);
        }
        return out;
    }

    LossGrad qr_loss_grad(std::span<const double> locations, const ParticleDistribution &target,
                          std::span<const double> taus)
    {
        return qr_loss_grad(locations, target.atoms(), taus);
    }

    LossGrad kl_loss_grad(std::span<const double> logits, std::span<const double> target_probs)
    {
        if (logits.size() != target_probs.size()) {
            throw std::invalid_argument("kl loss: logits and target differ in length");
        }
        const double top = *std::max_element(logits.begin(), logits.end());
        double log_z = 0.0;
        for (double l : logits) {
            log_z += std::exp(l - top);
        }
        log_z = top + std::log(log_z);

        double mass = 0.0;
        for (double t : target_probs) {
            mass += t < kProbFloor ? 0.0 : t;
        }
        LossGrad out;
        out.grad.resize(logits.size());
        for (std::size_t i = 0; i < logits.size(); ++i) {
            const double log_p = logits[i] - log_z;
            const double t = target_probs[i] < kProbFloor ? 0.0 : target_probs[i];
            if (t > 0.0) {
                out.loss += t * (std::log(t) - log_p);
            }
            // softmax - t for a normalized target
            out.grad[i] = mass * std::exp(log_p) - t;
        }
        return out;
    }

    LossGrad kl_loss_grad(std::span<const double> logits, const ParticleDistribution &target,
                          const CategoricalSupport &support)
    {
        std::vector<double> probs(support.size(), 0.0);
        for (const auto &a : target.atoms()) {
            const auto idx = support.index_of(a.loc);
            if (idx == CategoricalSupport::npos) {
                throw std::invalid_argument("kl loss: target atom at " + std::to_string(a.loc) +
                                            " is not on the categorical support");
            }
            probs[idx] += a.weight;
        }
        return kl_loss_grad(logits, probs);
    }
}
