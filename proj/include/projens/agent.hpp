#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "projens/envs.hpp"
#include "projens/losses.hpp"
#include "projens/mlp.hpp"
#include "projens/projection.hpp"
#include "projens/replay.hpp"

namespace projens
{
    /// Ensemble composition.
    ///   Diverse      quantile + categorical, joint mixture bootstrap, learned bonus
    ///   QrQr         two quantile members
    ///   C51C51       two categorical members
    ///   Independent  quantile + categorical, each bootstraps its own target;
    ///                w_avg is the action bonus, no bonus networks
    enum class Variant
    {
        Diverse,
        QrQr,
        C51C51,
        Independent,
    };

    std::string to_string(Variant v);
    /// Accepts "diverse", "qr-qr", "c51-c51", "ind". Throws std::invalid_argument otherwise.
    Variant parse_variant(const std::string &name);

    struct PeDqnConfig
    {
        std::size_t n_atoms = 51;
        std::vector<std::size_t> hidden{64};
        double value_z_min = -1.0;
        double value_z_max = 1.0;
        double learning_rate = 5e-4;
        std::size_t batch_size = 128;
        std::size_t target_update_every = 4;
        std::size_t buffer_capacity = 10000;
        double gamma = 0.99;
        double beta_init = 5.0;
        double prior_scale_quantile = 20.0;
        double prior_scale_categorical = 0.0;
        std::size_t total_episodes = 1000;
        double bonus_z_min = 0.0;
        /// Non-positive means (value_z_max - value_z_min) / (1 - gamma).
        double bonus_z_max = 0.0;
        Variant variant = Variant::Diverse;
        /// Off: no bonus networks and no action bonus; a plain mixture learner.
        bool bonus_enabled = true;

        /// Throws std::invalid_argument describing the first bad field.
        void validate() const;
        double resolved_bonus_z_max() const;
        /// Adam epsilon is 1e-3 / batch size.
        AdamConfig adam() const;
    };

    /// beta_init * max(0, 1 - episode / (total / 3)).
    double beta_schedule(const PeDqnConfig &cfg, std::size_t episode);

    /// One ensemble member: online network, its fixed prior, a delayed copy
    /// and the optimizer state.
    struct Member
    {
        ProjectionKind kind;
        Mlp net;
        PriorNet prior;
        Mlp target;
        AdamState adam;
    };

    /// Decoded outputs of every member at one observation.
    struct EnsembleOutput
    {
        /// logits[i] holds n_actions * K values; action a owns [a K, (a + 1) K).
        std::vector<std::vector<double>> logits;
        /// probs[i] is the per-action softmax for categorical members, empty otherwise.
        std::vector<std::vector<double>> probs;
        /// means[i][a] is the mean of member i at action a.
        std::vector<std::vector<double>> means;
        /// Equal-weight mixture mean per action.
        std::vector<double> mixture_means;
        /// Per-action w_avg, filled on demand.
        std::vector<double> wavg;
    };

    struct Ensemble
    {
        std::vector<Member> members;
        CategoricalSupport support;
    };

    struct TrainStats
    {
        std::vector<double> member_losses;
        std::size_t distinct_states = 0;
    };

    struct ActionChoice
    {
        std::size_t action = 0;
        /// w_avg at the chosen action.
        double wavg = 0.0;
    };

    enum class EpisodeMode
    {
        Train,
        Eval,
    };

    struct EpisodeRecord
    {
        std::uint64_t seed = 0;
        std::size_t episode = 0;
        EpisodeMode mode = EpisodeMode::Train;
        double episode_return = 0.0;
        bool regret = false;
        std::size_t steps = 0;
        double beta = 0.0;
        double wavg_mean = 0.0;
    };

    inline constexpr double kRegretThreshold = 0.5;
    std::string episode_csv_header();
    std::string to_csv_row(const EpisodeRecord &r);

    /// Single-threaded PE-DQN learner.
    class PeDqnAgent
    {
    public:
        PeDqnAgent(PeDqnConfig cfg, std::size_t obs_size, std::size_t n_actions, std::uint64_t seed);

        const PeDqnConfig &config() const { return cfg_; }
        std::size_t n_actions() const { return n_actions_; }
        std::size_t obs_size() const { return obs_size_; }
        bool has_bonus_nets() const { return !bonus_.members.empty(); }

        /// argmax_a value mean + beta * bonus, ties to the lowest action.
        ActionChoice select_action(std::span<const double> obs, double beta);
        /// Off-diagonal average pairwise w_1 between the online value members.
        double compute_wavg(std::span<const double> obs, std::size_t action);
        std::vector<double> value_means(std::span<const double> obs);
        /// Per-action bonus b(s, a): learned raw mean + w_avg, or w_avg alone
        /// for Independent, or zero when the bonus is disabled.
        std::vector<double> bonus_estimates(std::span<const double> obs);

        ParticleDistribution value_distribution(std::span<const double> obs, std::size_t action);
        ParticleDistribution member_distribution(std::span<const double> obs, std::size_t action, std::size_t member);
        /// Mixture of the raw bonus members shifted by w_avg. Throws if there are no bonus nets.
        ParticleDistribution bonus_distribution(std::span<const double> obs, std::size_t action);

        /// One Adam step per value member on the given batch.
        TrainStats train_value_step(std::span<const Transition *const> batch);
        /// One Adam step per bonus member; a'_eps uses `beta`. No-op without bonus nets.
        TrainStats train_bonus_step(std::span<const Transition *const> batch, double beta);
        /// Hard copy online -> target for all networks.
        void sync_targets();

        EpisodeRecord run_episode(DeepSea &env, EpisodeMode mode);

        std::size_t train_episodes() const { return train_episodes_; }
        std::size_t gradient_steps() const { return gradient_steps_; }
        const ReplayBuffer &replay() const { return replay_; }
        Ensemble &value() { return value_; }
        const Ensemble &value() const { return value_; }
        Ensemble &bonus() { return bonus_; }
        const Ensemble &bonus() const { return bonus_; }
        /// Drops memoized target and prior outputs; call after editing parameters directly.
        void invalidate_caches();

        /// One checkpoint file per network, `<ensemble>_<member>_{online,target}.txt`.
        void save_checkpoints(const std::filesystem::path &dir) const;

    private:
        using Memo = std::unordered_map<std::string, EnsembleOutput>;

        const std::vector<double> &prior_output(const Ensemble &e, std::size_t member, std::span<const double> obs,
                                                const std::string &key);
        EnsembleOutput evaluate(const Ensemble &e, bool target, std::span<const double> obs, const std::string &key);
        EnsembleOutput &evaluate_memo(Memo &memo, const Ensemble &e, bool target, std::span<const double> obs);
        void finish_output(const Ensemble &e, EnsembleOutput &out) const;
        double wavg_from(const Ensemble &e, const EnsembleOutput &out, std::size_t action) const;
        std::vector<Atom> member_atoms(const Ensemble &e, const EnsembleOutput &out, std::size_t member,
                                       std::size_t action) const;
        std::vector<double> bonus_from(const EnsembleOutput &value_out, const EnsembleOutput *bonus_out) const;
        TrainStats fit(Ensemble &e, std::span<const Transition *const> batch,
                       const std::vector<std::vector<std::vector<Atom>>> &targets);

        PeDqnConfig cfg_;
        std::size_t obs_size_;
        std::size_t n_actions_;
        std::uint64_t seed_;
        std::vector<double> taus_;
        Ensemble value_;
        Ensemble bonus_;
        ReplayBuffer replay_;
        std::mt19937_64 rng_;
        std::size_t train_episodes_ = 0;
        std::size_t eval_episodes_ = 0;
        std::size_t gradient_steps_ = 0;

        Memo value_target_memo_;
        Memo bonus_target_memo_;
        // Keyed by ensemble (0 value, 1 bonus) and member.
        std::vector<std::vector<std::unordered_map<std::string, std::vector<double>>>> prior_memo_;
    };

    /// Deterministic 64-bit mixer used to derive sub-seeds.
    std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);
}
