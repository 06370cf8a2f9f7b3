#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "projens/distribution.hpp"
#include "projens/projection.hpp"

namespace projens
{
    /// Finite MDP with finite-support reward distributions.
    class FiniteMdp
    {
    public:
        /// `transitions` is indexed [s * n_actions + a] and holds a probability
        /// row over successor states. Rows and `start` must sum to one within
        /// 1e-9 and gamma must lie in [0, 1).
        FiniteMdp(std::size_t n_states,
                  std::size_t n_actions,
                  std::vector<ParticleDistribution> rewards,
                  std::vector<std::vector<double>> transitions,
                  double gamma,
                  std::vector<double> start);

        std::size_t n_states() const { return n_states_; }
        std::size_t n_actions() const { return n_actions_; }
        double gamma() const { return gamma_; }
        const ParticleDistribution &reward(std::size_t s, std::size_t a) const { return rewards_[s * n_actions_ + a]; }
        std::span<const double> transition(std::size_t s, std::size_t a) const { return transitions_[s * n_actions_ + a]; }
        std::span<const double> start() const { return start_; }
        double r_min() const { return r_min_; }
        double r_max() const { return r_max_; }
        /// [R_min / (1 - gamma), R_max / (1 - gamma)], the interval holding every return.
        std::pair<double, double> return_range() const;

    private:
        std::size_t n_states_;
        std::size_t n_actions_;
        std::vector<ParticleDistribution> rewards_;
        std::vector<std::vector<double>> transitions_;
        double gamma_;
        std::vector<double> start_;
        double r_min_;
        double r_max_;
    };

    class Policy
    {
    public:
        /// Row-major [s * n_actions + a]; each row sums to one within 1e-9.
        Policy(std::size_t n_states, std::size_t n_actions, std::vector<double> probs);

        static Policy uniform(std::size_t n_states, std::size_t n_actions);
        static Policy deterministic(std::size_t n_actions, std::span<const std::size_t> actions);

        std::size_t n_states() const { return n_states_; }
        std::size_t n_actions() const { return n_actions_; }
        double operator()(std::size_t s, std::size_t a) const { return probs_[s * n_actions_ + a]; }
        std::span<const double> row(std::size_t s) const { return std::span(probs_).subspan(s * n_actions_, n_actions_); }

    private:
        std::size_t n_states_;
        std::size_t n_actions_;
        std::vector<double> probs_;
    };

    /// A return distribution per state-action pair.
    class ReturnTable
    {
    public:
        ReturnTable(std::size_t n_states, std::size_t n_actions, const ParticleDistribution &fill);
        ReturnTable(std::size_t n_states, std::size_t n_actions, std::vector<ParticleDistribution> cells);

        std::size_t n_states() const { return n_states_; }
        std::size_t n_actions() const { return n_actions_; }
        std::size_t n_cells() const { return cells_.size(); }
        const ParticleDistribution &at(std::size_t s, std::size_t a) const { return cells_[s * n_actions_ + a]; }
        void set(std::size_t s, std::size_t a, ParticleDistribution d) { cells_[s * n_actions_ + a] = std::move(d); }
        std::span<const ParticleDistribution> cells() const { return cells_; }
        std::size_t max_atoms() const;

    private:
        std::size_t n_states_;
        std::size_t n_actions_;
        std::vector<ParticleDistribution> cells_;
    };

    /// A non-negative real per state-action pair.
    class BonusTable
    {
    public:
        BonusTable(std::size_t n_states, std::size_t n_actions, double fill = 0.0);
        BonusTable(std::size_t n_states, std::size_t n_actions, std::vector<double> values);

        std::size_t n_states() const { return n_states_; }
        std::size_t n_actions() const { return n_actions_; }
        double operator()(std::size_t s, std::size_t a) const { return values_[s * n_actions_ + a]; }
        double &operator()(std::size_t s, std::size_t a) { return values_[s * n_actions_ + a]; }
        std::span<const double> values() const { return values_; }
        double max() const;

    private:
        std::size_t n_states_;
        std::size_t n_actions_;
        std::vector<double> values_;
    };

    /// Exact distributional Bellman backup of one cell: the mixture over
    /// (r, s', a') of (r + gamma Z(s', a')), weighted by Pr(r) P(s'|s,a) pi(a'|s').
    ParticleDistribution bellman_backup_cell(const ReturnTable &eta, const FiniteMdp &mdp, const Policy &pi,
                                             std::size_t s, std::size_t a);
    ReturnTable bellman_backup(const ReturnTable &eta, const FiniteMdp &mdp, const Policy &pi);

    /// Omega_M T^pi eta, cell by cell.
    ReturnTable projected_backup(const ReturnTable &eta, const FiniteMdp &mdp, const Policy &pi,
                                 std::span<const ProjectionSpec> specs);
    /// The individual members Pi_i T^pi eta whose uniform mixture is projected_backup.
    std::vector<ReturnTable> member_backups(const ReturnTable &eta, const FiniteMdp &mdp, const Policy &pi,
                                            std::span<const ProjectionSpec> specs);

    /// Deterministic argmax of the cell means; ties go to the lowest action.
    Policy greedy_policy(const ReturnTable &eta);

    /// w_p between matching cells.
    BonusTable cellwise_wasserstein(const ReturnTable &x, const ReturnTable &y, double p = 1.0);
    /// Supremum p-Wasserstein distance between two tables.
    double sup_wasserstein(const ReturnTable &x, const ReturnTable &y, double p = 1.0);

    struct FixedPointResult
    {
        ReturnTable table;
        std::size_t iterations = 0;
        /// sup-w_1 distance between successive iterates.
        std::vector<double> history;
        bool converged = false;
    };

    /// Iterates eta_{k+1} = Omega_M T^pi eta_k from delta_0 until successive
    /// iterates are within `tol` in sup-w_1 or `max_iter` is hit. Not
    /// converging is reported through `converged`, never thrown.
    FixedPointResult iterate_projection_mixture(const FiniteMdp &mdp, const Policy &pi,
                                                std::span<const ProjectionSpec> specs,
                                                double tol, std::size_t max_iter);
    FixedPointResult iterate_projection_mixture(const FiniteMdp &mdp, const Policy &pi,
                                                std::span<const ProjectionSpec> specs,
                                                double tol, std::size_t max_iter, ReturnTable initial);

    /// Mean pairwise w_1 between distinct members, normalized by M (M - 1).
    BonusTable ensemble_disagreement(std::span<const ReturnTable> members);

    /// E[v(S_1, A_1) | s, a] with S_1 ~ P(.|s, a), A_1 ~ pi(.|S_1), for every (s, a).
    BonusTable expected_successor(const FiniteMdp &mdp, const Policy &pi, const BonusTable &v);

    /// One application of b -> u + c_bar gamma E[b(S_1, A_1)].
    BonusTable bonus_recursion_step(const FiniteMdp &mdp, const Policy &pi, const BonusTable &one_step,
                                    double c_bar, const BonusTable &b);

    /// Fixed point of the bonus recursion from b_0 = 0. Throws
    /// std::invalid_argument if c_bar * gamma >= 1.
    BonusTable propagate_bonus(const FiniteMdp &mdp, const Policy &pi, const BonusTable &one_step,
                               double c_bar, double tol, std::size_t max_iter = 100000);

    /// Random MDP: Dirichlet(1) transition rows and start distribution,
    /// rewards with 1..reward_atoms atoms uniform on [0, 1].
    FiniteMdp sample_random_mdp(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                                std::size_t reward_atoms, double gamma);
    /// Dirichlet(1) action probabilities per state.
    Policy sample_random_policy(std::uint64_t seed, std::size_t n_states, std::size_t n_actions);
    /// Each cell gets `n_atoms` locations uniform on [lo, hi] with Dirichlet(1) weights.
    ReturnTable sample_random_table(std::mt19937_64 &rng, std::size_t n_states, std::size_t n_actions,
                                    std::size_t n_atoms, double lo, double hi);
    /// Dirichlet(1) draw of the given size.
    std::vector<double> sample_simplex(std::mt19937_64 &rng, std::size_t n);
}
