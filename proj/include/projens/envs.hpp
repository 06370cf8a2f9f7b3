#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace projens
{
    using Observation = std::vector<double>;

    struct StepResult
    {
        Observation observation;
        double reward = 0.0;
        bool done = false;
    };

    /// N x N deep-sea grid. The agent starts top-left and descends one row per
    /// step; a per-cell random action map decides which of {0, 1} moves right.
    /// Moving right costs 0.01 / N, moving left is free, and the final move
    /// right from the bottom-right column pays +1. The stochastic variant
    /// inverts the executed move with probability 1 / N.
    class DeepSea
    {
    public:
        explicit DeepSea(std::size_t size, bool stochastic = false, std::uint64_t seed = 0);

        Observation reset();
        /// Throws std::logic_error when called on a finished episode and
        /// std::invalid_argument for actions outside {0, 1}.
        StepResult step(std::size_t action);

        std::size_t size() const { return size_; }
        std::size_t observation_size() const { return size_ * size_; }
        static constexpr std::size_t n_actions() { return 2; }
        bool stochastic() const { return stochastic_; }
        double flip_prob() const { return flip_prob_; }
        double move_cost() const { return move_cost_; }
        std::size_t row() const { return row_; }
        std::size_t col() const { return col_; }
        bool done() const { return row_ == size_; }
        /// Number of executed moves inverted by noise since construction.
        std::size_t flip_count() const { return flips_; }

        /// The action that maps to "right" at cell (row, col).
        std::size_t right_action(std::size_t row, std::size_t col) const { return action_map_[row * size_ + col]; }
        /// One-hot encoding of (row, col); all zeros once row == N.
        Observation observe() const;

    private:
        std::size_t size_;
        bool stochastic_;
        double flip_prob_;
        double move_cost_;
        std::vector<std::size_t> action_map_;
        std::mt19937_64 noise_;
        std::size_t row_ = 0;
        std::size_t col_ = 0;
        std::size_t flips_ = 0;
    };

    struct ToyPoint
    {
        double x;
        double y;
    };

    struct Interval
    {
        double lo;
        double hi;
    };

    /// The two x-clusters of the toy regression data. Between them is a gap
    /// with no training data.
    inline constexpr Interval kToyClusters[2] = {{-1.0, -0.35}, {0.35, 1.0}};

    /// x is drawn from one of the two clusters with equal probability and
    ///   y = sin(3 x) + (0.05 + 0.25 |x|) * eps,   eps ~ N(0, 1).
    std::vector<ToyPoint> toy_regression_sample(std::uint64_t seed, std::size_t n);
}
