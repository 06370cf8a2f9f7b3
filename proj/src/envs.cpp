#include "projens/envs.hpp"

#include <cmath>
#include <stdexcept>

namespace projens
{
    DeepSea::DeepSea(std::size_t size, bool stochastic, std::uint64_t seed)
        : size_(size),
          stochastic_(stochastic),
          flip_prob_(stochastic ? 1.0 / static_cast<double>(size) : 0.0),
          move_cost_(0.01 / static_cast<double>(size)),
          noise_(seed ^ 0x9e3779b97f4a7c15ULL)
    {
        if (size < 1) {
            throw std::invalid_argument("deep sea size must be positive");
        }
        std::mt19937_64 map_rng(seed);
        std::bernoulli_distribution coin(0.5);
        action_map_.resize(size * size);
        for (auto &a : action_map_) {
            a = coin(map_rng) ? 1 : 0;
        }
    }

    Observation DeepSea::observe() const
    {
        Observation obs(size_ * size_, 0.0);
        if (row_ < size_) {
            obs[row_ * size_ + col_] = 1.0;
        }
        return obs;
    }

    Observation DeepSea::reset()
    {
        row_ = 0;
        col_ = 0;
        return observe();
    }

    StepResult DeepSea::step(std::size_t action)
    {
        if (done()) {
            throw std::logic_error("deep sea: step called after the episode ended");
        }
        if (action > 1) {
            throw std::invalid_argument("deep sea: action must be 0 or 1");
        }
        bool right = action == right_action(row_, col_);
        if (stochastic_) {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            if (unit(noise_) < flip_prob_) {
                right = !right;
                ++flips_;
            }
        }

        double reward = 0.0;
        const bool last_row = row_ + 1 == size_;
        if (right) {
            if (last_row && col_ + 1 == size_) {
                reward += 1.0;
            }
            reward -= move_cost_;
            if (col_ + 1 < size_) {
                ++col_;
            }
        } else if (col_ > 0) {
            --col_;
        }
        ++row_;
        return {observe(), reward, done()};
    }

    std::vector<ToyPoint> toy_regression_sample(std::uint64_t seed, std::size_t n)
    {
        if (n < 1) {
            throw std::invalid_argument("toy regression needs at least one sample");
        }
        std::mt19937_64 rng(seed);
        std::bernoulli_distribution pick(0.5);
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<ToyPoint> data;
        data.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto &cluster = kToyClusters[pick(rng) ? 1 : 0];
            std::uniform_real_distribution<double> xs(cluster.lo, cluster.hi);
            const double x = xs(rng);
            const double y = std::sin(3.0 * x) + (0.05 + 0.25 * std::abs(x)) * noise(rng);
            data.push_back({x, y});
        }
        return data;
    }
}
