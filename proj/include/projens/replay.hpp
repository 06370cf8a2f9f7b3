#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "projens/envs.hpp"

namespace projens
{
    struct Transition
    {
        Observation obs;
        std::size_t action = 0;
        double reward = 0.0;
        Observation next_obs;
        bool done = false;
    };

    /// Fixed-capacity ring buffer; the oldest transition is overwritten once full.
    class ReplayBuffer
    {
    public:
        explicit ReplayBuffer(std::size_t capacity);

        /// Throws std::invalid_argument on non-finite reward or observations.
        void push(Transition t);
        std::size_t size() const { return items_.size(); }
        std::size_t capacity() const { return capacity_; }
        bool can_sample(std::size_t batch) const { return batch > 0 && items_.size() >= batch; }
        const Transition &operator[](std::size_t i) const { return items_[i]; }

        /// Uniform with replacement. Throws std::logic_error when fewer than
        /// `batch` transitions are stored.
        std::vector<const Transition *> sample(std::size_t batch, std::mt19937_64 &rng) const;

    private:
        std::size_t capacity_;
        std::size_t next_ = 0;
        std::vector<Transition> items_;
    };
}
