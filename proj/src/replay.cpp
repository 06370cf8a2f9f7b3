#include "projens/replay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace projens
{
    ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity)
    {
        if (capacity == 0) {
            throw std::invalid_argument("replay capacity must be positive");
        }
        items_.reserve(capacity);
    }

    void ReplayBuffer::push(Transition t)
    {
        auto finite = [](const Observation &o) {
            return std::all_of(o.begin(), o.end(), [](double v) { return std::isfinite(v); });
        };
        if (!std::isfinite(t.reward) || !finite(t.obs) || !finite(t.next_obs)) {
            throw std::invalid_argument("replay: non-finite transition");
        }
        if (items_.size() < capacity_) {
            items_.push_back(std::move(t));
        } else {
            items_[next_] = std::move(t);
        }
        next_ = (next_ + 1) % capacity_;
    }

    std::vector<const Transition *> ReplayBuffer::sample(std::size_t batch, std::mt19937_64 &rng) const
    {
        if (!can_sample(batch)) {
            throw std::logic_error("replay: cannot sample " + std::to_string(batch) + " from " +
                                   std::to_string(items_.size()) + " transitions");
        }
        std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
        std::vector<const Transition *> out(batch);
        for (auto &p : out) {
            p = &items_[pick(rng)];
        }
        return out;
    }
}
