#include "projens/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace projens
{
    namespace
    {
        void check_row(std::span<const double> row, const char *what)
        {
            double total = 0.0;
            for (double p : row) {
                if (!(p >= 0.0) || !std::isfinite(p)) {
                    throw std::invalid_argument(std::string(what) + ": negative or non-finite probability");
                }
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-9) {
                throw std::invalid_argument(std::string(what) + ": row does not sum to one");
            }
        }

        void check_same_shape(const ReturnTable &x, const ReturnTable &y)
        {
            if (x.n_states() != y.n_states() || x.n_actions() != y.n_actions()) {
                throw std::invalid_argument("return tables differ in shape");
            }
        }

        void check_compatible(const ReturnTable &eta, const FiniteMdp &mdp, const Policy &pi)
        {
            if (eta.n_states() != mdp.n_states() || eta.n_actions() != mdp.n_actions() ||
                pi.n_states() != mdp.n_states() || pi.n_actions() != mdp.n_actions()) {
                throw std::invalid_argument("return table, MDP and policy shapes disagree");
            }
        }

        std::vector<Atom> raw_backup_atoms(const ReturnTable &eta, const FiniteMdp &mdp, const Policy &pi,
                                           std::size_t s, std::size_t a)
        {
            const double gamma = mdp.gamma();
            const auto rewards = mdp.reward(s, a).atoms();
            const auto row = mdp.transition(s, a);

            std::size_t n = 0;
            for (std::size_t s1 = 0; s1 < mdp.n_states(); ++s1) {
                if (row[s1] == 0.0) {
                    continue;
                }
                for (std::size_t a1 = 0; a1 < mdp.n_actions(); ++a1) {
                    if (pi(s1, a1) > 0.0) {
                        n += eta.at(s1, a1).size();
                    }
                }
            }
            std::vector<Atom> atoms;
            atoms.reserve(n * rewards.size());

            for (std::size_t s1 = 0; s1 < mdp.n_states(); ++s1) {
                if (row[s1] == 0.0) {
                    continue;
                }
                for (std::size_t a1 = 0; a1 < mdp.n_actions(); ++a1) {
                    const double q = pi(s1, a1);
                    if (q == 0.0) {
                        continue;
                    }
                    const auto next = eta.at(s1, a1).atoms();
                    for (const auto &r : rewards) {
                        const double w = r.weight * row[s1] * q;
                        for (const auto &z : next) {
                            atoms.push_back({r.loc + gamma * z.loc, w * z.weight});
                        }
                    }
                }
            }
            return atoms;
        }

        bool all_categorical(std::span<const ProjectionSpec> specs)
        {
            return std::all_of(specs.begin(), specs.end(),
                               [](const ProjectionSpec &s) { return s.kind() == ProjectionKind::Categorical; });
        }

        // Categorical projection is linear in the input atoms, so it can skip
        // sorting the raw backup.
        ParticleDistribution project_raw(std::vector<Atom> raw, std::span<const ProjectionSpec> specs)
        {
            if (all_categorical(specs)) {
                std::vector<Atom> out;
                const double share = 1.0 / static_cast<double>(specs.size());
                for (const auto &spec : specs) {
                    const auto probs = categorical_probabilities(raw, spec.support());
                    for (std::size_t k = 0; k < probs.size(); ++k) {
                        out.push_back({spec.support()[k], probs[k] * share});
                    }
                }
                return ParticleDistribution::from_atoms(std::move(out));
            }
            return projection_mixture(ParticleDistribution::from_atoms(std::move(raw)), specs);
        }
    }

    FiniteMdp::FiniteMdp(std::size_t n_states,
                         std::size_t n_actions,
                         std::vector<ParticleDistribution> rewards,
                         std::vector<std::vector<double>> transitions,
                         double gamma,
                         std::vector<double> start)
        : n_states_(n_states),
          n_actions_(n_actions),
          rewards_(std::move(rewards)),
          transitions_(std::move(transitions)),
          gamma_(gamma),
          start_(std::move(start))
    {
        if (n_states == 0 || n_actions == 0) {
            throw std::invalid_argument("MDP needs at least one state and one action");
        }
        if (!(gamma >= 0.0 && gamma < 1.0)) {
            throw std::invalid_argument("discount must lie in [0, 1)");
        }
        const std::size_t cells = n_states * n_actions;
        if (rewards_.size() != cells || transitions_.size() != cells) {
            throw std::invalid_argument("MDP rewards/transitions must have n_states * n_actions entries");
        }
        for (const auto &row : transitions_) {
            if (row.size() != n_states) {
                throw std::invalid_argument("transition row has wrong length");
            }
            check_row(row, "transition");
        }
        if (start_.size() != n_states) {
            throw std::invalid_argument("start distribution has wrong length");
        }
        check_row(start_, "start distribution");

        r_min_ = std::numeric_limits<double>::infinity();
        r_max_ = -std::numeric_limits<double>::infinity();
        for (const auto &r : rewards_) {
            r_min_ = std::min(r_min_, r.min_location());
            r_max_ = std::max(r_max_, r.max_location());
        }
    }

    std::pair<double, double> FiniteMdp::return_range() const
    {
        return {r_min_ / (1.0 - gamma_), r_max_ / (1.0 - gamma_)};
    }

    Policy::Policy(std::size_t n_states, std::size_t n_actions, std::vector<double> probs)
        : n_states_(n_states), n_actions_(n_actions), probs_(std::move(probs))
    {
        if (probs_.size() != n_states * n_actions) {
            throw std::invalid_argument("policy must have n_states * n_actions entries");
        }
        for (std::size_t s = 0; s < n_states; ++s) {
            check_row(row(s), "policy");
        }
    }

    Policy Policy::uniform(std::size_t n_states, std::size_t n_actions)
    {
        return Policy(n_states, n_actions, std::vector<double>(n_states * n_actions, 1.0 / static_cast<double>(n_actions)));
    }

    Policy Policy::deterministic(std::size_t n_actions, std::span<const std::size_t> actions)
    {
        std::vector<double> probs(actions.size() * n_actions, 0.0);
        for (std::size_t s = 0; s < actions.size(); ++s) {
            if (actions[s] >= n_actions) {
                throw std::invalid_argument("policy action out of range");
            }
            probs[s * n_actions + actions[s]] = 1.0;
        }
        return Policy(actions.size(), n_actions, std::move(probs));
    }

    ReturnTable::ReturnTable(std::size_t n_states, std::size_t n_actions, const ParticleDistribution &fill)
        : n_states_(n_states), n_actions_(n_actions), cells_(n_states * n_actions, fill)
    {
    }

    ReturnTable::ReturnTable(std::size_t n_states, std::size_t n_actions, std::vector<ParticleDistribution> cells)
        : n_states_(n_states), n_actions_(n_actions), cells_(std::move(cells))
    {
        if (cells_.size() != n_states * n_actions) {
            throw std::invalid_argument("return table must have n_states * n_actions cells");
        }
    }

    std::size_t ReturnTable::max_atoms() const
    {
        std::size_t m = 0;
        for (const auto &c : cells_) {
            m = std::max(m, c.size());
        }
        return m;
    }

    BonusTable::BonusTable(std::size_t n_states, std::size_t n_actions, double fill)
        : n_states_(n_states), n_actions_(n_actions), values_(n_states * n_actions, fill)
    {
    }

    BonusTable::BonusTable(std::size_t n_states, std::size_t n_actions, std::vector<double> values)
        : n_states_(n_states), n_actions_(n_actions), values_(std::move(values))
    {
        if (values_.size() != n_states * n_actions) {
            throw std::invalid_argument("bonus table must have n_states * n_actions entries");
        }
    }

    double BonusTable::max() const
    {
        return *std::max_element(values_.begin(), values_.end());
    }

    ParticleDistribution bellman_backup_cell(const ReturnTable &eta, const FiniteMdp &mdp, const Policy &pi,
                                             std::size_t s, std::size_t a)
    {
        check_compatible(eta, mdp, pi);
        return ParticleDistribution::from_atoms(raw_backup_atoms(eta, mdp, pi, s, a));
    }

    ReturnTable bellman_backup(const ReturnTable &eta, const FiniteMdp &mdp, const Policy &pi)
    {
        check_compatible(eta, mdp, pi);
        std::vector<ParticleDistribution> cells;
        cells.reserve(eta.n_cells());
        for (std::size_t s = 0; s < mdp.n_states(); ++s) {
            for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
                cells.push_back(ParticleDistribution::from_atoms(raw_backup_atoms(eta, mdp, pi, s, a)));
            }
        }
        return ReturnTable(mdp.n_states(), mdp.n_actions(), std::move(cells));
    }

    ReturnTable projected_backup(const ReturnTable &eta, const FiniteMdp &mdp, const Policy &pi,
                                 std::span<const ProjectionSpec> specs)
    {
        check_compatible(eta, mdp, pi);
        if (specs.empty()) {
            throw std::invalid_argument("projected backup needs at least one projection");
        }
        std::vector<ParticleDistribution> cells;
        cells.reserve(eta.n_cells());
        for (std::size_t s = 0; s < mdp.n_states(); ++s) {
            for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
                cells.push_back(project_raw(raw_backup_atoms(eta, mdp, pi, s, a), specs));
            }
        }
        return ReturnTable(mdp.n_states(), mdp.n_actions(), std::move(cells));
    }

    std::vector<ReturnTable> member_backups(const ReturnTable &eta, const FiniteMdp &mdp, const Policy &pi,
                                            std::span<const ProjectionSpec> specs)
    {
        const auto backup = bellman_backup(eta, mdp, pi);
        std::vector<ReturnTable> members;
        for (const auto &spec : specs) {
            std::vector<ParticleDistribution> cells;
            cells.reserve(backup.n_cells());
            for (const auto &c : backup.cells()) {
                cells.push_back(spec.apply(c));
            }
            members.emplace_back(backup.n_states(), backup.n_actions(), std::move(cells));
        }
        return members;
    }

    Policy greedy_policy(const ReturnTable &eta)
    {
        std::vector<std::size_t> actions(eta.n_states());
        for (std::size_t s = 0; s < eta.n_states(); ++s) {
            std::size_t best = 0;
            double best_mean = eta.at(s, 0).mean();
            for (std::size_t a = 1; a < eta.n_actions(); ++a) {
                const double m = eta.at(s, a).mean();
                if (m > best_mean) {
                    best = a;
                    best_mean = m;
                }
            }
            actions[s] = best;
        }
        return Policy::deterministic(eta.n_actions(), actions);
    }

    BonusTable cellwise_wasserstein(const ReturnTable &x, const ReturnTable &y, double p)
    {
        check_same_shape(x, y);
        std::vector<double> w(x.n_cells());
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = wasserstein(x.cells()[i], y.cells()[i], p);
        }
        return BonusTable(x.n_states(), x.n_actions(), std::move(w));
    }

    double sup_wasserstein(const ReturnTable &x, const ReturnTable &y, double p)
    {
        return cellwise_wasserstein(x, y, p).max();
    }

    FixedPointResult iterate_projection_mixture(const FiniteMdp &mdp, const Policy &pi,
                                                std::span<const ProjectionSpec> specs,
                                                double tol, std::size_t max_iter)
    {
        return iterate_projection_mixture(mdp, pi, specs, tol, max_iter,
                                          ReturnTable(mdp.n_states(), mdp.n_actions(), ParticleDistribution::dirac(0.0)));
    }

    FixedPointResult iterate_projection_mixture(const FiniteMdp &mdp, const Policy &pi,
                                                std::span<const ProjectionSpec> specs,
                                                double tol, std::size_t max_iter, ReturnTable initial)
    {
        FixedPointResult result{std::move(initial), 0, {}, false};
        for (std::size_t k = 0; k < max_iter; ++k) {
            auto next = projected_backup(result.table, mdp, pi, specs);
            const double step = sup_wasserstein(next, result.table, 1.0);
            result.table = std::move(next);
            result.history.push_back(step);
            result.iterations = k + 1;
            if (step < tol) {
                result.converged = true;
                break;
            }
        }
        return result;
    }

    BonusTable ensemble_disagreement(std::span<const ReturnTable> members)
    {
        const std::size_t m = members.size();
        if (m < 2) {
            throw std::invalid_argument("ensemble disagreement needs at least two members");
        }
        for (std::size_t i = 1; i < m; ++i) {
            check_same_shape(members[0], members[i]);
        }
        BonusTable out(members[0].n_states(), members[0].n_actions());
        const double norm = 1.0 / static_cast<double>(m * (m - 1));
        for (std::size_t s = 0; s < out.n_states(); ++s) {
            for (std::size_t a = 0; a < out.n_actions(); ++a) {
                double total = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t j = i + 1; j < m; ++j) {
                        total += 2.0 * wasserstein(members[i].at(s, a), members[j].at(s, a), 1.0);
                    }
                }
                out(s, a) = total * norm;
            }
        }
        return out;
    }

    BonusTable expected_successor(const FiniteMdp &mdp, const Policy &pi, const BonusTable &v)
    {
        BonusTable out(mdp.n_states(), mdp.n_actions());
        std::vector<double> state_value(mdp.n_states(), 0.0);
        for (std::size_t s1 = 0; s1 < mdp.n_states(); ++s1) {
            for (std::size_t a1 = 0; a1 < mdp.n_actions(); ++a1) {
                state_value[s1] += pi(s1, a1) * v(s1, a1);
            }
        }
        for (std::size_t s = 0; s < mdp.n_states(); ++s) {
            for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
                const auto row = mdp.transition(s, a);
                double e = 0.0;
                for (std::size_t s1 = 0; s1 < mdp.n_states(); ++s1) {
                    e += row[s1] * state_value[s1];
                }
                out(s, a) = e;
            }
        }
        return out;
    }

    BonusTable bonus_recursion_step(const FiniteMdp &mdp, const Policy &pi, const BonusTable &one_step,
                                    double c_bar, const BonusTable &b)
    {
        const auto next = expected_successor(mdp, pi, b);
        BonusTable out(mdp.n_states(), mdp.n_actions());
        const double factor = c_bar * mdp.gamma();
        for (std::size_t s = 0; s < mdp.n_states(); ++s) {
            for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
                out(s, a) = one_step(s, a) + factor * next(s, a);
            }
        }
        return out;
    }

    BonusTable propagate_bonus(const FiniteMdp &mdp, const Policy &pi, const BonusTable &one_step,
                               double c_bar, double tol, std::size_t max_iter)
    {
        if (!(c_bar * mdp.gamma() < 1.0)) {
            throw std::invalid_argument("bonus propagation requires c_bar * gamma < 1");
        }
        for (double u : one_step.values()) {
            if (!(u >= 0.0)) {
                throw std::invalid_argument("one-step bonus must be non-negative");
            }
        }
        BonusTable b(mdp.n_states(), mdp.n_actions(), 0.0);
        for (std::size_t k = 0; k < max_iter; ++k) {
            auto next = bonus_recursion_step(mdp, pi, one_step, c_bar, b);
            double change = 0.0;
            for (std::size_t i = 0; i < next.values().size(); ++i) {
                change = std::max(change, std::abs(next.values()[i] - b.values()[i]));
            }
            b = std::move(next);
            if (change < tol) {
                break;
            }
        }
        return b;
    }

    std::vector<double> sample_simplex(std::mt19937_64 &rng, std::size_t n)
    {
        std::exponential_distribution<double> expo(1.0);
        std::vector<double> w(n);
        double total = 0.0;
        for (auto &x : w) {
            x = expo(rng);
            total += x;
        }
        for (auto &x : w) {
            x /= total;
        }
        return w;
    }

    FiniteMdp sample_random_mdp(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                                std::size_t reward_atoms, double gamma)
    {
        if (n_states == 0 || n_actions == 0 || reward_atoms == 0) {
            throw std::invalid_argument("random MDP needs positive state, action and reward-atom counts");
        }
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> atom_count(1, reward_atoms);

        std::vector<ParticleDistribution> rewards;
        std::vector<std::vector<double>> transitions;
        for (std::size_t i = 0; i < n_states * n_actions; ++i) {
            const std::size_t k = atom_count(rng);
            std::vector<double> locs(k);
            for (auto &x : locs) {
                x = unit(rng);
            }
            rewards.push_back(ParticleDistribution::make(locs, sample_simplex(rng, k)));
            transitions.push_back(sample_simplex(rng, n_states));
        }
        auto start = sample_simplex(rng, n_states);
        return FiniteMdp(n_states, n_actions, std::move(rewards), std::move(transitions), gamma, std::move(start));
    }

    Policy sample_random_policy(std::uint64_t seed, std::size_t n_states, std::size_t n_actions)
    {
        std::mt19937_64 rng(seed);
        std::vector<double> probs;
        probs.reserve(n_states * n_actions);
        for (std::size_t s = 0; s < n_states; ++s) {
            const auto row = sample_simplex(rng, n_actions);
            probs.insert(probs.end(), row.begin(), row.end());
        }
        return Policy(n_states, n_actions, std::move(probs));
    }

    ReturnTable sample_random_table(std::mt19937_64 &rng, std::size_t n_states, std::size_t n_actions,
                                    std::size_t n_atoms, double lo, double hi)
    {
        std::uniform_real_distribution<double> loc(lo, hi);
        std::vector<ParticleDistribution> cells;
        cells.reserve(n_states * n_actions);
        for (std::size_t i = 0; i < n_states * n_actions; ++i) {
            std::vector<double> locs(n_atoms);
            for (auto &x : locs) {
                x = loc(rng);
            }
            cells.push_back(ParticleDistribution::make(locs, sample_simplex(rng, n_atoms)));
        }
        return ReturnTable(n_states, n_actions, std::move(cells));
    }
}
