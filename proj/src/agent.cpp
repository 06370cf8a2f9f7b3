#include "projens/agent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace projens
{
    namespace
    {
        std::string obs_key(std::span<const double> obs)
        {
            return std::string(reinterpret_cast<const char *>(obs.data()), obs.size_bytes());
        }

        std::size_t argmax(std::span<const double> v)
        {
            std::size_t best = 0;
            for (std::size_t i = 1; i < v.size(); ++i) {
                if (v[i] > v[best]) {
                    best = i;
                }
            }
            return best;
        }

        std::vector<std::size_t> widths_for(const PeDqnConfig &cfg, std::size_t obs_size, std::size_t n_actions)
        {
            std::vector<std::size_t> w{obs_size};
            w.insert(w.end(), cfg.hidden.begin(), cfg.hidden.end());
            w.push_back(n_actions * cfg.n_atoms);
            return w;
        }

        std::vector<ProjectionKind> member_kinds(Variant v)
        {
            switch (v) {
            case Variant::QrQr:
                return {ProjectionKind::Quantile, ProjectionKind::Quantile};
            case Variant::C51C51:
                return {ProjectionKind::Categorical, ProjectionKind::Categorical};
            case Variant::Diverse:
            case Variant::Independent:
                break;
            }
            return {ProjectionKind::Quantile, ProjectionKind::Categorical};
        }

        Ensemble build_ensemble(const PeDqnConfig &cfg, CategoricalSupport support, std::size_t obs_size,
                                std::size_t n_actions, std::uint64_t seed, std::uint64_t stream)
        {
            Ensemble e{{}, std::move(support)};
            const auto widths = widths_for(cfg, obs_size, n_actions);
            const auto kinds = member_kinds(cfg.variant);
            for (std::size_t i = 0; i < kinds.size(); ++i) {
                auto net = init_mlp(mix_seed(seed, stream + 2 * i), widths);
                auto prior_net = init_mlp(mix_seed(seed, stream + 2 * i + 1), widths);
                const double scale = kinds[i] == ProjectionKind::Quantile ? cfg.prior_scale_quantile
                                                                          : cfg.prior_scale_categorical;
                Mlp target = net;
                const std::size_t n_params = net.n_params();
                e.members.push_back(Member{kinds[i], std::move(net), PriorNet(std::move(prior_net), scale),
                                           std::move(target), AdamState(n_params, cfg.adam())});
            }
            return e;
        }

        void check_finite(double loss, const char *ensemble, std::size_t member, std::size_t sample,
                          const Transition &t)
        {
            if (std::isfinite(loss)) {
                return;
            }
            char buf[256];
            std::snprintf(buf, sizeof(buf),
                          "non-finite %s loss (member %zu, batch index %zu, action %zu, reward %.17g, done %d)",
                          ensemble, member, sample, t.action, t.reward, t.done ? 1 : 0);
            throw std::runtime_error(buf);
        }
    }

    std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
    {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::string to_string(Variant v)
    {
        switch (v) {
        case Variant::Diverse:
            return "diverse";
        case Variant::QrQr:
            return "qr-qr";
        case Variant::C51C51:
            return "c51-c51";
        case Variant::Independent:
            return "ind";
        }
        return "unknown";
    }

    Variant parse_variant(const std::string &name)
    {
        for (auto v : {Variant::Diverse, Variant::QrQr, Variant::C51C51, Variant::Independent}) {
            if (name == to_string(v)) {
                return v;
            }
        }
        throw std::invalid_argument("unknown variant '" + name + "' (expected diverse, qr-qr, c51-c51 or ind)");
    }

    void PeDqnConfig::validate() const
    {
        auto fail = [](const std::string &what) { throw std::invalid_argument("agent config: " + what); };
        if (n_atoms < 2) {
            fail("n_atoms must be at least 2");
        }
        if (std::any_of(hidden.begin(), hidden.end(), [](std::size_t h) { return h == 0; })) {
            fail("hidden widths must be positive");
        }
        if (!(value_z_max > value_z_min)) {
            fail("value support needs z_max > z_min");
        }
        if (!(learning_rate > 0.0)) {
            fail("learning_rate must be positive");
        }
        if (batch_size == 0 || target_update_every == 0 || buffer_capacity == 0) {
            fail("batch_size, target_update_every and buffer_capacity must be positive");
        }
        if (batch_size > buffer_capacity) {
            fail("batch_size exceeds buffer_capacity");
        }
        if (!(gamma >= 0.0 && gamma < 1.0)) {
            fail("gamma must lie in [0, 1)");
        }
        if (!(beta_init >= 0.0) || !(prior_scale_quantile >= 0.0) || !(prior_scale_categorical >= 0.0)) {
            fail("beta_init and prior scales must be non-negative");
        }
        if (!(resolved_bonus_z_max() > bonus_z_min)) {
            fail("bonus support needs z_max > z_min");
        }
    }

    double PeDqnConfig::resolved_bonus_z_max() const
    {
        if (bonus_z_max > 0.0) {
            return bonus_z_max;
        }
        return (value_z_max - value_z_min) / (1.0 - gamma);
    }

    AdamConfig PeDqnConfig::adam() const
    {
        AdamConfig a;
        a.learning_rate = learning_rate;
        a.epsilon = 1e-3 / static_cast<double>(batch_size);
        return a;
    }

    double beta_schedule(const PeDqnConfig &cfg, std::size_t episode)
    {
        const double horizon = static_cast<double>(cfg.total_episodes) / 3.0;
        if (horizon <= 0.0) {
            return 0.0;
        }
        return cfg.beta_init * std::max(0.0, 1.0 - static_cast<double>(episode) / horizon);
    }

    std::string episode_csv_header()
    {
        return "seed,episode,mode,return,regret_flag,steps,beta,wavg_mean";
    }

    std::string to_csv_row(const EpisodeRecord &r)
    {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%llu,%zu,%s,%.17g,%d,%zu,%.17g,%.17g",
                      static_cast<unsigned long long>(r.seed), r.episode,
                      r.mode == EpisodeMode::Train ? "train" : "eval", r.episode_return, r.regret ? 1 : 0, r.steps,
                      r.beta, r.wavg_mean);
        return buf;
    }

    PeDqnAgent::PeDqnAgent(PeDqnConfig cfg, std::size_t obs_size, std::size_t n_actions, std::uint64_t seed)
        : cfg_((cfg.validate(), std::move(cfg))),
          obs_size_(obs_size),
          n_actions_(n_actions),
          seed_(seed),
          taus_(midpoint_quantiles(cfg_.n_atoms)),
          value_(build_ensemble(cfg_, CategoricalSupport(cfg_.value_z_min, cfg_.value_z_max, cfg_.n_atoms), obs_size,
                                n_actions, seed, 100)),
          bonus_{{}, CategoricalSupport(cfg_.bonus_z_min, cfg_.resolved_bonus_z_max(), cfg_.n_atoms)},
          replay_(cfg_.buffer_capacity),
          rng_(mix_seed(seed, 1))
    {
        if (obs_size == 0 || n_actions == 0) {
            throw std::invalid_argument("agent needs a non-empty observation and action space");
        }
        if (cfg_.bonus_enabled && cfg_.variant != Variant::Independent) {
            bonus_ = build_ensemble(cfg_, bonus_.support, obs_size, n_actions, seed, 200);
        }
        prior_memo_.resize(2);
        prior_memo_[0].resize(value_.members.size());
        prior_memo_[1].resize(bonus_.members.size());
    }

    const std::vector<double> &PeDqnAgent::prior_output(const Ensemble &e, std::size_t member,
                                                        std::span<const double> obs, const std::string &key)
    {
        auto &memo = prior_memo_[&e == &value_ ? 0 : 1][member];
        auto it = memo.find(key);
        if (it == memo.end()) {
            it = memo.emplace(key, e.members[member].prior.net().forward(obs)).first;
        }
        return it->second;
    }

    void PeDqnAgent::finish_output(const Ensemble &e, EnsembleOutput &out) const
    {
        const std::size_t k = cfg_.n_atoms;
        const std::size_t m = e.members.size();
        out.probs.assign(m, {});
        out.means.assign(m, std::vector<double>(n_actions_, 0.0));
        out.mixture_means.assign(n_actions_, 0.0);
        const auto z = e.support.atoms();
        for (std::size_t i = 0; i < m; ++i) {
            const auto &logits = out.logits[i];
            if (e.members[i].kind == ProjectionKind::Categorical) {
                out.probs[i].resize(logits.size());
            }
            for (std::size_t a = 0; a < n_actions_; ++a) {
                const std::span<const double> slice(logits.data() + a * k, k);
                double mean = 0.0;
                if (e.members[i].kind == ProjectionKind::Quantile) {
                    for (double x : slice) {
                        mean += x;
                    }
                    mean /= static_cast<double>(k);
                } else {
                    const auto p = softmax(slice);
                    std::copy(p.begin(), p.end(), out.probs[i].begin() + static_cast<std::ptrdiff_t>(a * k));
                    for (std::size_t j = 0; j < k; ++j) {
                        mean += p[j] * z[j];
                    }
                }
                out.means[i][a] = mean;
                out.mixture_means[a] += mean / static_cast<double>(m);
            }
        }
    }

    EnsembleOutput PeDqnAgent::evaluate(const Ensemble &e, bool target, std::span<const double> obs,
                                        const std::string &key)
    {
        EnsembleOutput out;
        out.logits.resize(e.members.size());
        for (std::size_t i = 0; i < e.members.size(); ++i) {
            const auto &mem = e.members[i];
            out.logits[i] = (target ? mem.target : mem.net).forward(obs);
            if (mem.prior.scale() != 0.0) {
                const auto &p = prior_output(e, i, obs, key);
                for (std::size_t j = 0; j < p.size(); ++j) {
                    out.logits[i][j] += mem.prior.scale() * p[j];
                }
            }
        }
        finish_output(e, out);
        return out;
    }

    EnsembleOutput &PeDqnAgent::evaluate_memo(Memo &memo, const Ensemble &e, bool target,
                                              std::span<const double> obs)
    {
        auto key = obs_key(obs);
        auto it = memo.find(key);
        if (it == memo.end()) {
            auto out = evaluate(e, target, obs, key);
            it = memo.emplace(std::move(key), std::move(out)).first;
        }
        return it->second;
    }

    std::vector<Atom> PeDqnAgent::member_atoms(const Ensemble &e, const EnsembleOutput &out, std::size_t member,
                                               std::size_t action) const
    {
        const std::size_t k = cfg_.n_atoms;
        std::vector<Atom> atoms(k);
        if (e.members[member].kind == ProjectionKind::Quantile) {
            const double w = 1.0 / static_cast<double>(k);
            for (std::size_t j = 0; j < k; ++j) {
                atoms[j] = {out.logits[member][action * k + j], w};
            }
        } else {
            for (std::size_t j = 0; j < k; ++j) {
                atoms[j] = {e.support[j], out.probs[member][action * k + j]};
            }
        }
        return atoms;
    }

    double PeDqnAgent::wavg_from(const Ensemble &e, const EnsembleOutput &out, std::size_t action) const
    {
        const std::size_t m = e.members.size();
        if (m < 2) {
            return 0.0;
        }
        std::vector<ParticleDistribution> dists;
        dists.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            dists.push_back(ParticleDistribution::from_atoms(member_atoms(e, out, i, action)));
        }
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                total += 2.0 * wasserstein(dists[i], dists[j], 1.0);
            }
        }
        return total / static_cast<double>(m * (m - 1));
    }

    std::vector<double> PeDqnAgent::bonus_from(const EnsembleOutput &value_out, const EnsembleOutput *bonus_out) const
    {
        std::vector<double> b(n_actions_, 0.0);
        const bool use_wavg = cfg_.variant == Variant::Independent || bonus_out != nullptr;
        if (!use_wavg) {
            return b;
        }
        for (std::size_t a = 0; a < n_actions_; ++a) {
            b[a] = wavg_from(value_, value_out, a);
            if (bonus_out != nullptr) {
                b[a] += bonus_out->mixture_means[a];
            }
        }
        return b;
    }

    ActionChoice PeDqnAgent::select_action(std::span<const double> obs, double beta)
    {
        if (obs.size() != obs_size_) {
            throw std::invalid_argument("select_action: observation has the wrong length");
        }
        const auto key = obs_key(obs);
        const auto value_out = evaluate(value_, false, obs, key);
        ActionChoice choice;
        if (beta == 0.0) {
            choice.action = argmax(value_out.mixture_means);
            choice.wavg = wavg_from(value_, value_out, choice.action);
            return choice;
        }
        std::vector<double> bonus;
        if (has_bonus_nets()) {
            const auto bonus_out = evaluate(bonus_, false, obs, key);
            bonus = bonus_from(value_out, &bonus_out);
        } else {
            bonus = bonus_from(value_out, nullptr);
        }
        std::vector<double> score(n_actions_);
        for (std::size_t a = 0; a < n_actions_; ++a) {
            score[a] = value_out.mixture_means[a] + beta * bonus[a];
        }
        choice.action = argmax(score);
        choice.wavg = wavg_from(value_, value_out, choice.action);
        return choice;
    }

    double PeDqnAgent::compute_wavg(std::span<const double> obs, std::size_t action)
    {
        if (action >= n_actions_) {
            throw std::invalid_argument("compute_wavg: action out of range");
        }
        const auto out = evaluate(value_, false, obs, obs_key(obs));
        return wavg_from(value_, out, action);
    }

    std::vector<double> PeDqnAgent::value_means(std::span<const double> obs)
    {
        return evaluate(value_, false, obs, obs_key(obs)).mixture_means;
    }

    std::vector<double> PeDqnAgent::bonus_estimates(std::span<const double> obs)
    {
        const auto key = obs_key(obs);
        const auto value_out = evaluate(value_, false, obs, key);
        if (!has_bonus_nets()) {
            return bonus_from(value_out, nullptr);
        }
        const auto bonus_out = evaluate(bonus_, false, obs, key);
        return bonus_from(value_out, &bonus_out);
    }

    ParticleDistribution PeDqnAgent::member_distribution(std::span<const double> obs, std::size_t action,
                                                         std::size_t member)
    {
        const auto out = evaluate(value_, false, obs, obs_key(obs));
        return ParticleDistribution::from_atoms(member_atoms(value_, out, member, action));
    }

    ParticleDistribution PeDqnAgent::value_distribution(std::span<const double> obs, std::size_t action)
    {
        const auto out = evaluate(value_, false, obs, obs_key(obs));
        std::vector<Atom> atoms;
        const double m = static_cast<double>(value_.members.size());
        for (std::size_t i = 0; i < value_.members.size(); ++i) {
            for (auto a : member_atoms(value_, out, i, action)) {
                atoms.push_back({a.loc, a.weight / m});
            }
        }
        return ParticleDistribution::from_atoms(std::move(atoms));
    }

    ParticleDistribution PeDqnAgent::bonus_distribution(std::span<const double> obs, std::size_t action)
    {
        if (!has_bonus_nets()) {
            throw std::logic_error("bonus_distribution: agent has no bonus networks");
        }
        const auto key = obs_key(obs);
        const auto value_out = evaluate(value_, false, obs, key);
        const auto bonus_out = evaluate(bonus_, false, obs, key);
        const double shift = wavg_from(value_, value_out, action);
        std::vector<Atom> atoms;
        const double m = static_cast<double>(bonus_.members.size());
        for (std::size_t i = 0; i < bonus_.members.size(); ++i) {
            for (auto a : member_atoms(bonus_, bonus_out, i, action)) {
                atoms.push_back({a.loc + shift, a.weight / m});
            }
        }
        return ParticleDistribution::from_atoms(std::move(atoms));
    }

    TrainStats PeDqnAgent::fit(Ensemble &e, std::span<const Transition *const> batch,
                               const std::vector<std::vector<std::vector<Atom>>> &targets)
    {
        const std::size_t k = cfg_.n_atoms;
        const double inv_batch = 1.0 / static_cast<double>(batch.size());
        const char *name = &e == &value_ ? "value" : "bonus";

        // Identical observations share one forward/backward pass: backward is
        // linear in the output gradient, so per-sample gradients are summed first.
        std::unordered_map<std::string, std::size_t> group_of;
        std::vector<std::vector<std::size_t>> groups;
        for (std::size_t b = 0; b < batch.size(); ++b) {
            auto [it, fresh] = group_of.emplace(obs_key(batch[b]->obs), groups.size());
            if (fresh) {
                groups.emplace_back();
            }
            groups[it->second].push_back(b);
        }
        std::vector<std::string> keys(groups.size());
        for (const auto &[key, g] : group_of) {
            keys[g] = key;
        }

        TrainStats stats;
        stats.distinct_states = groups.size();
        stats.member_losses.assign(e.members.size(), 0.0);
        MlpCache cache;
        for (std::size_t i = 0; i < e.members.size(); ++i) {
            auto &mem = e.members[i];
            std::vector<double> grad(mem.net.n_params(), 0.0);
            std::vector<double> grad_out(n_actions_ * k);
            for (std::size_t g = 0; g < groups.size(); ++g) {
                const auto &obs = batch[groups[g].front()]->obs;
                mem.net.forward(obs, cache);
                std::vector<double> logits(cache.output().begin(), cache.output().end());
                if (mem.prior.scale() != 0.0) {
                    const auto &p = prior_output(e, i, obs, keys[g]);
                    for (std::size_t j = 0; j < p.size(); ++j) {
                        logits[j] += mem.prior.scale() * p[j];
                    }
                }
                std::fill(grad_out.begin(), grad_out.end(), 0.0);
                for (std::size_t b : groups[g]) {
                    const auto &t = *batch[b];
                    const std::size_t off = t.action * k;
                    const std::span<const double> slice(logits.data() + off, k);
                    LossGrad lg = mem.kind == ProjectionKind::Quantile
                                      ? qr_loss_grad(slice, targets[i][b], taus_)
                                      : kl_loss_grad(slice, categorical_probabilities(targets[i][b], e.support));
                    check_finite(lg.loss, name, i, b, t);
                    stats.member_losses[i] += lg.loss * inv_batch;
                    for (std::size_t j = 0; j < k; ++j) {
                        grad_out[off + j] += lg.grad[j] * inv_batch;
                    }
                }
                mem.net.backward(cache, grad_out, grad);
            }
            adam_step(mem.net, grad, mem.adam);
        }
        return stats;
    }

    TrainStats PeDqnAgent::train_value_step(std::span<const Transition *const> batch)
    {
        const std::size_t m = value_.members.size();
        const bool joint = cfg_.variant != Variant::Independent;
        std::vector<std::vector<std::vector<Atom>>> targets(m, std::vector<std::vector<Atom>>(batch.size()));
        for (std::size_t b = 0; b < batch.size(); ++b) {
            const auto &t = *batch[b];
            if (t.done) {
                for (std::size_t i = 0; i < m; ++i) {
                    targets[i][b] = {{t.reward, 1.0}};
                }
                continue;
            }
            const auto &next = evaluate_memo(value_target_memo_, value_, true, t.next_obs);
            if (joint) {
                const std::size_t a_next = argmax(next.mixture_means);
                std::vector<Atom> atoms;
                atoms.reserve(m * cfg_.n_atoms);
                for (std::size_t i = 0; i < m; ++i) {
                    for (auto a : member_atoms(value_, next, i, a_next)) {
                        atoms.push_back({t.reward + cfg_.gamma * a.loc, a.weight / static_cast<double>(m)});
                    }
                }
                for (std::size_t i = 0; i < m; ++i) {
                    targets[i][b] = atoms;
                }
            } else {
                for (std::size_t i = 0; i < m; ++i) {
                    const std::size_t a_next = argmax(next.means[i]);
                    auto atoms = member_atoms(value_, next, i, a_next);
                    for (auto &a : atoms) {
                        a.loc = t.reward + cfg_.gamma * a.loc;
                    }
                    targets[i][b] = std::move(atoms);
                }
            }
        }
        return fit(value_, batch, targets);
    }

    TrainStats PeDqnAgent::train_bonus_step(std::span<const Transition *const> batch, double beta)
    {
        if (!has_bonus_nets()) {
            return {};
        }
        const std::size_t m = bonus_.members.size();
        Memo value_online;
        Memo bonus_online;
        std::vector<std::vector<std::vector<Atom>>> targets(m, std::vector<std::vector<Atom>>(batch.size()));
        for (std::size_t b = 0; b < batch.size(); ++b) {
            const auto &t = *batch[b];
            if (t.done) {
                // b(s, a) = w_avg(s, a) exactly, so the raw part targets zero.
                for (std::size_t i = 0; i < m; ++i) {
                    targets[i][b] = {{0.0, 1.0}};
                }
                continue;
            }
            auto &v_next = evaluate_memo(value_online, value_, false, t.next_obs);
            const auto &b_next = evaluate_memo(bonus_online, bonus_, false, t.next_obs);
            if (v_next.wavg.empty()) {
                for (std::size_t a = 0; a < n_actions_; ++a) {
                    v_next.wavg.push_back(wavg_from(value_, v_next, a));
                }
            }
            const auto &wavg = v_next.wavg;
            std::vector<double> score(n_actions_);
            for (std::size_t a = 0; a < n_actions_; ++a) {
                score[a] = v_next.mixture_means[a] + beta * (b_next.mixture_means[a] + wavg[a]);
            }
            const std::size_t a_eps = argmax(score);
            const auto &b_target = evaluate_memo(bonus_target_memo_, bonus_, true, t.next_obs);
            // Raw target gamma * (raw' + w_avg(s', a'_eps)); the intrinsic reward
            // w_avg(s, a) is carried by the forward-pass augmentation instead.
            std::vector<Atom> atoms;
            atoms.reserve(m * cfg_.n_atoms);
            for (std::size_t i = 0; i < m; ++i) {
                for (auto a : member_atoms(bonus_, b_target, i, a_eps)) {
                    atoms.push_back({cfg_.gamma * (a.loc + wavg[a_eps]), a.weight / static_cast<double>(m)});
                }
            }
            for (std::size_t i = 0; i < m; ++i) {
                targets[i][b] = atoms;
            }
        }
        return fit(bonus_, batch, targets);
    }

    void PeDqnAgent::sync_targets()
    {
        for (auto *e : {&value_, &bonus_}) {
            for (auto &mem : e->members) {
                std::copy(mem.net.params().begin(), mem.net.params().end(), mem.target.params().begin());
            }
        }
        value_target_memo_.clear();
        bonus_target_memo_.clear();
    }

    void PeDqnAgent::invalidate_caches()
    {
        value_target_memo_.clear();
        bonus_target_memo_.clear();
        for (auto &per_ensemble : prior_memo_) {
            for (auto &memo : per_ensemble) {
                memo.clear();
            }
        }
    }

    EpisodeRecord PeDqnAgent::run_episode(DeepSea &env, EpisodeMode mode)
    {
        if (env.observation_size() != obs_size_ || env.n_actions() != n_actions_) {
            throw std::invalid_argument("run_episode: environment does not match the agent's shape");
        }
        const bool train = mode == EpisodeMode::Train;
        EpisodeRecord rec;
        rec.seed = seed_;
        rec.mode = mode;
        rec.beta = train ? beta_schedule(cfg_, train_episodes_) : 0.0;

        auto obs = env.reset();
        double wavg_sum = 0.0;
        while (!env.done()) {
            const auto choice = select_action(obs, rec.beta);
            auto step = env.step(choice.action);
            rec.episode_return += step.reward;
            wavg_sum += choice.wavg;
            ++rec.steps;
            if (train) {
                replay_.push(Transition{obs, choice.action, step.reward, step.observation, step.done});
                if (replay_.can_sample(cfg_.batch_size)) {
                    const auto batch = replay_.sample(cfg_.batch_size, rng_);
                    train_value_step(batch);
                    train_bonus_step(batch, rec.beta);
                    ++gradient_steps_;
                    if (gradient_steps_ % cfg_.target_update_every == 0) {
                        sync_targets();
                    }
                }
            }
            obs = std::move(step.observation);
        }
        if (train) {
            ++train_episodes_;
        } else {
            ++eval_episodes_;
        }
        rec.episode = train_episodes_;
        rec.regret = rec.episode_return < kRegretThreshold;
        rec.wavg_mean = rec.steps > 0 ? wavg_sum / static_cast<double>(rec.steps) : 0.0;
        return rec;
    }

    void PeDqnAgent::save_checkpoints(const std::filesystem::path &dir) const
    {
        std::filesystem::create_directories(dir);
        auto write = [&](const std::string &name, const Mlp &net) {
            std::ofstream out(dir / name);
            if (!out) {
                throw std::runtime_error("cannot write checkpoint " + (dir / name).string());
            }
            save_checkpoint(out, net);
        };
        for (const auto &[label, e] : {std::pair{"value", &value_}, std::pair{"bonus", &bonus_}}) {
            for (std::size_t i = 0; i < e->members.size(); ++i) {
                const std::string base = std::string(label) + "_" + std::to_string(i);
                write(base + "_online.txt", e->members[i].net);
                write(base + "_target.txt", e->members[i].target);
            }
        }
    }
}
