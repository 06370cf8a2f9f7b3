#include "projens/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include <json.hpp>

#include "projens/audit.hpp"
#include "projens/envs.hpp"
#include "projens/losses.hpp"
#include "projens/mlp.hpp"
#include "projens/tabular.hpp"

#ifndef PROJENS_VERSION
#define PROJENS_VERSION "unknown"
#endif

namespace projens
{
    namespace
    {
        namespace fs = std::filesystem;

        std::string fmt(double x)
        {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            return buf;
        }

        std::ofstream open_out(const fs::path &path)
        {
            std::ofstream out(path);
            if (!out) {
                throw std::runtime_error("cannot write " + path.string());
            }
            return out;
        }

        fs::path prepare_run_dir(const RunConfig &cfg)
        {
            const fs::path dir = cfg.get("out");
            if (dir.empty()) {
                throw ConfigError("config key 'out' must not be empty");
            }
            fs::create_directories(dir);
            open_out(dir / "config.txt") << cfg.snapshot();
            open_out(dir / "VERSION") << version_string() << '\n';
            return dir;
        }

        std::vector<ConfigKey> agent_keys()
        {
            return {
                {"n_atoms", "51", "atoms per ensemble member"},
                {"hidden", "64", "hidden layer widths, comma separated"},
                {"lr", "0.0005", "Adam learning rate"},
                {"batch_size", "128", ""},
                {"target_update_every", "4", "gradient steps between hard target syncs"},
                {"buffer_capacity", "10000", ""},
                {"gamma", "0.99", ""},
                {"beta_init", "5.0", "initial bonus weight, decayed linearly to 0 over a third of the horizon"},
                {"beta_horizon", "0", "episodes in the training horizon for the beta schedule; 0 uses the budget"},
                {"prior_scale_quantile", "20.0", ""},
                {"prior_scale_categorical", "0.0", ""},
                {"value_z_min", "-1.0", "categorical value support"},
                {"value_z_max", "1.0", ""},
                {"bonus_z_min", "0.0", "categorical bonus support"},
                {"bonus_z_max", "0", "0 means (value_z_max - value_z_min) / (1 - gamma)"},
                {"bonus_enabled", "true", "learned bonus ensemble on/off"},
            };
        }

        template <typename Fn>
        void parallel_for(std::size_t n, std::size_t jobs, Fn &&fn)
        {
            jobs = std::max<std::size_t>(1, std::min(jobs, n));
            if (jobs == 1) {
                for (std::size_t i = 0; i < n; ++i) {
                    fn(i);
                }
                return;
            }
            std::atomic<std::size_t> next{0};
            std::vector<std::exception_ptr> errors(n);
            std::vector<std::thread> pool;
            for (std::size_t t = 0; t < jobs; ++t) {
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < n; i = next++) {
                        try {
                            fn(i);
                        } catch (...) {
                            errors[i] = std::current_exception();
                        }
                    }
                });
            }
            for (auto &th : pool) {
                th.join();
            }
            for (auto &e : errors) {
                if (e) {
                    std::rethrow_exception(e);
                }
            }
        }

        std::pair<std::size_t, std::size_t> draw_shape(std::mt19937_64 &rng, const RunConfig &cfg)
        {
            const auto s_lo = cfg.get_size("min_states");
            const auto s_hi = cfg.get_size("max_states");
            const auto a_lo = cfg.get_size("min_actions");
            const auto a_hi = cfg.get_size("max_actions");
            if (s_lo < 1 || s_hi < s_lo || a_lo < 1 || a_hi < a_lo) {
                throw ConfigError("audit: need 1 <= min_states <= max_states and 1 <= min_actions <= max_actions");
            }
            std::uniform_int_distribution<std::size_t> states(s_lo, s_hi);
            std::uniform_int_distribution<std::size_t> actions(a_lo, a_hi);
            const auto s = states(rng);
            return {s, actions(rng)};
        }

        std::pair<double, double> padded_range(const FiniteMdp &mdp)
        {
            auto [lo, hi] = mdp.return_range();
            if (hi - lo < 1e-9) {
                lo -= 0.5;
                hi += 0.5;
            }
            return {lo, hi};
        }
    }

    const char *version_string()
    {
        return PROJENS_VERSION;
    }

    RunConfig audit_config()
    {
        return RunConfig({
            {"seed", "0", "master seed"},
            {"out", "audit_out", "output directory"},
            {"trials", "100", "random MDPs in the contraction audit"},
            {"pairs", "20", "random table pairs per contraction MDP"},
            {"min_states", "2", ""},
            {"max_states", "10", ""},
            {"min_actions", "1", ""},
            {"max_actions", "4", ""},
            {"reward_atoms", "3", "maximum atoms per random reward distribution"},
            {"n_atoms", "51", "K for the contraction and propagation ensembles"},
            {"gamma", "0.9", ""},
            {"p", "1", "Wasserstein order for the contraction audit"},
            {"table_atoms", "5", "atoms per cell of random return tables"},
            {"optimism_pairs", "10000", "random (estimate, truth) cell pairs"},
            {"propagation_mdps", "50", ""},
            {"residual_mdps", "10", ""},
            {"residual_states", "5", ""},
            {"residual_actions", "2", ""},
            {"residual_k", "11,51,101", "ensemble sizes K for the residual audit"},
            {"reference_resolution", "2001", "atoms of the categorical reference fixed point"},
            {"dump_cells", "false", "write every residual fixed-point cell to cells.csv"},
        });
    }

    RunConfig deepsea_config()
    {
        std::vector<ConfigKey> keys{
            {"seed", "0", "master seed; agent seeds are derived from it and each run seed"},
            {"out", "deepsea_out", "output directory"},
            {"sizes", "10", "grid sizes, comma separated"},
            {"seeds", "0,1,2,3,4", "run seeds; each also fixes the environment's action map"},
            {"variants", "diverse", "any of diverse, qr-qr, c51-c51, ind"},
            {"episodes", "500", "training episode budget per run"},
            {"stochastic", "false", "stochastic transitions"},
            {"eval_every", "1", "greedy evaluation episode after every n training episodes; 0 disables"},
            {"solve_threshold", "0.9", "evaluation return that counts as solved"},
            {"stop_when_solved", "false", "end a run at its first solved evaluation"},
            {"write_episodes", "true", "write per-episode CSVs"},
            {"jobs", "1", "parallel runs"},
        };
        const auto agent = agent_keys();
        keys.insert(keys.end(), agent.begin(), agent.end());
        return RunConfig(std::move(keys));
    }

    RunConfig toyreg_config()
    {
        return RunConfig({
            {"seed", "0", "master seed"},
            {"out", "toyreg_out", "output directory"},
            {"n_points", "256", "training points"},
            {"steps", "3000", "gradient steps"},
            {"batch_size", "32", ""},
            {"n_atoms", "51", ""},
            {"hidden", "64,64", "hidden layer widths"},
            {"lr", "0.001", ""},
            {"z_min", "-2.0", "categorical support"},
            {"z_max", "2.0", ""},
            {"grid_points", "121", "evaluation grid size"},
            {"x_min", "-1.5", ""},
            {"x_max", "1.5", ""},
        });
    }

    PeDqnConfig agent_config_from(const RunConfig &cfg)
    {
        PeDqnConfig a;
        a.n_atoms = cfg.get_size("n_atoms");
        a.hidden = cfg.get_size_list("hidden");
        a.learning_rate = cfg.get_double("lr");
        a.batch_size = cfg.get_size("batch_size");
        a.target_update_every = cfg.get_size("target_update_every");
        a.buffer_capacity = cfg.get_size("buffer_capacity");
        a.gamma = cfg.get_double("gamma");
        a.beta_init = cfg.get_double("beta_init");
        a.prior_scale_quantile = cfg.get_double("prior_scale_quantile");
        a.prior_scale_categorical = cfg.get_double("prior_scale_categorical");
        a.value_z_min = cfg.get_double("value_z_min");
        a.value_z_max = cfg.get_double("value_z_max");
        a.bonus_z_min = cfg.get_double("bonus_z_min");
        a.bonus_z_max = cfg.get_double("bonus_z_max");
        a.bonus_enabled = cfg.get_bool("bonus_enabled");
        const auto horizon = cfg.get_size("beta_horizon");
        a.total_episodes = horizon > 0 ? horizon : cfg.get_size("episodes");
        try {
            a.validate();
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
        return a;
    }

    int cmd_audit(const RunConfig &cfg, std::ostream &log)
    {
        const auto seed = cfg.get_u64("seed");
        const auto trials = cfg.get_size("trials");
        const auto pairs = cfg.get_size("pairs");
        const auto k = cfg.get_size("n_atoms");
        const auto gamma = cfg.get_double("gamma");
        const auto p = cfg.get_double("p");
        const auto table_atoms = cfg.get_size("table_atoms");
        const auto reward_atoms = cfg.get_size("reward_atoms");
        const auto ks = cfg.get_size_list("residual_k");
        if (trials == 0 || pairs == 0) {
            throw ConfigError("audit: trials and pairs must be at least 1");
        }
        if (k < 2 || table_atoms < 1 || reward_atoms < 1) {
            throw ConfigError("audit: n_atoms >= 2, table_atoms >= 1 and reward_atoms >= 1 required");
        }
        if (!(gamma >= 0.0 && gamma < 1.0)) {
            throw ConfigError("audit: gamma must lie in [0, 1)");
        }
        if (!(p >= 1.0)) {
            throw ConfigError("audit: p must be at least 1");
        }
        if (ks.empty() || std::any_of(ks.begin(), ks.end(), [](std::size_t x) { return x < 2; })) {
            throw ConfigError("audit: residual_k needs at least one K >= 2");
        }
        const auto reference = cfg.get_size("reference_resolution");
        if (reference < 2) {
            throw ConfigError("audit: reference_resolution must be at least 2");
        }
        const auto dir = prepare_run_dir(cfg);
        nlohmann::json report = nlohmann::json::object();

        {
            std::vector<AuditReport> parts;
            auto csv = open_out(dir / "contraction.csv");
            csv << "trial,states,actions,max_ratio,bound,max_violation,pass\n";
            for (std::size_t t = 0; t < trials; ++t) {
                std::mt19937_64 rng(mix_seed(seed, t));
                const auto [ns, na] = draw_shape(rng, cfg);
                const auto mdp = sample_random_mdp(rng(), ns, na, reward_atoms, gamma);
                const auto pi = sample_random_policy(rng(), ns, na);
                const auto [lo, hi] = padded_range(mdp);
                const auto specs = diverse_specs(k, lo, hi);
                auto r = audit_contraction(mdp, pi, specs, pairs, p, rng(), table_atoms);
                csv << t << ',' << ns << ',' << na << ',' << fmt(r.metrics["max_ratio"]) << ',' << fmt(r.bound) << ','
                    << fmt(r.max_violation) << ',' << (r.pass ? 1 : 0) << '\n';
                parts.push_back(std::move(r));
            }
            const auto combined = combine_reports("contraction", parts);
            log << "contraction: " << (combined.pass ? "pass" : "FAIL") << " max ratio "
                << combined.metrics.at("max_ratio") << " bound " << combined.bound << '\n';
            report["contraction"] = combined.to_json();
        }

        {
            const auto total = cfg.get_size("optimism_pairs");
            std::mt19937_64 rng(mix_seed(seed, 1000003));
            std::uniform_real_distribution<double> centre(-2.0, 2.0);
            std::uniform_real_distribution<double> width(0.1, 3.0);
            std::vector<AuditReport> parts;
            for (std::size_t done = 0; done < total;) {
                const std::size_t n = std::min<std::size_t>(100, total - done);
                const double c1 = centre(rng), w1 = width(rng), c2 = centre(rng), w2 = width(rng);
                const auto est = sample_random_table(rng, n, 1, table_atoms, c1 - w1, c1 + w1);
                const auto truth = sample_random_table(rng, n, 1, table_atoms, c2 - w2, c2 + w2);
                parts.push_back(audit_optimism(est, truth));
                done += n;
            }
            auto combined = combine_reports("optimism", parts);
            if (parts.empty()) {
                combined.tolerance = 1e-9;
            }
            log << "optimism: " << (combined.pass ? "pass" : "FAIL") << " over " << combined.trials << " cells\n";
            report["optimism"] = combined.to_json();
        }

        {
            std::vector<AuditReport> parts;
            auto csv = open_out(dir / "propagation.csv");
            csv << "mdp,states,actions,max_violation,bonus_max_violation,pass\n";
            for (std::size_t m = 0; m < cfg.get_size("propagation_mdps"); ++m) {
                std::mt19937_64 rng(mix_seed(seed, 2000003 + m));
                const auto [ns, na] = draw_shape(rng, cfg);
                const auto mdp = sample_random_mdp(rng(), ns, na, reward_atoms, gamma);
                const auto pi = sample_random_policy(rng(), ns, na);
                const auto [lo, hi] = padded_range(mdp);
                const auto eta_hat = sample_random_table(rng, ns, na, table_atoms, lo, hi);
                const auto specs = diverse_specs(k, lo, hi);
                auto r = audit_propagation(mdp, pi, eta_hat, specs);
                csv << m << ',' << ns << ',' << na << ',' << fmt(r.max_violation) << ','
                    << fmt(r.metrics["bonus_max_violation"]) << ',' << (r.pass ? 1 : 0) << '\n';
                parts.push_back(std::move(r));
            }
            const auto combined = combine_reports("propagation", parts);
            log << "propagation: " << (combined.pass ? "pass" : "FAIL") << " over " << combined.trials << " cells\n";
            report["propagation"] = combined.to_json();
        }

        {
            std::vector<AuditReport> bias, disagreement, monotone;
            auto csv = open_out(dir / "residual.csv");
            csv << "mdp,K,max_wavg,wavg_bound,bias\n";
            std::ofstream cells;
            if (cfg.get_bool("dump_cells")) {
                cells = open_out(dir / "cells.csv");
                cells << "mdp,K,state,action,atoms\n";
            }
            const auto n_states = cfg.get_size("residual_states");
            const auto n_actions = cfg.get_size("residual_actions");
            if (n_states < 1 || n_actions < 1) {
                throw ConfigError("audit: residual_states and residual_actions must be positive");
            }
            for (std::size_t m = 0; m < cfg.get_size("residual_mdps"); ++m) {
                std::mt19937_64 rng(mix_seed(seed, 3000017 + m));
                const auto mdp = sample_random_mdp(rng(), n_states, n_actions, reward_atoms, gamma);
                const auto pi = sample_random_policy(rng(), n_states, n_actions);
                auto r = audit_residuals(mdp, pi, ks, reference);
                const double range = mdp.r_max() - mdp.r_min();
                for (std::size_t i = 0; i < ks.size(); ++i) {
                    const double bound = 4.0 * range / ((1.0 - gamma) * static_cast<double>(ks[i]));
                    csv << m << ',' << ks[i] << ',' << fmt(r.max_wavg[i]) << ',' << fmt(bound) << ','
                        << fmt(r.bias.metrics["bias_K" + std::to_string(ks[i])]) << '\n';
                    if (cells.is_open()) {
                        const auto &table = r.fixed_points[i];
                        for (std::size_t s = 0; s < table.n_states(); ++s) {
                            for (std::size_t a = 0; a < table.n_actions(); ++a) {
                                cells << m << ',' << ks[i] << ',' << s << ',' << a << ','
                                      << to_csv_row(table.at(s, a)) << '\n';
                            }
                        }
                    }
                }
                bias.push_back(std::move(r.bias));
                disagreement.push_back(std::move(r.disagreement));
                monotone.push_back(std::move(r.monotone));
            }
            for (auto [name, parts] : {std::pair{"residual_bias", &bias}, std::pair{"residual_disagreement", &disagreement},
                                       std::pair{"residual_monotone", &monotone}}) {
                const auto combined = combine_reports(name, *parts);
                log << name << ": " << (combined.pass ? "pass" : "FAIL") << '\n';
                report[name] = combined.to_json();
            }
        }

        bool all_pass = true;
        for (const auto &[name, r] : report.items()) {
            all_pass = all_pass && r.at("pass").get<bool>();
        }
        report["all_pass"] = all_pass;
        open_out(dir / "audits.json") << report.dump(2) << '\n';
        log << (all_pass ? "all audits pass" : "audit failure") << '\n';
        return all_pass ? kExitOk : kExitAuditFailure;
    }

    int cmd_deepsea(const RunConfig &cfg, std::ostream &log)
    {
        const auto sizes = cfg.get_size_list("sizes");
        const auto seeds = cfg.get_u64_list("seeds");
        std::vector<Variant> variants;
        for (const auto &name : cfg.get_list("variants")) {
            try {
                variants.push_back(parse_variant(name));
            } catch (const std::invalid_argument &e) {
                throw ConfigError(e.what());
            }
        }
        if (sizes.empty() || seeds.empty() || variants.empty()) {
            throw ConfigError("deepsea: sizes, seeds and variants must be non-empty");
        }
        if (std::any_of(sizes.begin(), sizes.end(), [](std::size_t n) { return n < 1; })) {
            throw ConfigError("deepsea: sizes must be positive");
        }
        const auto master = cfg.get_u64("seed");
        const auto budget = cfg.get_size("episodes");
        const auto eval_every = cfg.get_size("eval_every");
        const auto threshold = cfg.get_double("solve_threshold");
        const bool stop = cfg.get_bool("stop_when_solved");
        const bool stochastic = cfg.get_bool("stochastic");
        const bool write_episodes = cfg.get_bool("write_episodes");
        const auto jobs = cfg.get_size("jobs");
        const auto base = agent_config_from(cfg);
        const auto dir = prepare_run_dir(cfg);

        struct Job
        {
            std::size_t size;
            Variant variant;
            std::uint64_t seed;
        };
        struct Result
        {
            std::vector<EpisodeRecord> records;
            long long episodes_to_solve = -1;
            std::size_t total_regret = 0;
        };
        std::vector<Job> jobs_list;
        for (auto n : sizes) {
            for (auto v : variants) {
                for (auto s : seeds) {
                    jobs_list.push_back({n, v, s});
                }
            }
        }
        std::vector<Result> results(jobs_list.size());
        std::mutex log_mutex;

        if (budget > 0) {
            parallel_for(jobs_list.size(), jobs, [&](std::size_t j) {
                const auto &job = jobs_list[j];
                auto agent_cfg = base;
                agent_cfg.variant = job.variant;
                DeepSea env(job.size, stochastic, job.seed);
                PeDqnAgent agent(agent_cfg, env.observation_size(), env.n_actions(), mix_seed(master, job.seed));
                auto &res = results[j];
                for (std::size_t e = 0; e < budget; ++e) {
                    auto rec = agent.run_episode(env, EpisodeMode::Train);
                    rec.seed = job.seed;
                    res.total_regret += rec.regret ? 1 : 0;
                    res.records.push_back(rec);
                    if (eval_every > 0 && (e + 1) % eval_every == 0) {
                        auto ev = agent.run_episode(env, EpisodeMode::Eval);
                        ev.seed = job.seed;
                        res.records.push_back(ev);
                        if (res.episodes_to_solve < 0 && ev.episode_return >= threshold) {
                            res.episodes_to_solve = static_cast<long long>(e + 1);
                            if (stop) {
                                break;
                            }
                        }
                    }
                }
                std::lock_guard<std::mutex> lock(log_mutex);
                log << "size " << job.size << " variant " << to_string(job.variant) << " seed " << job.seed
                    << ": solved at " << res.episodes_to_solve << ", regret " << res.total_regret << '\n';
            });
        }

        auto regret = open_out(dir / "regret.csv");
        regret << "size,seed,variant,episodes_to_solve,total_regret\n";
        for (std::size_t j = 0; j < jobs_list.size() && budget > 0; ++j) {
            const auto &job = jobs_list[j];
            regret << job.size << ',' << job.seed << ',' << to_string(job.variant) << ','
                   << results[j].episodes_to_solve << ',' << results[j].total_regret << '\n';
        }
        if (write_episodes) {
            for (auto n : sizes) {
                for (auto v : variants) {
                    auto csv = open_out(dir / ("episodes_N" + std::to_string(n) + "_" + to_string(v) + ".csv"));
                    csv << episode_csv_header() << '\n';
                    for (std::size_t j = 0; j < jobs_list.size(); ++j) {
                        if (jobs_list[j].size != n || jobs_list[j].variant != v) {
                            continue;
                        }
                        for (const auto &rec : results[j].records) {
                            csv << to_csv_row(rec) << '\n';
                        }
                    }
                }
            }
        }
        return kExitOk;
    }

    int cmd_toyreg(const RunConfig &cfg, std::ostream &log)
    {
        const auto seed = cfg.get_u64("seed");
        const auto n_points = cfg.get_size("n_points");
        const auto steps = cfg.get_size("steps");
        const auto batch = cfg.get_size("batch_size");
        const auto k = cfg.get_size("n_atoms");
        const auto hidden = cfg.get_size_list("hidden");
        const auto lr = cfg.get_double("lr");
        const auto grid = cfg.get_size("grid_points");
        const auto x_min = cfg.get_double("x_min");
        const auto x_max = cfg.get_double("x_max");
        if (n_points < 1 || batch < 1 || k < 2 || grid < 2 || !(x_max > x_min) || !(lr > 0.0)) {
            throw ConfigError("toyreg: need n_points, batch_size >= 1, n_atoms, grid_points >= 2, x_max > x_min, lr > 0");
        }
        if (std::any_of(hidden.begin(), hidden.end(), [](std::size_t h) { return h == 0; })) {
            throw ConfigError("toyreg: hidden widths must be positive");
        }
        std::optional<CategoricalSupport> support_opt;
        try {
            support_opt.emplace(cfg.get_double("z_min"), cfg.get_double("z_max"), k);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("toyreg: ") + e.what());
        }
        const auto &support = *support_opt;
        const auto dir = prepare_run_dir(cfg);

        const auto data = toy_regression_sample(mix_seed(seed, 0), n_points);
        std::vector<std::size_t> widths{1};
        widths.insert(widths.end(), hidden.begin(), hidden.end());
        widths.push_back(k);
        Mlp quantile_net = init_mlp(mix_seed(seed, 1), widths);
        Mlp categorical_net = init_mlp(mix_seed(seed, 2), widths);
        AdamConfig adam_cfg;
        adam_cfg.learning_rate = lr;
        adam_cfg.epsilon = 1e-3 / static_cast<double>(batch);
        AdamState q_adam(quantile_net.n_params(), adam_cfg);
        AdamState c_adam(categorical_net.n_params(), adam_cfg);
        const auto taus = midpoint_quantiles(k);

        std::mt19937_64 rng(mix_seed(seed, 3));
        std::uniform_int_distribution<std::size_t> pick(0, n_points - 1);
        MlpCache cache;
        const double inv_batch = 1.0 / static_cast<double>(batch);
        for (std::size_t step = 0; step < steps; ++step) {
            std::vector<double> gq(quantile_net.n_params(), 0.0);
            std::vector<double> gc(categorical_net.n_params(), 0.0);
            double lq = 0.0, lc = 0.0;
            for (std::size_t b = 0; b < batch; ++b) {
                const auto &pt = data[pick(rng)];
                const double x[1] = {pt.x};
                const Atom target[1] = {{pt.y, 1.0}};

                quantile_net.forward(x, cache);
                auto q = qr_loss_grad(cache.output(), target, taus);
                for (auto &g : q.grad) {
                    g *= inv_batch;
                }
                quantile_net.backward(cache, q.grad, gq);
                lq += q.loss * inv_batch;

                categorical_net.forward(x, cache);
                auto c = kl_loss_grad(cache.output(), categorical_probabilities(target, support));
                for (auto &g : c.grad) {
                    g *= inv_batch;
                }
                categorical_net.backward(cache, c.grad, gc);
                lc += c.loss * inv_batch;
            }
            adam_step(quantile_net, gq, q_adam);
            adam_step(categorical_net, gc, c_adam);
            if ((step + 1) % 1000 == 0) {
                log << "step " << step + 1 << " qr loss " << lq << " kl loss " << lc << '\n';
            }
        }

        auto data_csv = open_out(dir / "toydata.csv");
        data_csv << "x,y\n";
        for (const auto &pt : data) {
            data_csv << fmt(pt.x) << ',' << fmt(pt.y) << '\n';
        }
        auto csv = open_out(dir / "toyreg.csv");
        csv << "head,x,tau,value\n";
        for (std::size_t i = 0; i < grid; ++i) {
            const double x = x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(grid - 1);
            const double in[1] = {x};
            const auto q = decode_quantile(quantile_net.forward(in));
            const auto c = decode_categorical(categorical_net.forward(in), support);
            for (int t = 1; t <= 9; ++t) {
                const Quantile tau(t / 10.0);
                csv << "quantile," << fmt(x) << ',' << fmt(tau.value()) << ',' << fmt(q.inverse_cdf(tau)) << '\n';
                csv << "categorical," << fmt(x) << ',' << fmt(tau.value()) << ',' << fmt(c.inverse_cdf(tau)) << '\n';
            }
        }
        return kExitOk;
    }

    int run_cli(std::span<const std::string> args, std::ostream &out, std::ostream &err)
    {
        const char *usage =
            "usage: projens <audit|deepsea|toyreg> [--config file] [--key value ...]\n"
            "       projens <command> --help    lists keys and defaults\n"
            "       projens --version\n";
        if (args.empty()) {
            err << usage;
            return kExitConfigError;
        }
        const auto &command = args.front();
        if (command == "--help" || command == "-h" || command == "help") {
            out << usage;
            return kExitOk;
        }
        if (command == "--version") {
            out << version_string() << '\n';
            return kExitOk;
        }
        RunConfig cfg = command == "audit"     ? audit_config()
                        : command == "deepsea" ? deepsea_config()
                        : command == "toyreg"  ? toyreg_config()
                                               : RunConfig({});
        if (cfg.schema().empty()) {
            err << "unknown command '" << command << "'\n" << usage;
            return kExitConfigError;
        }
        const auto rest = args.subspan(1);
        if (std::find(rest.begin(), rest.end(), "--help") != rest.end()) {
            out << cfg.snapshot();
            return kExitOk;
        }
        try {
            cfg.apply_overrides(rest);
            if (command == "audit") {
                return cmd_audit(cfg, out);
            }
            if (command == "deepsea") {
                return cmd_deepsea(cfg, out);
            }
            return cmd_toyreg(cfg, out);
        } catch (const ConfigError &e) {
            err << "config error: " << e.what() << '\n';
            return kExitConfigError;
        } catch (const std::exception &e) {
            err << "error: " << e.what() << '\n';
            return kExitAuditFailure;
        }
    }
}
