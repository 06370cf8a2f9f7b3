#include "projens/audit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace projens
{
    void AuditReport::record(double violation)
    {
        ++trials;
        max_violation = std::max(max_violation, violation);
    }

    void AuditReport::finalize()
    {
        pass = pass && !(max_violation > tolerance);
    }

    nlohmann::json AuditReport::to_json() const
    {
        nlohmann::json j;
        j["name"] = name;
        j["trials"] = trials;
        // JSON has no infinities; an audit with no checks reports null.
        j["max_violation"] = std::isfinite(max_violation) ? nlohmann::json(max_violation) : nlohmann::json(nullptr);
        j["bound"] = bound;
        j["pass"] = pass;
        nlohmann::json extra = nlohmann::json::object();
        extra["tolerance"] = tolerance;
        for (const auto &[k, v] : metrics) {
            extra[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
        }
        j["metrics"] = extra;
        return j;
    }

    AuditReport combine_reports(const std::string &name, std::span<const AuditReport> parts)
    {
        AuditReport out;
        out.name = name;
        for (const auto &p : parts) {
            out.trials += p.trials;
            out.max_violation = std::max(out.max_violation, p.max_violation);
            out.bound = std::max(out.bound, p.bound);
            out.tolerance = p.tolerance;
            out.pass = out.pass && p.pass;
            for (const auto &[k, v] : p.metrics) {
                auto it = out.metrics.find(k);
                if (it == out.metrics.end()) {
                    out.metrics[k] = v;
                } else {
                    it->second = std::max(it->second, v);
                }
            }
        }
        return out;
    }

    std::vector<ProjectionSpec> diverse_specs(std::size_t n_atoms, double lo, double hi)
    {
        if (hi - lo < 1e-9) {
            lo -= 0.5;
            hi += 0.5;
        }
        std::vector<ProjectionSpec> specs;
        specs.push_back(ProjectionSpec::quantile(n_atoms));
        specs.push_back(ProjectionSpec::categorical(CategoricalSupport(lo, hi, std::max<std::size_t>(n_atoms, 2))));
        return specs;
    }

    std::optional<double> contraction_ratio(const FiniteMdp &mdp, const Policy &pi,
                                            std::span<const ProjectionSpec> specs,
                                            const ReturnTable &eta, const ReturnTable &eta_prime, double p)
    {
        const double before = sup_wasserstein(eta, eta_prime, p);
        if (before == 0.0) {
            return std::nullopt;
        }
        const double after = sup_wasserstein(projected_backup(eta, mdp, pi, specs),
                                             projected_backup(eta_prime, mdp, pi, specs), p);
        return after / before;
    }

    AuditReport audit_contraction(const FiniteMdp &mdp, const Policy &pi, std::span<const ProjectionSpec> specs,
                                  std::size_t trials, double p, std::uint64_t seed, std::size_t table_atoms)
    {
        if (trials < 1) {
            throw std::invalid_argument("contraction audit needs at least one trial");
        }
        AuditReport report;
        report.name = "contraction";
        report.bound = mean_modulus(specs) * mdp.gamma();
        report.tolerance = 1e-6;
        if (report.bound >= 1.0) {
            report.metrics["modulus_warning"] = 1.0;
        }

        auto [lo, hi] = mdp.return_range();
        if (hi - lo < 1e-9) {
            lo -= 0.5;
            hi += 0.5;
        }
        std::mt19937_64 rng(seed);
        double max_ratio = 0.0;
        double skipped = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto eta = sample_random_table(rng, mdp.n_states(), mdp.n_actions(), table_atoms, lo, hi);
            const auto eta_prime = sample_random_table(rng, mdp.n_states(), mdp.n_actions(), table_atoms, lo, hi);
            const auto ratio = contraction_ratio(mdp, pi, specs, eta, eta_prime, p);
            if (!ratio) {
                skipped += 1.0;
                continue;
            }
            max_ratio = std::max(max_ratio, *ratio);
            report.record(*ratio - report.bound);
        }
        report.metrics["max_ratio"] = max_ratio;
        report.metrics["skipped"] = skipped;
        report.finalize();
        return report;
    }

    AuditReport audit_optimism(const ReturnTable &eta_hat, const ReturnTable &eta_true)
    {
        if (eta_hat.n_states() != eta_true.n_states() || eta_hat.n_actions() != eta_true.n_actions()) {
            throw std::invalid_argument("optimism audit: tables differ in shape");
        }
        AuditReport report;
        report.name = "optimism";
        report.tolerance = 1e-9;
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < eta_hat.n_cells(); ++i) {
            const auto &est = eta_hat.cells()[i];
            const auto &truth = eta_true.cells()[i];
            const double upper = est.mean() + wasserstein(est, truth, 1.0);
            const double gap = upper - truth.mean();
            min_gap = std::min(min_gap, gap);
            report.record(-gap);
        }
        report.metrics["min_gap"] = min_gap;
        report.finalize();
        return report;
    }

    AuditReport audit_propagation(const FiniteMdp &mdp, const Policy &pi, const ReturnTable &eta_hat,
                                  std::span<const ProjectionSpec> specs)
    {
        const double c_bar = mean_modulus(specs);
        if (!(c_bar * mdp.gamma() < 1.0)) {
            throw std::invalid_argument("propagation audit requires c_bar * gamma < 1");
        }
        AuditReport report;
        report.name = "propagation";
        report.bound = c_bar * mdp.gamma();
        report.tolerance = 1e-7;

        const auto fixed = iterate_projection_mixture(mdp, pi, specs, kAuditFixedPointTol, kAuditMaxIterations);
        const auto error = cellwise_wasserstein(eta_hat, fixed.table, 1.0);
        const auto one_step = cellwise_wasserstein(eta_hat, projected_backup(eta_hat, mdp, pi, specs), 1.0);
        const auto propagated = expected_successor(mdp, pi, error);
        const auto bonus = propagate_bonus(mdp, pi, one_step, c_bar, 1e-12);

        double bonus_violation = -std::numeric_limits<double>::infinity();
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < mdp.n_states(); ++s) {
            for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
                const double rhs = one_step(s, a) + report.bound * propagated(s, a);
                report.record(error(s, a) - rhs);
                min_gap = std::min(min_gap, rhs - error(s, a));
                bonus_violation = std::max(bonus_violation, error(s, a) - bonus(s, a));
            }
        }
        report.metrics["min_gap"] = min_gap;
        report.metrics["bonus_max_violation"] = bonus_violation;
        report.metrics["fixed_point_iterations"] = static_cast<double>(fixed.iterations);
        report.metrics["fixed_point_unconverged"] = fixed.converged ? 0.0 : 1.0;
        report.finalize();
        report.pass = report.pass && bonus_violation <= 1e-6 && fixed.converged;
        return report;
    }

    ResidualAudit audit_residuals(const FiniteMdp &mdp, const Policy &pi, std::span<const std::size_t> k_values,
                                  std::size_t reference_resolution)
    {
        if (k_values.empty()) {
            throw std::invalid_argument("residual audit needs at least one K");
        }
        ResidualAudit out;
        out.bias.name = "residual_bias";
        out.bias.tolerance = 0.0;
        out.disagreement.name = "residual_disagreement";
        out.disagreement.tolerance = 0.0;
        out.monotone.name = "residual_monotone";
        out.monotone.tolerance = 1e-12;

        auto [lo, hi] = mdp.return_range();
        if (hi - lo < 1e-9) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double gamma = mdp.gamma();

        const std::vector<ProjectionSpec> ref_spec{
            ProjectionSpec::categorical(CategoricalSupport(lo, hi, reference_resolution))};
        auto reference = iterate_projection_mixture(mdp, pi, ref_spec, kAuditFixedPointTol, kAuditMaxIterations);
        out.reference_error = ref_spec.front().support().spacing() / (1.0 - gamma);
        out.bias.metrics["reference_unconverged"] = reference.converged ? 0.0 : 1.0;

        double previous = std::numeric_limits<double>::infinity();
        bool all_converged = reference.converged;
        for (std::size_t k : k_values) {
            const auto specs = diverse_specs(k, lo, hi);
            const double c_bar = mean_modulus(specs);
            const double d_bar = mean_error_bound(specs, lo, hi);

            auto fixed = iterate_projection_mixture(mdp, pi, specs, kAuditFixedPointTol, kAuditMaxIterations);
            all_converged = all_converged && fixed.converged;

            const double bias_bound = d_bar / (1.0 - c_bar * gamma) + out.reference_error;
            const double bias = sup_wasserstein(fixed.table, reference.table, 1.0);
            out.bias.bound = std::max(out.bias.bound, bias_bound);
            out.bias.record(bias - bias_bound);
            out.bias.metrics["bias_K" + std::to_string(k)] = bias;

            const auto members = member_backups(fixed.table, mdp, pi, specs);
            const double wavg = ensemble_disagreement(members).max();
            const double wavg_bound = 4.0 * (mdp.r_max() - mdp.r_min()) / ((1.0 - gamma) * static_cast<double>(k));
            out.disagreement.bound = std::max(out.disagreement.bound, wavg_bound);
            out.disagreement.record(wavg - wavg_bound);
            out.disagreement.metrics["wavg_K" + std::to_string(k)] = wavg;
            out.max_wavg.push_back(wavg);

            if (std::isfinite(previous)) {
                out.monotone.record(wavg - previous);
            }
            previous = wavg;
            out.fixed_points.push_back(std::move(fixed.table));
        }
        out.reference = std::move(reference.table);

        out.bias.finalize();
        out.disagreement.finalize();
        out.monotone.finalize();
        out.bias.pass = out.bias.pass && all_converged;
        return out;
    }
}
