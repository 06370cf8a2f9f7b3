#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "projens/projection.hpp"
#include "projens/tabular.hpp"

namespace projens
{
    /// Outcome of a numeric bound audit.
    ///
    /// Every audit checks inequalities of the form lhs <= rhs. `max_violation`
    /// is the largest lhs - rhs observed (negative when all checks hold with
    /// room to spare) and `pass` is max_violation <= tolerance. `bound` is the
    /// audited constant where one exists (e.g. c_bar * gamma for contraction),
    /// otherwise zero.
    struct AuditReport
    {
        std::string name;
        std::size_t trials = 0;
        double max_violation = -std::numeric_limits<double>::infinity();
        double bound = 0.0;
        double tolerance = 0.0;
        bool pass = true;
        std::map<std::string, double> metrics;

        void record(double violation);
        void finalize();
        nlohmann::json to_json() const;
    };

    /// Worst-case aggregation: trials add up, violations take the max, pass
    /// only if every part passed. Metrics are max-combined.
    AuditReport combine_reports(const std::string &name, std::span<const AuditReport> parts);

    /// w_p-bar(Omega T eta, Omega T eta') / w_p-bar(eta, eta'); empty when the
    /// tables coincide.
    std::optional<double> contraction_ratio(const FiniteMdp &mdp, const Policy &pi,
                                            std::span<const ProjectionSpec> specs,
                                            const ReturnTable &eta, const ReturnTable &eta_prime, double p);

    /// Random table pairs drawn over the MDP's return range; the maximum
    /// ratio must stay within c_bar * gamma + 1e-6.
    AuditReport audit_contraction(const FiniteMdp &mdp, const Policy &pi, std::span<const ProjectionSpec> specs,
                                  std::size_t trials, double p, std::uint64_t seed, std::size_t table_atoms);

    /// mean(eta_hat) + w_1(eta_hat, eta_true) >= mean(eta_true) at every cell, slack 1e-9.
    AuditReport audit_optimism(const ReturnTable &eta_hat, const ReturnTable &eta_true);

    /// Checks, with slack 1e-7, that
    ///   w_1(eta_hat, eta_M)(s,a) <= w_1(eta_hat, Omega T eta_hat)(s,a) + c_bar gamma E[w_1(eta_hat, eta_M)(S_1,A_1)]
    /// where eta_M is the fixed point of Omega T, and that the propagated
    /// bonus upper-bounds w_1(eta_hat, eta_M) within 1e-6.
    AuditReport audit_propagation(const FiniteMdp &mdp, const Policy &pi, const ReturnTable &eta_hat,
                                  std::span<const ProjectionSpec> specs);

    struct ResidualAudit
    {
        /// w_1(eta_M, eta_ref) <= d_bar / (1 - c_bar gamma) + reference error.
        AuditReport bias;
        /// max_{s,a} w_avg <= 4 (R_max - R_min) / ((1 - gamma) K) at the fixed point.
        AuditReport disagreement;
        /// max_{s,a} w_avg is non-increasing along the given K sequence.
        AuditReport monotone;
        /// Per-K maximal disagreement, in the order of `k_values`.
        std::vector<double> max_wavg;
        /// Reference resolution's own w_1 error bound.
        double reference_error = 0.0;
        /// Fixed-point mixture for each K, kept for downstream checks.
        std::vector<ReturnTable> fixed_points;
        std::optional<ReturnTable> reference;
    };

    /// Quantile + categorical ensemble (categorical support with K atoms over
    /// the MDP's return range) for each K, compared against a categorical
    /// reference with `reference_resolution` atoms.
    ResidualAudit audit_residuals(const FiniteMdp &mdp, const Policy &pi, std::span<const std::size_t> k_values,
                                  std::size_t reference_resolution);

    /// The diverse quantile + categorical pair used throughout the audits.
    std::vector<ProjectionSpec> diverse_specs(std::size_t n_atoms, double lo, double hi);

    /// Convergence settings shared by the audits.
    inline constexpr double kAuditFixedPointTol = 1e-10;
    inline constexpr std::size_t kAuditMaxIterations = 20000;
}
