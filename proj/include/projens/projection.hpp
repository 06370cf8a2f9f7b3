#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "projens/distribution.hpp"

namespace projens
{
    /// K >= 2 evenly spaced atoms z_1 < ... < z_K.
    class CategoricalSupport
    {
    public:
        CategoricalSupport(double z_min, double z_max, std::size_t n_atoms);

        double z_min() const { return z_min_; }
        double z_max() const { return z_max_; }
        double spacing() const { return spacing_; }
        std::size_t size() const { return atoms_.size(); }
        std::span<const double> atoms() const { return atoms_; }
        double operator[](std::size_t k) const { return atoms_[k]; }

        /// Index of the support atom at `x`, or npos if x is not on the grid.
        std::size_t index_of(double x, double tolerance = 1e-9) const;

        static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    private:
        double z_min_;
        double z_max_;
        double spacing_;
        std::vector<double> atoms_;
    };

    enum class ProjectionKind
    {
        Categorical,
        Quantile,
    };

    /// One member of a projection mixture together with its assumed
    /// Lipschitz modulus c_i in the audit metric.
    class ProjectionSpec
    {
    public:
        static ProjectionSpec categorical(CategoricalSupport support, double modulus = 1.0);
        static ProjectionSpec quantile(std::size_t n_atoms, double modulus = 1.0);

        ProjectionKind kind() const { return kind_; }
        double modulus() const { return modulus_; }
        /// Atom count K of the representation.
        std::size_t n_atoms() const;
        /// Only valid for categorical specs.
        const CategoricalSupport &support() const;

        ParticleDistribution apply(const ParticleDistribution &d) const;
        /// Worst-case w_1 projection error for inputs supported on [lo, hi].
        double error_bound(double lo, double hi) const;

    private:
        ProjectionSpec(ProjectionKind kind, std::vector<CategoricalSupport> support, std::size_t n_atoms, double modulus);

        ProjectionKind kind_;
        std::vector<CategoricalSupport> support_; // empty or one element
        std::size_t n_atoms_;
        double modulus_;
    };

    /// Mass of each input atom split between its two neighbouring support
    /// points in inverse proportion to distance; out-of-range atoms go to the
    /// nearest end. Returns K probabilities aligned with the support.
    std::vector<double> categorical_probabilities(const ParticleDistribution &d, const CategoricalSupport &support);
    std::vector<double> categorical_probabilities(std::span<const Atom> atoms, const CategoricalSupport &support);
    ParticleDistribution project_categorical(const ParticleDistribution &d, const CategoricalSupport &support);

    /// Midpoint quantile levels (2k - 1) / (2K), k = 1..K.
    std::vector<double> midpoint_quantiles(std::size_t n_atoms);
    /// Locations F^{-1}((2k - 1) / (2K)), k = 1..K.
    std::vector<double> quantile_locations(const ParticleDistribution &d, std::size_t n_atoms);
    ParticleDistribution project_quantile(const ParticleDistribution &d, std::size_t n_atoms);

    /// rho_tau(u) = u (tau - 1{u <= 0}).
    double quantile_check(double u, double tau);
    /// E_{Z ~ d}[rho_tau(Z - theta)].
    double quantile_loss(double theta, Quantile tau, const ParticleDistribution &d);

    /// Uniform mixture of the individual projections of `d`.
    ParticleDistribution projection_mixture(const ParticleDistribution &d, std::span<const ProjectionSpec> specs);

    /// Average modulus c-bar over the specs.
    double mean_modulus(std::span<const ProjectionSpec> specs);
    /// Average projection error bound d-bar for inputs supported on [lo, hi].
    double mean_error_bound(std::span<const ProjectionSpec> specs, double lo, double hi);
}
