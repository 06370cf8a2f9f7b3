#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace projens
{
    /// Locations closer than this are treated as the same atom.
    inline constexpr double kMergeTolerance = 1e-12;

    struct Atom
    {
        double loc;
        double weight;
    };

    /// A probability level in [0, 1].
    class Quantile
    {
    public:
        explicit Quantile(double tau);

        double value() const { return tau_; }

    private:
        double tau_;
    };

    /// Finite mixture of Dirac deltas. Atoms are sorted by location, have
    /// strictly positive weights summing to one, and no two atoms share a
    /// location (up to kMergeTolerance). Immutable once built.
    class ParticleDistribution
    {
    public:
        /// Builds a normalized, sorted and merged distribution.
        /// Throws std::invalid_argument on empty input, length mismatch,
        /// negative or non-finite weights, non-finite locations, or a zero
        /// total weight.
        static ParticleDistribution make(std::span<const double> locations, std::span<const double> weights);
        static ParticleDistribution from_atoms(std::vector<Atom> atoms);
        static ParticleDistribution dirac(double location);
        /// Equal weights 1/n on the given locations.
        static ParticleDistribution uniform(std::span<const double> locations);

        std::span<const Atom> atoms() const { return atoms_; }
        std::size_t size() const { return atoms_.size(); }
        double min_location() const { return atoms_.front().loc; }
        double max_location() const { return atoms_.back().loc; }

        /// Right-continuous CDF, P(Z <= x).
        double cdf(double x) const;
        /// Generalized inverse inf{x : F(x) >= tau}; tau = 0 gives the smallest location.
        double inverse_cdf(Quantile tau) const;
        double mean() const;
        double variance() const;

    private:
        explicit ParticleDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

        std::vector<Atom> atoms_;
    };

    /// Exact p-Wasserstein distance, p >= 1 (p = infinity allowed), evaluated
    /// on the merged partition of both quantile functions.
    double wasserstein(const ParticleDistribution &a, const ParticleDistribution &b, double p = 1.0);

    /// 1-Wasserstein distance via the area between the two CDFs.
    double cdf_area_distance(const ParticleDistribution &a, const ParticleDistribution &b);

    /// Weighted mixture. Weights must be non-negative and sum to one within 1e-9.
    ParticleDistribution mixture(std::span<const ParticleDistribution> components, std::span<const double> weights);
    ParticleDistribution uniform_mixture(std::span<const ParticleDistribution> components);

    /// Law of r + gamma * Z for Z ~ d.
    ParticleDistribution pushforward_affine(const ParticleDistribution &d, double r, double gamma);

    /// "loc_0,w_0,loc_1,w_1,..." with round-trip precision.
    std::string to_csv_row(const ParticleDistribution &d);
    ParticleDistribution from_csv_row(const std::string &row);

    /// Law of X + Y for independent X ~ a, Y ~ b.
    ParticleDistribution convolve(const ParticleDistribution &a, const ParticleDistribution &b);
}
