#include "projens/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace projens
{
    CategoricalSupport::CategoricalSupport(double z_min, double z_max, std::size_t n_atoms)
        : z_min_(z_min), z_max_(z_max)
    {
        if (n_atoms < 2) {
            throw std::invalid_argument("categorical support needs at least two atoms");
        }
        if (!(z_max > z_min) || !std::isfinite(z_min) || !std::isfinite(z_max)) {
            throw std::invalid_argument("categorical support needs finite z_min < z_max");
        }
        spacing_ = (z_max - z_min) / static_cast<double>(n_atoms - 1);
        atoms_.resize(n_atoms);
        for (std::size_t k = 0; k < n_atoms; ++k) {
            atoms_[k] = z_min + spacing_ * static_cast<double>(k);
        }
        atoms_.back() = z_max;
    }

    std::size_t CategoricalSupport::index_of(double x, double tolerance) const
    {
        const double pos = (x - z_min_) / spacing_;
        const double k = std::round(pos);
        if (k < 0.0 || k > static_cast<double>(atoms_.size() - 1)) {
            return npos;
        }
        const auto idx = static_cast<std::size_t>(k);
        return std::abs(atoms_[idx] - x) <= tolerance * std::max(1.0, spacing_) ? idx : npos;
    }

    ProjectionSpec::ProjectionSpec(ProjectionKind kind, std::vector<CategoricalSupport> support, std::size_t n_atoms, double modulus)
        : kind_(kind), support_(std::move(support)), n_atoms_(n_atoms), modulus_(modulus)
    {
        if (n_atoms < 1) {
            throw std::invalid_argument("projection needs at least one atom");
        }
        if (!(modulus > 0.0)) {
            throw std::invalid_argument("projection modulus must be positive");
        }
    }

    ProjectionSpec ProjectionSpec::categorical(CategoricalSupport support, double modulus)
    {
        const std::size_t k = support.size();
        return ProjectionSpec(ProjectionKind::Categorical, {std::move(support)}, k, modulus);
    }

    ProjectionSpec ProjectionSpec::quantile(std::size_t n_atoms, double modulus)
    {
        return ProjectionSpec(ProjectionKind::Quantile, {}, n_atoms, modulus);
    }

    std::size_t ProjectionSpec::n_atoms() const
    {
        return n_atoms_;
    }

    const CategoricalSupport &ProjectionSpec::support() const
    {
        if (support_.empty()) {
            throw std::logic_error("quantile projection has no categorical support");
        }
        return support_.front();
    }

    ParticleDistribution ProjectionSpec::apply(const ParticleDistribution &d) const
    {
        if (kind_ == ProjectionKind::Categorical) {
            return project_categorical(d, support_.front());
        }
        return project_quantile(d, n_atoms_);
    }

    double ProjectionSpec::error_bound(double lo, double hi) const
    {
        if (kind_ == ProjectionKind::Categorical) {
            return support_.front().spacing();
        }
        return (hi - lo) / static_cast<double>(n_atoms_);
    }

    std::vector<double> categorical_probabilities(std::span<const Atom> atoms, const CategoricalSupport &support)
    {
        const std::size_t n = support.size();
        std::vector<double> probs(n, 0.0);
        const double z1 = support.z_min();
        const double zk = support.z_max();
        const double dz = support.spacing();
        for (const auto &a : atoms) {
            if (a.loc <= z1) {
                probs.front() += a.weight;
                continue;
            }
            if (a.loc >= zk) {
                probs.back() += a.weight;
                continue;
            }
            auto k = static_cast<std::size_t>((a.loc - z1) / dz);
            k = std::min(k, n - 2);
            const double upper = (a.loc - support[k]) / dz;
            const double frac = std::clamp(upper, 0.0, 1.0);
            probs[k] += a.weight * (1.0 - frac);
            probs[k + 1] += a.weight * frac;
        }
        return probs;
    }

    std::vector<double> categorical_probabilities(const ParticleDistribution &d, const CategoricalSupport &support)
    {
        return categorical_probabilities(d.atoms(), support);
    }

    ParticleDistribution project_categorical(const ParticleDistribution &d, const CategoricalSupport &support)
    {
        return ParticleDistribution::make(support.atoms(), categorical_probabilities(d, support));
    }

    std::vector<double> midpoint_quantiles(std::size_t n_atoms)
    {
        std::vector<double> taus(n_atoms);
        const double k = static_cast<double>(n_atoms);
        for (std::size_t i = 0; i < n_atoms; ++i) {
            taus[i] = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * k);
        }
        return taus;
    }

    std::vector<double> quantile_locations(const ParticleDistribution &d, std::size_t n_atoms)
    {
        if (n_atoms < 1) {
            throw std::invalid_argument("quantile projection needs K >= 1");
        }
        // Single sweep over the CDF; levels are increasing. Same jump-point
        // convention as ParticleDistribution::inverse_cdf.
        const auto taus = midpoint_quantiles(n_atoms);
        const auto atoms = d.atoms();
        std::vector<double> locs(n_atoms);
        std::size_t i = 0;
        double cum = atoms[0].weight;
        for (std::size_t k = 0; k < n_atoms; ++k) {
            while (i + 1 < atoms.size() && cum < taus[k] - 1e-12) {
                ++i;
                cum += atoms[i].weight;
            }
            locs[k] = atoms[i].loc;
        }
        return locs;
    }

    ParticleDistribution project_quantile(const ParticleDistribution &d, std::size_t n_atoms)
    {
        return ParticleDistribution::uniform(quantile_locations(d, n_atoms));
    }

    double quantile_check(double u, double tau)
    {
        return u * (tau - (u <= 0.0 ? 1.0 : 0.0));
    }

    double quantile_loss(double theta, Quantile tau, const ParticleDistribution &d)
    {
        double loss = 0.0;
        for (const auto &a : d.atoms()) {
            loss += a.weight * quantile_check(a.loc - theta, tau.value());
        }
        return loss;
    }

    ParticleDistribution projection_mixture(const ParticleDistribution &d, std::span<const ProjectionSpec> specs)
    {
        if (specs.empty()) {
            throw std::invalid_argument("projection mixture needs at least one projection");
        }
        if (specs.size() == 1) {
            return specs.front().apply(d);
        }
        std::vector<ParticleDistribution> parts;
        parts.reserve(specs.size());
        for (const auto &spec : specs) {
            parts.push_back(spec.apply(d));
        }
        return uniform_mixture(parts);
    }

    double mean_modulus(std::span<const ProjectionSpec> specs)
    {
        double c = 0.0;
        for (const auto &s : specs) {
            c += s.modulus();
        }
        return c / static_cast<double>(specs.size());
    }

    double mean_error_bound(std::span<const ProjectionSpec> specs, double lo, double hi)
    {
        double d = 0.0;
        for (const auto &s : specs) {
            d += s.error_bound(lo, hi);
        }
        return d / static_cast<double>(specs.size());
    }
}
