#include "projens/distribution.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace projens
{
    namespace
    {
        // Cumulative weights accumulate rounding error; a level within this
        // distance of a jump is considered reached.
        constexpr double kLevelTolerance = 1e-12;

        char const *format_double(double x, char (&buf)[32])
        {
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            return buf;
        }
    }

    Quantile::Quantile(double tau) : tau_(tau)
    {
        if (!(tau >= 0.0 && tau <= 1.0)) {
            throw std::invalid_argument("quantile level must lie in [0, 1], got " + std::to_string(tau));
        }
    }

    ParticleDistribution ParticleDistribution::make(std::span<const double> locations, std::span<const double> weights)
    {
        if (locations.size() != weights.size()) {
            throw std::invalid_argument("particle distribution: locations and weights differ in length");
        }
        std::vector<Atom> atoms(locations.size());
        for (std::size_t i = 0; i < locations.size(); ++i) {
            atoms[i] = {locations[i], weights[i]};
        }
        return from_atoms(std::move(atoms));
    }

    ParticleDistribution ParticleDistribution::from_atoms(std::vector<Atom> atoms)
    {
        if (atoms.empty()) {
            throw std::invalid_argument("particle distribution: no atoms");
        }
        double total = 0.0;
        for (const auto &a : atoms) {
            if (!std::isfinite(a.loc)) {
                throw std::invalid_argument("particle distribution: non-finite location");
            }
            if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
                throw std::invalid_argument("particle distribution: negative or non-finite weight");
            }
            total += a.weight;
        }
        if (!(total > 0.0)) {
            throw std::invalid_argument("particle distribution: total weight is zero");
        }

        std::erase_if(atoms, [](const Atom &a) { return a.weight == 0.0; });
        auto by_loc = [](const Atom &x, const Atom &y) { return x.loc < y.loc; };
        if (!std::is_sorted(atoms.begin(), atoms.end(), by_loc)) {
            std::sort(atoms.begin(), atoms.end(), by_loc);
        }

        std::size_t out = 0;
        for (std::size_t i = 1; i < atoms.size(); ++i) {
            if (atoms[i].loc - atoms[out].loc <= kMergeTolerance) {
                atoms[out].weight += atoms[i].weight;
            } else {
                atoms[++out] = atoms[i];
            }
        }
        atoms.resize(out + 1);

        // Already-normalized input is kept bit-for-bit so serialization round-trips.
        if (std::abs(total - 1.0) > 1e-12) {
            const double inv = 1.0 / total;
            for (auto &a : atoms) {
                a.weight *= inv;
            }
        }
        return ParticleDistribution(std::move(atoms));
    }

    ParticleDistribution ParticleDistribution::dirac(double location)
    {
        return from_atoms({{location, 1.0}});
    }

    ParticleDistribution ParticleDistribution::uniform(std::span<const double> locations)
    {
        std::vector<Atom> atoms;
        atoms.reserve(locations.size());
        for (double x : locations) {
            atoms.push_back({x, 1.0});
        }
        return from_atoms(std::move(atoms));
    }

    double ParticleDistribution::cdf(double x) const
    {
        double c = 0.0;
        for (const auto &a : atoms_) {
            if (a.loc > x) {
                break;
            }
            c += a.weight;
        }
        return std::min(c, 1.0);
    }

    double ParticleDistribution::inverse_cdf(Quantile tau) const
    {
        double c = 0.0;
        for (const auto &a : atoms_) {
            c += a.weight;
            if (c >= tau.value() - kLevelTolerance) {
                return a.loc;
            }
        }
        return atoms_.back().loc;
    }

    double ParticleDistribution::mean() const
    {
        double m = 0.0;
        for (const auto &a : atoms_) {
            m += a.weight * a.loc;
        }
        return m;
    }

    double ParticleDistribution::variance() const
    {
        const double m = mean();
        double v = 0.0;
        for (const auto &a : atoms_) {
            v += a.weight * (a.loc - m) * (a.loc - m);
        }
        return v;
    }

    double wasserstein(const ParticleDistribution &a, const ParticleDistribution &b, double p)
    {
        if (!(p >= 1.0)) {
            throw std::invalid_argument("wasserstein: order p must be >= 1");
        }
        const bool sup_norm = std::isinf(p);
        const auto xa = a.atoms();
        const auto xb = b.atoms();

        // Walk the union of both quantile-function breakpoints. On each level
        // interval both inverse CDFs are constant.
        std::size_t i = 0, j = 0;
        double ca = xa.size() == 1 ? 1.0 : xa[0].weight;
        double cb = xb.size() == 1 ? 1.0 : xb[0].weight;
        double level = 0.0;
        double acc = 0.0;
        while (i < xa.size() && j < xb.size()) {
            const double next = std::min(ca, cb);
            const double width = next - level;
            const double diff = std::abs(xa[i].loc - xb[j].loc);
            if (width > 0.0) {
                if (sup_norm) {
                    acc = std::max(acc, diff);
                } else if (p == 1.0) {
                    acc += width * diff;
                } else {
                    acc += width * std::pow(diff, p);
                }
            }
            level = std::max(level, next);
            if (ca <= next) {
                ++i;
                if (i < xa.size()) {
                    ca = (i + 1 == xa.size()) ? 1.0 : ca + xa[i].weight;
                }
            }
            if (cb <= next) {
                ++j;
                if (j < xb.size()) {
                    cb = (j + 1 == xb.size()) ? 1.0 : cb + xb[j].weight;
                }
            }
        }
        if (sup_norm || p == 1.0) {
            return acc;
        }
        return std::pow(acc, 1.0 / p);
    }

    double cdf_area_distance(const ParticleDistribution &a, const ParticleDistribution &b)
    {
        const auto xa = a.atoms();
        const auto xb = b.atoms();
        std::size_t i = 0, j = 0;
        double fa = 0.0, fb = 0.0;
        double area = 0.0;
        double x = std::min(xa[0].loc, xb[0].loc);
        while (i < xa.size() || j < xb.size()) {
            const double na = i < xa.size() ? xa[i].loc : std::numeric_limits<double>::infinity();
            const double nb = j < xb.size() ? xb[j].loc : std::numeric_limits<double>::infinity();
            const double next = std::min(na, nb);
            area += std::abs(fa - fb) * (next - x);
            x = next;
            if (na == next) {
                fa += xa[i++].weight;
            }
            if (nb == next) {
                fb += xb[j++].weight;
            }
        }
        return area;
    }

    ParticleDistribution mixture(std::span<const ParticleDistribution> components, std::span<const double> weights)
    {
        if (components.size() != weights.size()) {
            throw std::invalid_argument("mixture: components and weights differ in length");
        }
        if (components.empty()) {
            throw std::invalid_argument("mixture: no components");
        }
        double total = 0.0;
        std::size_t n_atoms = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (!(weights[i] >= 0.0)) {
                throw std::invalid_argument("mixture: negative weight");
            }
            total += weights[i];
            n_atoms += components[i].size();
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw std::invalid_argument("mixture: weights must sum to one");
        }
        std::vector<Atom> atoms;
        atoms.reserve(n_atoms);
        for (std::size_t i = 0; i < components.size(); ++i) {
            if (weights[i] == 0.0) {
                continue;
            }
            for (const auto &a : components[i].atoms()) {
                atoms.push_back({a.loc, a.weight * weights[i]});
            }
        }
        return ParticleDistribution::from_atoms(std::move(atoms));
    }

    ParticleDistribution uniform_mixture(std::span<const ParticleDistribution> components)
    {
        std::vector<double> w(components.size(), 1.0 / static_cast<double>(components.size()));
        if (!w.empty()) {
            // Keep the exact sum at one for odd counts.
            w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
        }
        return mixture(components, w);
    }

    ParticleDistribution pushforward_affine(const ParticleDistribution &d, double r, double gamma)
    {
        std::vector<Atom> atoms(d.atoms().begin(), d.atoms().end());
        for (auto &a : atoms) {
            a.loc = r + gamma * a.loc;
        }
        return ParticleDistribution::from_atoms(std::move(atoms));
    }

    ParticleDistribution convolve(const ParticleDistribution &a, const ParticleDistribution &b)
    {
        std::vector<Atom> atoms;
        atoms.reserve(a.size() * b.size());
        for (const auto &x : a.atoms()) {
            for (const auto &y : b.atoms()) {
                atoms.push_back({x.loc + y.loc, x.weight * y.weight});
            }
        }
        return ParticleDistribution::from_atoms(std::move(atoms));
    }

    std::string to_csv_row(const ParticleDistribution &d)
    {
        std::string out;
        char buf[32];
        bool first = true;
        for (const auto &a : d.atoms()) {
            if (!first) {
                out += ',';
            }
            first = false;
            out += format_double(a.loc, buf);
            out += ',';
            out += format_double(a.weight, buf);
        }
        return out;
    }

    ParticleDistribution from_csv_row(const std::string &row)
    {
        std::vector<double> values;
        std::stringstream ss(row);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                values.push_back(std::stod(cell));
            } catch (const std::exception &) {
                throw std::invalid_argument("particle csv: cannot parse '" + cell + "'");
            }
        }
        if (values.empty() || values.size() % 2 != 0) {
            throw std::invalid_argument("particle csv: expected loc,weight pairs");
        }
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < values.size(); i += 2) {
            atoms.push_back({values[i], values[i + 1]});
        }
        return ParticleDistribution::from_atoms(std::move(atoms));
    }
}
