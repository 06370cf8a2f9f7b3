#include "projens/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace projens
{
    namespace
    {
        constexpr const char *kCheckpointMagic = "projens-mlp";
        constexpr int kCheckpointVersion = 1;
    }

    Mlp::Mlp(std::vector<std::size_t> widths) : widths_(std::move(widths))
    {
        if (widths_.size() < 2) {
            throw std::invalid_argument("mlp needs at least an input and an output width");
        }
        std::size_t total = 0;
        for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
            if (widths_[l] == 0 || widths_[l + 1] == 0) {
                throw std::invalid_argument("mlp widths must be positive");
            }
            offsets_.push_back(total);
            total += widths_[l] * widths_[l + 1] + widths_[l + 1];
        }
        params_.assign(total, 0.0);
    }

    std::span<const double> Mlp::weights(std::size_t layer) const
    {
        return std::span(params_).subspan(weight_offset(layer), widths_[layer] * widths_[layer + 1]);
    }

    std::span<const double> Mlp::biases(std::size_t layer) const
    {
        return std::span(params_).subspan(bias_offset(layer), widths_[layer + 1]);
    }

    void Mlp::forward(std::span<const double> x, MlpCache &cache) const
    {
        if (x.size() != input_size()) {
            throw std::invalid_argument("mlp input has length " + std::to_string(x.size()) + ", expected " +
                                        std::to_string(input_size()));
        }
        const std::size_t n = n_layers();
        cache.values.resize(n + 1);
        cache.values[0].assign(x.begin(), x.end());
        for (std::size_t l = 0; l < n; ++l) {
            const std::size_t in = widths_[l];
            const std::size_t out = widths_[l + 1];
            const double *w = params_.data() + weight_offset(l);
            const double *b = params_.data() + bias_offset(l);
            const auto &src = cache.values[l];
            auto &dst = cache.values[l + 1];
            dst.assign(b, b + out);
            double *y = dst.data();
            for (std::size_t i = 0; i < in; ++i) {
                const double xi = src[i];
                if (xi == 0.0) {
                    continue;
                }
                const double *row = w + i * out;
                for (std::size_t j = 0; j < out; ++j) {
                    y[j] += xi * row[j];
                }
            }
            if (l + 1 < n) {
                for (std::size_t j = 0; j < out; ++j) {
                    y[j] = y[j] > 0.0 ? y[j] : 0.0;
                }
            }
        }
    }

    std::vector<double> Mlp::forward(std::span<const double> x) const
    {
        MlpCache cache;
        forward(x, cache);
        return std::move(cache.values.back());
    }

    void Mlp::backward(const MlpCache &cache, std::span<const double> grad_output, std::span<double> grad) const
    {
        if (grad_output.size() != output_size() || grad.size() != n_params()) {
            throw std::invalid_argument("mlp backward: gradient shape mismatch");
        }
        const std::size_t n = n_layers();
        std::vector<double> delta(grad_output.begin(), grad_output.end());
        std::vector<double> prev;
        for (std::size_t l = n; l-- > 0;) {
            const std::size_t in = widths_[l];
            const std::size_t out = widths_[l + 1];
            const double *w = params_.data() + weight_offset(l);
            double *gw = grad.data() + weight_offset(l);
            double *gb = grad.data() + bias_offset(l);
            const auto &src = cache.values[l];

            for (std::size_t j = 0; j < out; ++j) {
                gb[j] += delta[j];
            }
            const bool need_input_grad = l > 0;
            if (need_input_grad) {
                prev.assign(in, 0.0);
            }
            for (std::size_t i = 0; i < in; ++i) {
                const double xi = src[i];
                // Rectified units with zero output pass no gradient further
                // down and contribute nothing to the weight gradient.
                if (xi == 0.0) {
                    continue;
                }
                double *grow = gw + i * out;
                for (std::size_t j = 0; j < out; ++j) {
                    grow[j] += xi * delta[j];
                }
                if (need_input_grad) {
                    const double *row = w + i * out;
                    double acc = 0.0;
                    for (std::size_t j = 0; j < out; ++j) {
                        acc += row[j] * delta[j];
                    }
                    prev[i] = acc;
                }
            }
            if (need_input_grad) {
                delta.swap(prev);
            }
        }
    }

    Mlp init_mlp(std::uint64_t seed, std::vector<std::size_t> widths)
    {
        Mlp net(std::move(widths));
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        auto params = net.params();
        std::size_t offset = 0;
        for (std::size_t l = 0; l < net.n_layers(); ++l) {
            const std::size_t in = net.widths()[l];
            const std::size_t out = net.widths()[l + 1];
            const double std_dev = std::sqrt(2.0 / static_cast<double>(in));
            for (std::size_t k = 0; k < in * out; ++k) {
                double z = normal(rng);
                while (std::abs(z) > 2.0) {
                    z = normal(rng);
                }
                params[offset + k] = z * std_dev;
            }
            offset += in * out + out;
        }
        return net;
    }

    AdamState::AdamState(std::size_t n_params, AdamConfig config)
        : config_(config), m_(n_params, 0.0), v_(n_params, 0.0)
    {
        if (!(config.learning_rate > 0.0) || !(config.epsilon > 0.0)) {
            throw std::invalid_argument("adam: learning rate and epsilon must be positive");
        }
    }

    void adam_step(Mlp &net, std::span<const double> grads, AdamState &state)
    {
        if (grads.size() != net.n_params() || state.m_.size() != net.n_params()) {
            throw std::invalid_argument("adam: parameter/gradient shape mismatch");
        }
        for (std::size_t i = 0; i < grads.size(); ++i) {
            if (!std::isfinite(grads[i])) {
                throw std::runtime_error("adam: non-finite gradient at parameter " + std::to_string(i) + " (value " +
                                         std::to_string(grads[i]) + ")");
            }
        }
        const auto &c = state.config_;
        state.step_ += 1;
        const double t = static_cast<double>(state.step_);
        const double bias1 = 1.0 - std::pow(c.beta1, t);
        const double bias2 = 1.0 - std::pow(c.beta2, t);
        const double step_size = c.learning_rate / bias1;
        const double inv_sqrt_bias2 = 1.0 / std::sqrt(bias2);

        auto params = net.params();
        double *m = state.m_.data();
        double *v = state.v_.data();
        for (std::size_t i = 0; i < grads.size(); ++i) {
            const double g = grads[i];
            m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
            v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
            params[i] -= step_size * m[i] / (std::sqrt(v[i]) * inv_sqrt_bias2 + c.epsilon);
        }
    }

    PriorNet::PriorNet(Mlp net, double scale) : net_(std::move(net)), scale_(scale)
    {
        if (!(scale >= 0.0)) {
            throw std::invalid_argument("prior scale must be non-negative");
        }
    }

    void PriorNet::add_to(std::span<const double> x, std::span<double> logits) const
    {
        if (scale_ == 0.0) {
            return;
        }
        if (logits.size() != net_.output_size()) {
            throw std::invalid_argument("prior output size does not match logits");
        }
        const auto prior = net_.forward(x);
        for (std::size_t i = 0; i < logits.size(); ++i) {
            logits[i] += scale_ * prior[i];
        }
    }

    void save_checkpoint(std::ostream &out, const Mlp &net)
    {
        out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
        out << net.widths().size();
        for (auto w : net.widths()) {
            out << ' ' << w;
        }
        out << '\n';
        char buf[32];
        for (double p : net.params()) {
            std::snprintf(buf, sizeof(buf), "%.17g", p);
            out << buf << '\n';
        }
    }

    Mlp load_checkpoint(std::istream &in)
    {
        std::string magic;
        int version = 0;
        if (!(in >> magic >> version) || magic != kCheckpointMagic) {
            throw std::runtime_error("checkpoint: missing header");
        }
        if (version != kCheckpointVersion) {
            throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
        }
        std::size_t n_widths = 0;
        if (!(in >> n_widths) || n_widths < 2) {
            throw std::runtime_error("checkpoint: bad layer count");
        }
        std::vector<std::size_t> widths(n_widths);
        for (auto &w : widths) {
            if (!(in >> w)) {
                throw std::runtime_error("checkpoint: truncated widths");
            }
        }
        Mlp net(std::move(widths));
        for (auto &p : net.params()) {
            if (!(in >> p)) {
                throw std::runtime_error("checkpoint: truncated parameters");
            }
        }
        return net;
    }
}
