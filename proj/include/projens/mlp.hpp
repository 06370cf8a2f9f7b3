#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace projens
{
    /// Activations of one forward pass, kept for backpropagation.
    struct MlpCache
    {
        /// values[0] is the input; values[l] the output of layer l (rectified
        /// for hidden layers, linear for the last).
        std::vector<std::vector<double>> values;

        std::span<const double> output() const { return values.back(); }
    };

    /// Dense feed-forward network with rectifier hidden layers and a linear
    /// output layer. All parameters live in one flat vector; layer l stores
    /// its weights input-major (w[i * out + j]) followed by its biases.
    class Mlp
    {
    public:
        /// Zero-initialized network. widths = {input, hidden..., output}.
        explicit Mlp(std::vector<std::size_t> widths);

        const std::vector<std::size_t> &widths() const { return widths_; }
        std::size_t input_size() const { return widths_.front(); }
        std::size_t output_size() const { return widths_.back(); }
        std::size_t n_layers() const { return widths_.size() - 1; }
        std::size_t n_params() const { return params_.size(); }
        std::span<const double> params() const { return params_; }
        std::span<double> params() { return params_; }

        std::span<const double> weights(std::size_t layer) const;
        std::span<const double> biases(std::size_t layer) const;

        /// Throws std::invalid_argument if x has the wrong length. Zero
        /// inputs are skipped, so one-hot inputs cost a single row lookup.
        void forward(std::span<const double> x, MlpCache &cache) const;
        std::vector<double> forward(std::span<const double> x) const;

        /// Accumulates dLoss/dparams into `grad` (length n_params) given
        /// dLoss/doutput for the pass recorded in `cache`.
        void backward(const MlpCache &cache, std::span<const double> grad_output, std::span<double> grad) const;

    private:
        std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
        std::size_t bias_offset(std::size_t layer) const { return offsets_[layer] + widths_[layer] * widths_[layer + 1]; }

        std::vector<std::size_t> widths_;
        std::vector<std::size_t> offsets_;
        std::vector<double> params_;
    };

    /// He initialization: weights ~ N(0, 2 / fan_in) truncated at two
    /// standard deviations by resampling, biases zero.
    Mlp init_mlp(std::uint64_t seed, std::vector<std::size_t> widths);

    struct AdamConfig
    {
        double learning_rate = 5e-4;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double epsilon = 1e-3 / 128.0;
    };

    class AdamState
    {
    public:
        AdamState(std::size_t n_params, AdamConfig config);

        const AdamConfig &config() const { return config_; }
        std::uint64_t step() const { return step_; }
        std::span<const double> first_moment() const { return m_; }
        std::span<const double> second_moment() const { return v_; }

    private:
        friend void adam_step(Mlp &net, std::span<const double> grads, AdamState &state);

        AdamConfig config_;
        std::vector<double> m_;
        std::vector<double> v_;
        std::uint64_t step_ = 0;
    };

    /// Bias-corrected Adam update. Throws std::runtime_error naming the
    /// offending index if any gradient is non-finite; nothing is modified then.
    void adam_step(Mlp &net, std::span<const double> grads, AdamState &state);

    /// A fixed, randomly initialized network whose output is scaled and added
    /// to a learner's logits. Never trained.
    class PriorNet
    {
    public:
        PriorNet(Mlp net, double scale);

        const Mlp &net() const { return net_; }
        double scale() const { return scale_; }
        /// Adds scale * prior(x) to `logits`. No-op when scale is zero.
        void add_to(std::span<const double> x, std::span<double> logits) const;

    private:
        Mlp net_;
        double scale_;
    };

    /// Versioned text checkpoint: header line, widths, then parameters in
    /// storage order with round-trip precision.
    void save_checkpoint(std::ostream &out, const Mlp &net);
    Mlp load_checkpoint(std::istream &in);
}
