#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace moel {

using Rng = std::mt19937_64;

/// Row-major b x cols matrix of doubles.
struct Batch {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Batch() = default;
    Batch(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    bool operator==(const Batch&) const = default;
};

using NoiseBatch = Batch;

/// i.i.d. standard normal entries drawn from `rng`.
NoiseBatch gaussian_noise_batch(std::size_t rows, std::size_t z_dim, Rng& rng);

struct LayerShape {
    std::size_t in;
    std::size_t out;
    std::size_t weight_offset; // out x in, row-major
    std::size_t bias_offset;
    bool operator==(const LayerShape&) const = default;
};

/// Dense network with leaky-rectifier hidden layers and an identity output.
/// All parameters live in one flat buffer so that gradients and optimiser
/// moments share its layout.
class MlpParams {
public:
    MlpParams() = default;
    explicit MlpParams(std::vector<std::size_t> dims, double leak = 0.2);

    /// Uniform in +-sqrt(6 / (fan_in + fan_out)) for weights, zero biases.
    static MlpParams glorot(std::vector<std::size_t> dims, Rng& rng, double leak = 0.2);

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const std::vector<LayerShape>& layers() const noexcept { return layers_; }
    std::size_t input_size() const noexcept { return dims_.front(); }
    std::size_t output_size() const noexcept { return dims_.back(); }
    double leak() const noexcept { return leak_; }

    std::vector<double>& values() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<double> weights(std::size_t layer);
    std::span<const double> weights(std::size_t layer) const;
    std::span<double> bias(std::size_t layer);
    std::span<const double> bias(std::size_t layer) const;

    bool same_shape(const MlpParams& other) const noexcept
    {
        return dims_ == other.dims_ && values_.size() == other.values_.size();
    }
    bool operator==(const MlpParams&) const = default;

private:
    std::vector<std::size_t> dims_;
    std::vector<LayerShape> layers_;
    std::vector<double> values_;
    double leak_ = 0.2;
};

/// Gradients share MlpParams' flat layout.
using Gradient = std::vector<double>;

/// Pre-activations of every layer for one forward pass.
struct ForwardCache {
    Batch input;
    std::vector<Batch> pre;  // per layer, rows x out
    std::vector<Batch> post; // per layer; last entry is the network output
    const Batch& output() const { return post.back(); }
};

ForwardCache forward(const MlpParams& net, const Batch& input);
Batch forward_output(const MlpParams& net, const Batch& input);

/// Backpropagates dL/d(output). Parameter gradients are written when
/// `param_grad` is non-null; the input gradient is returned when requested.
Batch backward(const MlpParams& net, const ForwardCache& cache, const Batch& output_grad, Gradient* param_grad,
               bool want_input_grad);

/// Per-cell softmax over `channels` consecutive values, applied row-wise.
Batch cell_softmax(const Batch& logits, std::size_t channels);
/// Chain rule through cell_softmax given its output `probs`.
Batch cell_softmax_backward(const Batch& probs, const Batch& grad, std::size_t channels);

/// Generator: latent rows -> per-cell logits (H*W*V per row).
Batch generator_forward(const MlpParams& generator, const NoiseBatch& z);
/// Generator logits pushed through cell softmax; the form the discriminator sees.
Batch generator_levels(const MlpParams& generator, const NoiseBatch& z, std::size_t channels);
/// Raw, unsquashed scores, one per row.
std::vector<double> discriminator_forward(const MlpParams& discriminator, const Batch& x);

struct LossAndGradient {
    double loss = 0.0;
    Gradient grad;
};

/// L = mean max(0, 1 - D(real)) + mean max(0, 1 + D(fake)). Fakes are
/// constants here. Subgradient at a hinge corner is zero.
LossAndGradient d_hinge_gradients(const MlpParams& discriminator, const Batch& real, const Batch& fake);

/// L = mean -D(softmax(G(z))), gradient w.r.t. generator parameters.
LossAndGradient g_minmax_gradients(const MlpParams& generator, const MlpParams& discriminator,
                                   const NoiseBatch& z, std::size_t channels);

/// L = mean (D(softmax(G(z))) - 1)^2, gradient w.r.t. generator parameters.
LossAndGradient g_lsq_gradients(const MlpParams& generator, const MlpParams& discriminator,
                                const NoiseBatch& z, std::size_t channels);

struct AdamConfig {
    double lr = 1e-4;
    double beta1 = 0.0;
    double beta2 = 0.9;
    double eps = 1e-8;
    double weight_decay = 0.0;
    bool operator==(const AdamConfig&) const = default;
};

struct AdamState {
    AdamConfig config;
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;

    AdamState() = default;
    AdamState(AdamConfig cfg, std::size_t n) : config(cfg), m(n, 0.0), v(n, 0.0) {}
    bool operator==(const AdamState&) const = default;
};

/// Decoupled weight decay (params *= 1 - lr*wd) followed by a bias-corrected
/// Adam step. Throws on non-finite gradients before touching anything.
void adam_update(MlpParams& params, std::span<const double> grad, AdamState& state);

/// JSON checkpoint; doubles round-trip exactly.
std::string checkpoint_json(const MlpParams& net, const std::string& note = {});
MlpParams parse_checkpoint(const std::string& text);
void save_checkpoint(const MlpParams& net, const std::string& path, const std::string& note = {});
MlpParams load_checkpoint(const std::string& path);

} // namespace moel
