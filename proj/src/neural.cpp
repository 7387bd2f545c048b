#include "moel/neural.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "moel/error.hpp"
#include "moel/kernels.hpp"

namespace moel {

NoiseBatch gaussian_noise_batch(std::size_t rows, std::size_t z_dim, Rng& rng)
{
    NoiseBatch z(rows, z_dim);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : z.data) v = normal(rng);
    return z;
}

MlpParams::MlpParams(std::vector<std::size_t> dims, double leak) : dims_(std::move(dims)), leak_(leak)
{
    if (dims_.size() < 2) throw Error(ErrorKind::ShapeMismatch, "network needs at least one layer");
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        if (dims_[l] == 0 || dims_[l + 1] == 0) throw Error(ErrorKind::ShapeMismatch, "zero-width layer");
        LayerShape s{dims_[l], dims_[l + 1], offset, offset + dims_[l] * dims_[l + 1]};
        offset = s.bias_offset + s.out;
        layers_.push_back(s);
    }
    values_.assign(offset, 0.0);
}

MlpParams MlpParams::glorot(std::vector<std::size_t> dims, Rng& rng, double leak)
{
    MlpParams net(std::move(dims), leak);
    for (std::size_t l = 0; l < net.layers_.size(); ++l) {
        const auto& s = net.layers_[l];
        const double limit = std::sqrt(6.0 / static_cast<double>(s.in + s.out));
        std::uniform_real_distribution<double> uni(-limit, limit);
        for (auto& w : net.weights(l)) w = uni(rng);
    }
    return net;
}

std::span<double> MlpParams::weights(std::size_t layer)
{
    const auto& s = layers_.at(layer);
    return {values_.data() + s.weight_offset, s.in * s.out};
}

std::span<const double> MlpParams::weights(std::size_t layer) const
{
    const auto& s = layers_.at(layer);
    return {values_.data() + s.weight_offset, s.in * s.out};
}

std::span<double> MlpParams::bias(std::size_t layer)
{
    const auto& s = layers_.at(layer);
    return {values_.data() + s.bias_offset, s.out};
}

std::span<const double> MlpParams::bias(std::size_t layer) const
{
    const auto& s = layers_.at(layer);
    return {values_.data() + s.bias_offset, s.out};
}

namespace {

// out[s][o] = b[o] + W[o] . x[s]; weight rows stay hot across the batch.
void dense_forward(const MlpParams& net, std::size_t layer, const Batch& x, Batch& out)
{
    const auto& shape = net.layers()[layer];
    auto w = net.weights(layer);
    auto b = net.bias(layer);
    out = Batch(x.rows, shape.out);
    for (std::size_t o = 0; o < shape.out; ++o) {
        const double* wrow = w.data() + o * shape.in;
        for (std::size_t s = 0; s < x.rows; ++s)
            out.data[s * shape.out + o] = b[o] + kernels::dot(wrow, x.data.data() + s * shape.in, shape.in);
    }
}

} // namespace

ForwardCache forward(const MlpParams& net, const Batch& input)
{
    if (input.cols != net.input_size())
        throw Error(ErrorKind::ShapeMismatch, "input width " + std::to_string(input.cols) + ", network expects " +
                                                  std::to_string(net.input_size()));
    ForwardCache cache;
    cache.input = input;
    const std::size_t n_layers = net.layers().size();
    cache.pre.resize(n_layers);
    cache.post.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        const Batch& x = l == 0 ? cache.input : cache.post[l - 1];
        dense_forward(net, l, x, cache.pre[l]);
        cache.post[l] = cache.pre[l];
        if (l + 1 < n_layers)
            for (auto& v : cache.post[l].data)
                if (v < 0.0) v *= net.leak();
    }
    return cache;
}

Batch forward_output(const MlpParams& net, const Batch& input)
{
    return forward(net, input).post.back();
}

Batch backward(const MlpParams& net, const ForwardCache& cache, const Batch& output_grad, Gradient* param_grad,
               bool want_input_grad)
{
    const std::size_t n_layers = net.layers().size();
    if (output_grad.cols != net.output_size() || output_grad.rows != cache.input.rows)
        throw Error(ErrorKind::ShapeMismatch, "output gradient shape does not match the forward pass");
    if (param_grad) {
        if (param_grad->size() != net.size()) param_grad->assign(net.size(), 0.0);
    }

    Batch g = output_grad;
    for (std::size_t l = n_layers; l-- > 0;) {
        const auto& shape = net.layers()[l];
        if (l + 1 < n_layers) {
            const auto& pre = cache.pre[l].data;
            for (std::size_t i = 0; i < g.data.size(); ++i)
                if (pre[i] <= 0.0) g.data[i] *= net.leak();
        }
        const Batch& x = l == 0 ? cache.input : cache.post[l - 1];
        auto w = net.weights(l);

        if (param_grad) {
            double* dw = param_grad->data() + shape.weight_offset;
            double* db = param_grad->data() + shape.bias_offset;
            for (std::size_t o = 0; o < shape.out; ++o) {
                double* dwrow = dw + o * shape.in;
                for (std::size_t s = 0; s < x.rows; ++s) {
                    const double go = g.data[s * shape.out + o];
                    if (go == 0.0) continue;
                    kernels::axpy(go, x.data.data() + s * shape.in, dwrow, shape.in);
                    db[o] += go;
                }
            }
        }

        if (l == 0 && !want_input_grad) return {};
        Batch dx(x.rows, shape.in);
        for (std::size_t o = 0; o < shape.out; ++o) {
            const double* wrow = w.data() + o * shape.in;
            for (std::size_t s = 0; s < x.rows; ++s) {
                const double go = g.data[s * shape.out + o];
                if (go == 0.0) continue;
                kernels::axpy(go, wrow, dx.data.data() + s * shape.in, shape.in);
            }
        }
        g = std::move(dx);
    }
    return g;
}

Batch cell_softmax(const Batch& logits, std::size_t channels)
{
    if (channels == 0 || logits.cols % channels != 0)
        throw Error(ErrorKind::ShapeMismatch, "row width is not a multiple of the channel count");
    Batch out(logits.rows, logits.cols);
    for (std::size_t i = 0; i < logits.data.size(); i += channels) {
        const double* in = logits.data.data() + i;
        double* p = out.data.data() + i;
        double mx = in[0];
        for (std::size_t v = 1; v < channels; ++v) mx = std::max(mx, in[v]);
        double sum = 0.0;
        for (std::size_t v = 0; v < channels; ++v) {
            p[v] = std::exp(in[v] - mx);
            sum += p[v];
        }
        for (std::size_t v = 0; v < channels; ++v) p[v] /= sum;
    }
    return out;
}

Batch cell_softmax_backward(const Batch& probs, const Batch& grad, std::size_t channels)
{
    if (probs.rows != grad.rows || probs.cols != grad.cols)
        throw Error(ErrorKind::ShapeMismatch, "softmax gradient shape");
    Batch out(grad.rows, grad.cols);
    for (std::size_t i = 0; i < grad.data.size(); i += channels) {
        const double* p = probs.data.data() + i;
        const double* g = grad.data.data() + i;
        double inner = 0.0;
        for (std::size_t v = 0; v < channels; ++v) inner += p[v] * g[v];
        for (std::size_t v = 0; v < channels; ++v) out.data[i + v] = p[v] * (g[v] - inner);
    }
    return out;
}

Batch generator_forward(const MlpParams& generator, const NoiseBatch& z)
{
    return forward_output(generator, z);
}

Batch generator_levels(const MlpParams& generator, const NoiseBatch& z, std::size_t channels)
{
    return cell_softmax(generator_forward(generator, z), channels);
}

std::vector<double> discriminator_forward(const MlpParams& discriminator, const Batch& x)
{
    if (discriminator.output_size() != 1) throw Error(ErrorKind::ShapeMismatch, "discriminator must emit one score");
    return forward_output(discriminator, x).data;
}

LossAndGradient d_hinge_gradients(const MlpParams& discriminator, const Batch& real, const Batch& fake)
{
    if (real.cols != fake.cols) throw Error(ErrorKind::ShapeMismatch, "real and fake batches differ in width");
    if (real.rows == 0 || fake.rows == 0) throw Error(ErrorKind::ShapeMismatch, "empty batch");
    LossAndGradient out;
    out.grad.assign(discriminator.size(), 0.0);

    auto real_cache = forward(discriminator, real);
    Batch real_grad(real.rows, 1);
    const double wr = 1.0 / static_cast<double>(real.rows);
    for (std::size_t i = 0; i < real.rows; ++i) {
        const double s = real_cache.output().data[i];
        if (s < 1.0) {
            out.loss += wr * (1.0 - s);
            real_grad.data[i] = -wr;
        }
    }
    backward(discriminator, real_cache, real_grad, &out.grad, false);

    auto fake_cache = forward(discriminator, fake);
    Batch fake_grad(fake.rows, 1);
    const double wf = 1.0 / static_cast<double>(fake.rows);
    for (std::size_t i = 0; i < fake.rows; ++i) {
        const double s = fake_cache.output().data[i];
        if (s > -1.0) {
            out.loss += wf * (1.0 + s);
            fake_grad.data[i] = wf;
        }
    }
    backward(discriminator, fake_cache, fake_grad, &out.grad, false);
    return out;
}

namespace {

// dscore(score, weight) returns (loss term, dL/dscore) for one row.
template <typename ScoreLoss>
LossAndGradient generator_gradients(const MlpParams& generator, const MlpParams& discriminator,
                                    const NoiseBatch& z, std::size_t channels, ScoreLoss score_loss)
{
    if (generator.output_size() != discriminator.input_size())
        throw Error(ErrorKind::ShapeMismatch, "generator output does not feed the discriminator");
    auto g_cache = forward(generator, z);
    Batch probs = cell_softmax(g_cache.output(), channels);
    auto d_cache = forward(discriminator, probs);

    LossAndGradient out;
    Batch score_grad(z.rows, 1);
    const double w = 1.0 / static_cast<double>(z.rows);
    for (std::size_t i = 0; i < z.rows; ++i) {
        auto [loss, grad] = score_loss(d_cache.output().data[i]);
        out.loss += w * loss;
        score_grad.data[i] = w * grad;
    }
    Batch dprobs = backward(discriminator, d_cache, score_grad, nullptr, true);
    Batch dlogits = cell_softmax_backward(probs, dprobs, channels);
    out.grad.assign(generator.size(), 0.0);
    backward(generator, g_cache, dlogits, &out.grad, false);
    return out;
}

} // namespace

LossAndGradient g_minmax_gradients(const MlpParams& generator, const MlpParams& discriminator,
                                   const NoiseBatch& z, std::size_t channels)
{
    return generator_gradients(generator, discriminator, z, channels,
                               [](double s) { return std::pair{-s, -1.0}; });
}

LossAndGradient g_lsq_gradients(const MlpParams& generator, const MlpParams& discriminator,
                                const NoiseBatch& z, std::size_t channels)
{
    return generator_gradients(generator, discriminator, z, channels,
                               [](double s) { return std::pair{(s - 1.0) * (s - 1.0), 2.0 * (s - 1.0)}; });
}

void adam_update(MlpParams& params, std::span<const double> grad, AdamState& state)
{
    auto& p = params.values();
    if (grad.size() != p.size() || state.m.size() != p.size() || state.v.size() != p.size())
        throw Error(ErrorKind::ShapeMismatch, "adam: parameter, gradient and moment sizes differ");
    for (std::size_t i = 0; i < grad.size(); ++i)
        if (!std::isfinite(grad[i])) throw Error(ErrorKind::NonFiniteGradient, "gradient entry " + std::to_string(i));

    const auto& c = state.config;
    ++state.t;
    if (c.weight_decay != 0.0) kernels::scale(1.0 - c.lr * c.weight_decay, p.data(), p.size());
    const double t = static_cast<double>(state.t);
    const double bc1 = 1.0 - std::pow(c.beta1, t);
    const double bc2 = 1.0 - std::pow(c.beta2, t);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double g = grad[i];
        state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * g;
        state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        p[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
    }
}

std::string checkpoint_json(const MlpParams& net, const std::string& note)
{
    nlohmann::json j;
    j["arch"] = net.dims();
    j["activation"] = "leaky_relu";
    j["leak"] = net.leak();
    auto layers = nlohmann::json::array();
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        auto w = net.weights(l);
        auto b = net.bias(l);
        layers.push_back({{"weights", std::vector<double>(w.begin(), w.end())},
                          {"bias", std::vector<double>(b.begin(), b.end())}});
    }
    j["params"] = std::move(layers);
    j["rng_note"] = note;
    return j.dump();
}

MlpParams parse_checkpoint(const std::string& text)
{
    try {
        auto j = nlohmann::json::parse(text);
        auto dims = j.at("arch").get<std::vector<std::size_t>>();
        if (j.at("activation").get<std::string>() != "leaky_relu")
            throw Error(ErrorKind::CorruptCheckpoint, "unsupported activation");
        MlpParams net(dims, j.at("leak").get<double>());
        const auto& layers = j.at("params");
        if (layers.size() != net.layers().size())
            throw Error(ErrorKind::CorruptCheckpoint, "layer count does not match arch");
        for (std::size_t l = 0; l < net.layers().size(); ++l) {
            auto w = layers[l].at("weights").get<std::vector<double>>();
            auto b = layers[l].at("bias").get<std::vector<double>>();
            auto dw = net.weights(l);
            auto db = net.bias(l);
            if (w.size() != dw.size() || b.size() != db.size())
                throw Error(ErrorKind::CorruptCheckpoint, "layer " + std::to_string(l) + " has wrong size");
            std::copy(w.begin(), w.end(), dw.begin());
            std::copy(b.begin(), b.end(), db.begin());
        }
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::CorruptCheckpoint, e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::CorruptCheckpoint) throw;
        throw Error(ErrorKind::CorruptCheckpoint, e.what());
    }
}

void save_checkpoint(const MlpParams& net, const std::string& path, const std::string& note)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << checkpoint_json(net, note) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

MlpParams load_checkpoint(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_checkpoint(ss.str());
}

} // namespace moel
