#include "moel/gan.hpp"

#include <algorithm>
#include <numeric>

#include "moel/error.hpp"

namespace moel {

void TrainConfig::validate() const
{
    auto positive = [](std::size_t v, const char* name) {
        if (v == 0) throw Error(ErrorKind::InvalidConfig, std::string(name) + " must be positive");
    };
    positive(lambda, "lambda");
    positive(batch, "batch");
    positive(z_dim, "z_dim");
    positive(height, "height");
    positive(width, "width");
    positive(pattern_k, "pattern_k");
    if (eval_samples < 2) throw Error(ErrorKind::InvalidConfig, "eval_samples must be at least 2");
    if (pattern_k > std::min(height, width))
        throw Error(ErrorKind::InvalidConfig, "pattern_k larger than the level");
    for (auto h : g_hidden) positive(h, "g_hidden");
    for (auto h : d_hidden) positive(h, "d_hidden");
    for (const auto* a : {&g_adam, &d_adam})
        if (!(a->lr > 0.0) || a->beta1 < 0.0 || a->beta1 >= 1.0 || a->beta2 < 0.0 || a->beta2 >= 1.0 ||
            !(a->eps > 0.0) || a->weight_decay < 0.0)
            throw Error(ErrorKind::InvalidConfig, "invalid Adam settings");
    if (!(pd_scaling.scale != 0.0)) throw Error(ErrorKind::InvalidConfig, "pd_scale must be non-zero");
}

Rng derive_stream(std::uint64_t master, StreamTag tag, std::uint64_t a, std::uint64_t b)
{
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(master), hi(master), static_cast<std::uint32_t>(tag), lo(a), hi(a), lo(b), hi(b)};
    return Rng(seq);
}

const ObjectiveVector& PopulationMember::objectives() const
{
    if (!metrics) throw Error(ErrorKind::InvalidConfig, "member " + std::to_string(id) + " is unevaluated");
    return metrics->objectives;
}

std::vector<std::size_t> generator_dims(const TrainConfig& cfg, std::size_t vocab_size)
{
    std::vector<std::size_t> dims{cfg.z_dim};
    dims.insert(dims.end(), cfg.g_hidden.begin(), cfg.g_hidden.end());
    dims.push_back(cfg.height * cfg.width * vocab_size);
    return dims;
}

std::vector<std::size_t> discriminator_dims(const TrainConfig& cfg, std::size_t vocab_size)
{
    std::vector<std::size_t> dims{cfg.height * cfg.width * vocab_size};
    dims.insert(dims.end(), cfg.d_hidden.begin(), cfg.d_hidden.end());
    dims.push_back(1);
    return dims;
}

std::vector<Generator> init_generators(const TrainConfig& cfg, std::size_t vocab_size)
{
    std::vector<Generator> out;
    out.reserve(cfg.lambda);
    for (std::size_t j = 0; j < cfg.lambda; ++j) {
        auto rng = derive_stream(cfg.seed, StreamTag::InitGenerator, j);
        auto net = MlpParams::glorot(generator_dims(cfg, vocab_size), rng);
        AdamState adam(cfg.g_adam, net.size());
        out.push_back({std::move(net), std::move(adam)});
    }
    return out;
}

Discriminator init_discriminator(const TrainConfig& cfg, std::size_t vocab_size)
{
    auto rng = derive_stream(cfg.seed, StreamTag::InitDiscriminator);
    auto net = MlpParams::glorot(discriminator_dims(cfg, vocab_size), rng);
    AdamState adam(cfg.d_adam, net.size());
    return {std::move(net), std::move(adam)};
}

namespace {

void check_corpus(std::span<const Level> corpus, const TrainConfig& cfg)
{
    if (corpus.empty()) throw Error(ErrorKind::EmptyCorpus, "training corpus is empty");
    for (std::size_t i = 0; i < corpus.size(); ++i)
        if (corpus[i].height() != cfg.height || corpus[i].width() != cfg.width)
            throw Error(ErrorKind::ShapeMismatch, "corpus level " + std::to_string(i) + " is " +
                                                      std::to_string(corpus[i].height()) + "x" +
                                                      std::to_string(corpus[i].width()) + ", expected " +
                                                      std::to_string(cfg.height) + "x" + std::to_string(cfg.width));
}

Batch one_hot_batch(std::span<const Level> levels, std::size_t vocab_size)
{
    const std::size_t cols = levels.front().height() * levels.front().width() * vocab_size;
    Batch out(levels.size(), cols);
    for (std::size_t i = 0; i < levels.size(); ++i) one_hot_into(levels[i], vocab_size, out.row(i));
    return out;
}

void generator_step(Generator& g, const Discriminator& d, MutationKind kind, std::size_t batch, std::size_t z_dim,
                    std::size_t vocab_size, Rng& rng)
{
    auto z = gaussian_noise_batch(batch, z_dim, rng);
    auto lg = kind == MutationKind::Minmax ? g_minmax_gradients(g.net, d.net, z, vocab_size)
                                           : g_lsq_gradients(g.net, d.net, z, vocab_size);
    adam_update(g.net, lg.grad, g.adam);
}

} // namespace

void discriminator_step(Discriminator& d, std::span<const Level> real, std::span<const Generator> generators,
                        std::size_t vocab_size, Rng& noise_rng)
{
    if (real.empty() || generators.empty()) throw Error(ErrorKind::ShapeMismatch, "empty discriminator batch");
    Batch real_batch = one_hot_batch(real, vocab_size);
    Batch fake(real.size(), real_batch.cols);

    const std::size_t lambda = generators.size();
    const std::size_t share = real.size() / lambda;
    const std::size_t extra = real.size() % lambda;
    std::size_t row = 0;
    for (std::size_t j = 0; j < lambda; ++j) {
        const std::size_t count = share + (j < extra ? 1 : 0);
        if (count == 0) continue;
        auto z = gaussian_noise_batch(count, generators[j].net.input_size(), noise_rng);
        Batch levels = generator_levels(generators[j].net, z, vocab_size);
        std::copy(levels.data.begin(), levels.data.end(), fake.data.begin() + row * fake.cols);
        row += count;
    }
    auto lg = d_hinge_gradients(d.net, real_batch, fake);
    adam_update(d.net, lg.grad, d.adam);
}

std::vector<std::vector<std::size_t>> corpus_batches(std::size_t corpus_size, std::size_t batch, Rng& rng)
{
    std::vector<std::size_t> order(corpus_size);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < corpus_size; i += batch)
        out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(corpus_size, i + batch)));
    return out;
}

namespace {

std::vector<Level> gather(std::span<const Level> corpus, const std::vector<std::size_t>& idx)
{
    std::vector<Level> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(corpus[i]);
    return out;
}

} // namespace

WarmStartResult warm_start(std::span<const Level> corpus, const TrainConfig& cfg, std::size_t vocab_size,
                           const EpochHook& hook)
{
    return warm_start(corpus, cfg, vocab_size, init_generators(cfg, vocab_size),
                      init_discriminator(cfg, vocab_size), hook);
}

WarmStartResult warm_start(std::span<const Level> corpus, const TrainConfig& cfg, std::size_t vocab_size,
                           std::vector<Generator> generators, Discriminator discriminator, const EpochHook& hook)
{
    check_corpus(corpus, cfg);
    WarmStartResult out{std::move(generators), std::move(discriminator)};
    if (hook) hook(0, out.generators, out.discriminator);
    for (std::size_t epoch = 1; epoch <= cfg.warm_epochs; ++epoch) {
        auto shuffle = derive_stream(cfg.seed, StreamTag::WarmShuffle, epoch);
        auto batches = corpus_batches(corpus.size(), cfg.batch, shuffle);
        for (std::size_t bi = 0; bi < batches.size(); ++bi) {
            auto real = gather(corpus, batches[bi]);
            auto fake_rng = derive_stream(cfg.seed, StreamTag::WarmFakeNoise, epoch, bi);
            discriminator_step(out.discriminator, real, out.generators, vocab_size, fake_rng);
            for (std::size_t j = 0; j < out.generators.size(); ++j) {
                auto g_rng = derive_stream(cfg.seed, StreamTag::WarmGeneratorNoise, epoch, bi * out.generators.size() + j);
                generator_step(out.generators[j], out.discriminator, MutationKind::Minmax, cfg.batch, cfg.z_dim,
                               vocab_size, g_rng);
            }
        }
        if (hook) hook(epoch, out.generators, out.discriminator);
    }
    return out;
}

void refresh_discriminator(Discriminator& d, std::span<const Level> corpus, std::span<const Generator> generators,
                           const TrainConfig& cfg, std::size_t vocab_size, std::uint64_t generation)
{
    if (cfg.d_iters == 0) return;
    check_corpus(corpus, cfg);
    for (std::size_t e = 0; e < cfg.d_iters; ++e) {
        const std::uint64_t pass = generation * 1024 + e;
        auto shuffle = derive_stream(cfg.seed, StreamTag::RefreshShuffle, pass);
        auto batches = corpus_batches(corpus.size(), cfg.batch, shuffle);
        for (std::size_t bi = 0; bi < batches.size(); ++bi) {
            auto real = gather(corpus, batches[bi]);
            auto fake_rng = derive_stream(cfg.seed, StreamTag::RefreshFakeNoise, pass, bi);
            discriminator_step(d, real, generators, vocab_size, fake_rng);
        }
    }
}

Generator mutate(const Generator& parent, const Discriminator& d, MutationKind kind, const TrainConfig& cfg,
                 std::size_t vocab_size, Rng& rng)
{
    Generator child = parent;
    for (std::size_t e = 0; e < cfg.g_iters; ++e)
        generator_step(child, d, kind, cfg.batch, cfg.z_dim, vocab_size, rng);
    return child;
}

std::vector<PopulationMember> variation(std::span<const PopulationMember> parents, const Discriminator& d,
                                        const TrainConfig& cfg, std::size_t vocab_size, int generation,
                                        std::uint64_t next_id)
{
    std::vector<PopulationMember> offspring;
    offspring.reserve(parents.size() * 2);
    for (const auto& parent : parents) {
        for (auto kind : {MutationKind::Minmax, MutationKind::LeastSquares}) {
            PopulationMember child;
            child.id = next_id++;
            child.parent = parent.id;
            child.lineage = std::to_string(parent.id) + (kind == MutationKind::Minmax ? ":minmax" : ":lsq");
            child.born = generation;
            auto rng = derive_stream(cfg.seed, StreamTag::Mutation, child.id, static_cast<std::uint64_t>(generation));
            child.generator = mutate(parent.generator, d, kind, cfg, vocab_size, rng);
            offspring.push_back(std::move(child));
        }
    }
    return offspring;
}

std::vector<Level> sample_levels(const MlpParams& generator, const TrainConfig& cfg, std::size_t vocab_size,
                                 std::size_t count, Rng& rng)
{
    std::vector<Level> out;
    if (count == 0) return out;
    auto z = gaussian_noise_batch(count, cfg.z_dim, rng);
    Batch logits = generator_forward(generator, z);
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(decode_logits(logits.row(i), cfg.height, cfg.width, vocab_size));
    return out;
}

MetricValues evaluate_generator(const MlpParams& generator, const TrainConfig& cfg, const TileVocabulary& vocab,
                                Rng& rng)
{
    auto levels = sample_levels(generator, cfg, vocab.size(), cfg.eval_samples, rng);
    return evaluate_levels(levels, vocab, cfg.pattern_k, cfg.pd_scaling);
}

Rng evaluation_stream(const TrainConfig& cfg, std::uint64_t member_id, int born)
{
    return derive_stream(cfg.seed, StreamTag::Evaluation, member_id, static_cast<std::uint64_t>(born));
}

double mean_tpjs_to_corpus(std::span<const Level> samples, const PatternDistribution& corpus_patterns)
{
    if (samples.empty()) throw Error(ErrorKind::TooFewSamples, "no samples");
    double sum = 0.0;
    for (const auto& l : samples) sum += tpjs(extract_patterns(l, corpus_patterns.k), corpus_patterns);
    return sum / static_cast<double>(samples.size());
}

} // namespace moel
