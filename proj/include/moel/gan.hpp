#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moel/level.hpp"
#include "moel/metrics.hpp"
#include "moel/moea.hpp"
#include "moel/neural.hpp"

namespace moel {

/// Defaults follow the reference hyperparameter table: lambda=30, T_w=100,
/// T=100, b=32, n=30, z=128, Adam(beta1=0, beta2=0.9), generator lr 1e-4,
/// discriminator lr 4e-4 with weight decay 5e-4, T_g=T_d=1.
struct TrainConfig {
    std::size_t lambda = 30;
    std::size_t generations = 100;
    std::size_t warm_epochs = 100;
    std::size_t d_iters = 1;
    std::size_t g_iters = 1;
    std::size_t batch = 32;
    std::size_t eval_samples = 30;
    std::size_t z_dim = 128;
    std::size_t height = 14;
    std::size_t width = 28;
    std::size_t pattern_k = 2;
    std::vector<std::size_t> g_hidden{256, 256};
    std::vector<std::size_t> d_hidden{256, 64};
    AdamConfig g_adam{1e-4, 0.0, 0.9, 1e-8, 0.0};
    AdamConfig d_adam{4e-4, 0.0, 0.9, 1e-8, 5e-4};
    PdScaling pd_scaling;
    ObjectiveMode mode = ObjectiveMode::P_PD_CD;
    std::uint64_t seed = 1;

    /// Throws InvalidConfig naming the offending field.
    void validate() const;
};

/// Named purposes of the derived random streams. Every stream is a pure
/// function of (master seed, purpose, a, b).
enum class StreamTag : std::uint64_t {
    InitGenerator = 1,
    InitDiscriminator,
    WarmShuffle,
    WarmFakeNoise,
    WarmGeneratorNoise,
    RefreshShuffle,
    RefreshFakeNoise,
    Mutation,
    Evaluation,
};

Rng derive_stream(std::uint64_t master, StreamTag tag, std::uint64_t a = 0, std::uint64_t b = 0);

struct Generator {
    MlpParams net;
    AdamState adam;
    bool operator==(const Generator&) const = default;
};

struct Discriminator {
    MlpParams net;
    AdamState adam;
    bool operator==(const Discriminator&) const = default;
};

struct PopulationMember {
    Generator generator;
    std::optional<MetricValues> metrics;
    std::uint64_t id = 0;
    std::optional<std::uint64_t> parent;
    std::string lineage; // "init", or "<parent id>:minmax" / "<parent id>:lsq"
    int born = 0;

    const ObjectiveVector& objectives() const;
};

std::vector<std::size_t> generator_dims(const TrainConfig& cfg, std::size_t vocab_size);
std::vector<std::size_t> discriminator_dims(const TrainConfig& cfg, std::size_t vocab_size);

/// Freshly initialised generators and discriminator.
std::vector<Generator> init_generators(const TrainConfig& cfg, std::size_t vocab_size);
Discriminator init_discriminator(const TrainConfig& cfg, std::size_t vocab_size);

/// One hinge update of the shared discriminator on a real batch and an
/// equally sized fake batch split across the generators: floor(r/lambda)
/// each, remainder to the earliest generators.
void discriminator_step(Discriminator& d, std::span<const Level> real, std::span<const Generator> generators,
                        std::size_t vocab_size, Rng& noise_rng);

/// Corpus batches of at most `batch` levels, order shuffled with `rng`.
std::vector<std::vector<std::size_t>> corpus_batches(std::size_t corpus_size, std::size_t batch, Rng& rng);

struct WarmStartResult {
    std::vector<Generator> generators;
    Discriminator discriminator;
};

using EpochHook = std::function<void(std::size_t epoch, const std::vector<Generator>&, const Discriminator&)>;

/// Joint pre-training: per corpus batch, one discriminator update then one
/// minmax step for every generator. `hook` sees the state after each epoch
/// (and once before the first, with epoch 0).
WarmStartResult warm_start(std::span<const Level> corpus, const TrainConfig& cfg, std::size_t vocab_size,
                           const EpochHook& hook = {});
WarmStartResult warm_start(std::span<const Level> corpus, const TrainConfig& cfg, std::size_t vocab_size,
                           std::vector<Generator> generators, Discriminator discriminator, const EpochHook& hook = {});

/// T_d passes of discriminator updates over the corpus. `generation` selects
/// the random streams.
void refresh_discriminator(Discriminator& d, std::span<const Level> corpus, std::span<const Generator> generators,
                           const TrainConfig& cfg, std::size_t vocab_size, std::uint64_t generation);

enum class MutationKind { Minmax, LeastSquares };

/// Copies `parent` and takes T_g steps of the given loss against `d`.
Generator mutate(const Generator& parent, const Discriminator& d, MutationKind kind, const TrainConfig& cfg,
                 std::size_t vocab_size, Rng& rng);

/// Two offspring per parent in order [p1-minmax, p1-lsq, p2-minmax, ...].
/// Offspring ids start at `next_id`; the returned members are unevaluated.
std::vector<PopulationMember> variation(std::span<const PopulationMember> parents, const Discriminator& d,
                                        const TrainConfig& cfg, std::size_t vocab_size, int generation,
                                        std::uint64_t next_id);

/// Decodes `count` latent samples into levels.
std::vector<Level> sample_levels(const MlpParams& generator, const TrainConfig& cfg, std::size_t vocab_size,
                                 std::size_t count, Rng& rng);

/// Samples n levels from the member's evaluation stream and computes all
/// three metrics.
MetricValues evaluate_generator(const MlpParams& generator, const TrainConfig& cfg, const TileVocabulary& vocab,
                                Rng& rng);

/// Stream for a member's evaluation: (master seed, member id, birth generation).
Rng evaluation_stream(const TrainConfig& cfg, std::uint64_t member_id, int born);

/// Mean TPJS between each sampled level and the pooled corpus distribution.
double mean_tpjs_to_corpus(std::span<const Level> samples, const PatternDistribution& corpus_patterns);

} // namespace moel
