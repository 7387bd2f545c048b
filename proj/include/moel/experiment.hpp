#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moel/config.hpp"
#include "moel/gan.hpp"

namespace moel {

/// One row of the per-generation objective log.
struct ObjectiveRow {
    int generation = 0;
    std::uint64_t member_id = 0;
    std::string lineage;
    MetricValues metrics;
};

inline constexpr const char* kObjectiveCsvHeader = "generation,member_id,lineage,f_P,f_PD,f_CD,P,PD,CD";

std::string format_objective_row(const ObjectiveRow& row);
std::vector<ObjectiveRow> read_objective_csv(const std::string& path);

struct ManifestEntry {
    std::uint64_t id = 0;
    std::string lineage;
    int born = 0;
    std::string checkpoint; // relative to the run directory
    bool pareto = false;
    MetricValues metrics;
};

struct RunManifest {
    std::string mode;
    std::uint64_t seed = 0;
    int final_generation = 0;
    std::vector<ManifestEntry> members;
};

std::string manifest_json(const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

struct RunArtifacts {
    std::string directory;
    std::string objectives_csv;
    std::string manifest;
    std::vector<std::string> checkpoints;
    std::vector<std::string> samples;
    std::vector<std::string> renders;
};

/// Loads the vocabulary named by the config, or the built-in one.
TileVocabulary load_vocabulary(const ExperimentConfig& cfg);

/// One trial: warm start, evaluate, then T-1 rounds of discriminator refresh,
/// variation, offspring evaluation and survival selection. Generation 1 is
/// the warm-started population. Writes everything under `directory`.
RunArtifacts run_trial(const ExperimentConfig& cfg, const std::vector<Level>& corpus, const TileVocabulary& vocab,
                       const std::string& directory);

/// All trials of a config. A single trial writes straight into the output
/// directory; several trials go to `trial_<k>` subdirectories with seed
/// `seed + k`.
std::vector<RunArtifacts> run_experiment(const ExperimentConfig& cfg);

/// Reads a run's effective config back from `config.txt`.
ExperimentConfig load_run_config(const std::string& run_dir);

/// Re-evaluates a member checkpoint on its own evaluation stream.
MetricValues reevaluate_member(const ExperimentConfig& cfg, const TileVocabulary& vocab, const std::string& checkpoint,
                               std::uint64_t member_id, int born);

struct SampleOutputs {
    std::vector<std::string> levels;
    std::vector<std::string> renders;
    std::vector<std::string> traces;
};

/// Decodes `count` levels from a generator checkpoint, simulates them and
/// writes level text, trace render and trace CSV per level.
SampleOutputs sample_checkpoint(const std::string& checkpoint, const TrainConfig& cfg, const TileVocabulary& vocab,
                                std::size_t count, std::uint64_t seed, const std::string& out_dir);

} // namespace moel
