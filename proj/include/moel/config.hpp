#pragma once

#include <map>
#include <string>
#include <string_view>

#include "moel/gan.hpp"

namespace moel {

struct ExperimentConfig {
    TrainConfig train;
    std::string corpus_path = "data/corpus.txt";
    std::string vocab_path; // empty: built-in vocabulary
    std::size_t trials = 1;
    std::string output_dir = "runs/default";
    double theta = 0.1;
    std::string profile = "full";
};

/// Small settings for quick runs: lambda=8, T=20, n=10, T_w=30, with both
/// learning rates scaled by 100/30 to keep lr * T_w. "full" restores the defaults.
void apply_profile(ExperimentConfig& cfg, std::string_view profile);

/// Sets one `key = value` field. Unknown keys and bad values throw
/// InvalidConfig naming the key.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Parses a flat key-value file. A `profile` key is applied before the other
/// keys regardless of its position.
void apply_config_text(ExperimentConfig& cfg, std::string_view text, const std::string& origin = "<text>");
void load_config_file(ExperimentConfig& cfg, const std::string& path);

/// Every field as `key = value`, one per line, in a fixed order.
std::string dump_config(const ExperimentConfig& cfg);

} // namespace moel
