#pragma once

#include <span>
#include <vector>

#include "moel/level.hpp"
#include "moel/sim.hpp"

namespace moel {

/// Minimised objective triple. Smaller is better on every axis.
struct ObjectiveVector {
    double f_p = 0.0;
    double f_pd = 0.0;
    double f_cd = 0.0;

    double operator[](std::size_t i) const { return i == 0 ? f_p : (i == 1 ? f_pd : f_cd); }
    bool operator==(const ObjectiveVector&) const = default;
};

/// Raw metric values alongside their transforms.
struct MetricValues {
    double playability = 0.0;
    double player_diversity = 0.0;
    double content_diversity = 0.0;
    ObjectiveVector objectives;
};

/// Affine constants of the player-diversity transform,
/// f_PD = (offset - PD) / scale.
struct PdScaling {
    double offset = 200.0;
    double scale = 100.0;
};

double transform_playability(double p) noexcept;
double transform_player_diversity(double pd, PdScaling scaling = {}) noexcept;
double transform_content_diversity(double cd) noexcept;

/// Dynamic time warping with Euclidean local cost.
double dtw(const Playtrace& a, const Playtrace& b);

/// Jensen-Shannon divergence, log base 2, between two pattern distributions.
double tpjs(const PatternDistribution& p, const PatternDistribution& q);

double playability(std::span<const SimResult> results);
double playability(std::span<const Level> levels, const TileVocabulary& vocab);

/// Mean DTW over unordered pairs: 2/(n(n-1)) * sum_{i<j}.
double player_diversity(std::span<const Playtrace> traces);

/// Mean TPJS over unordered pairs of the levels' k x k pattern distributions.
double content_diversity(std::span<const Level> levels, std::size_t k);
double content_diversity(std::span<const PatternDistribution> patterns);

/// Simulates every level once and computes all three metrics.
MetricValues evaluate_levels(std::span<const Level> levels, const TileVocabulary& vocab, std::size_t k,
                             PdScaling scaling = {});

} // namespace moel
