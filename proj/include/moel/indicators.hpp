#pragma once

#include <span>
#include <vector>

namespace moel {

/// Lebesgue measure of the union of boxes [p, nadir], m in {1, 2, 3}.
/// Points not strictly below the nadir on every axis add nothing.
double hypervolume(std::span<const std::vector<double>> points, std::span<const double> nadir);

/// Per-axis affine map onto [0, 1] taken from a reference set.
struct Bounds {
    std::vector<double> lo;
    std::vector<double> hi;

    /// Degenerate axes (hi == lo) map to 0.
    std::vector<double> normalize(std::span<const double> point) const;
    bool degenerate(std::size_t axis) const { return !(hi[axis] > lo[axis]); }
};

/// Pseudo Pareto front: the non-dominated subset of everything observed,
/// normalised by its own per-axis extent.
struct ReferenceFront {
    std::vector<std::vector<double>> points; // normalised
    Bounds bounds;
};

/// Filters to the non-dominated subset first, then takes bounds from it.
ReferenceFront build_pseudo_pf(std::span<const std::vector<double>> history);

/// Fraction of reference points whose Chebyshev distance to the nearest
/// non-dominated solution is at most `theta`.
double cpf(std::span<const std::vector<double>> solutions, const ReferenceFront& reference, double theta);

/// HV of each generation's non-dominated subset after normalisation.
std::vector<double> hv_history(std::span<const std::vector<std::vector<double>>> generations, const Bounds& bounds,
                               std::span<const double> nadir);

} // namespace moel
