#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "moel/metrics.hpp"

namespace moel {

/// Which objectives a run optimises. All three are always measured.
enum class ObjectiveMode { P, P_PD, P_CD, P_PD_CD };

std::string_view mode_name(ObjectiveMode mode) noexcept;
ObjectiveMode parse_mode(std::string_view name);
std::vector<std::size_t> active_objectives(ObjectiveMode mode);

/// Objective vector restricted to the active axes of `mode`.
std::vector<double> project(const ObjectiveVector& v, ObjectiveMode mode);

/// a <= b on every axis and a < b on at least one.
bool dominates(std::span<const double> a, std::span<const double> b);
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b, ObjectiveMode mode);

/// Fast non-dominated sorting. Fronts hold pool indices in ascending order;
/// front 0 is the non-dominated subset.
std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const std::vector<double>> points);

/// Indices of the non-dominated subset, ascending.
std::vector<std::size_t> nondominated_indices(std::span<const std::vector<double>> points);

/// Shift-based density of `p` against the points in `others` (indices into
/// `points`, `p` itself skipped): min over q of || max(q, p) - p ||.
double sde_distance(std::span<const std::vector<double>> points, std::size_t p,
                    std::span<const std::size_t> others);

/// Survival selection interface, so the truncation rule can be swapped.
class SurvivalSelector {
public:
    virtual ~SurvivalSelector() = default;
    /// Returns `keep` pool indices in ascending order. `born` is the generation
    /// each pool member was created in (used for single-objective ties).
    virtual std::vector<std::size_t> select(std::span<const ObjectiveVector> pool, std::span<const int> born,
                                            std::size_t keep, ObjectiveMode mode) const = 0;
};

/// Non-dominated sorting, then iterative removal of the smallest-SDE-distance
/// member from the first overflowing front. Single-objective mode sorts by
/// f_P with ties to the older member, then the lower index.
class SdeSelector final : public SurvivalSelector {
public:
    std::vector<std::size_t> select(std::span<const ObjectiveVector> pool, std::span<const int> born,
                                    std::size_t keep, ObjectiveMode mode) const override;
};

std::vector<std::size_t> sde_survival_select(std::span<const ObjectiveVector> pool, std::span<const int> born,
                                             std::size_t keep, ObjectiveMode mode);

/// Iterative SDE truncation of one front (indices into `points`) down to `keep`.
std::vector<std::size_t> sde_truncate(std::span<const std::vector<double>> points, std::vector<std::size_t> front,
                                      std::size_t keep);

} // namespace moel

namespace moel {

/// Exclusive hypervolume contribution of each front member:
/// HV(front) - HV(front without member).
std::vector<double> hv_contributions(std::span<const std::vector<double>> front, std::span<const double> nadir);

/// Front member with the largest exclusive contribution, ties to the lower
/// index. Every point must lie strictly below the nadir.
std::size_t knee_point(std::span<const std::vector<double>> front, std::span<const double> nadir);

} // namespace moel
