#include "moel/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "moel/error.hpp"

namespace moel {

std::string_view mode_name(ObjectiveMode mode) noexcept
{
    switch (mode) {
    case ObjectiveMode::P: return "P";
    case ObjectiveMode::P_PD: return "P+PD";
    case ObjectiveMode::P_CD: return "P+CD";
    case ObjectiveMode::P_PD_CD: return "P+PD+CD";
    }
    return "P+PD+CD";
}

ObjectiveMode parse_mode(std::string_view name)
{
    for (auto m : {ObjectiveMode::P, ObjectiveMode::P_PD, ObjectiveMode::P_CD, ObjectiveMode::P_PD_CD})
        if (mode_name(m) == name) return m;
    throw Error(ErrorKind::InvalidConfig, "unknown mode '" + std::string(name) + "' (expected P, P+PD, P+CD, P+PD+CD)");
}

std::vector<std::size_t> active_objectives(ObjectiveMode mode)
{
    switch (mode) {
    case ObjectiveMode::P: return {0};
    case ObjectiveMode::P_PD: return {0, 1};
    case ObjectiveMode::P_CD: return {0, 2};
    case ObjectiveMode::P_PD_CD: return {0, 1, 2};
    }
    return {0, 1, 2};
}

std::vector<double> project(const ObjectiveVector& v, ObjectiveMode mode)
{
    std::vector<double> out;
    for (auto i : active_objectives(mode)) out.push_back(v[i]);
    return out;
}

bool dominates(std::span<const double> a, std::span<const double> b)
{
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b, ObjectiveMode mode)
{
    auto pa = project(a, mode);
    auto pb = project(b, mode);
    return dominates(pa, pb);
}

std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const std::vector<double>> points)
{
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(points[i], points[j])) {
                dominated_by[i].push_back(j);
                ++count[j];
            } else if (dominates(points[j], points[i])) {
                dominated_by[j].push_back(i);
                ++count[i];
            }
        }
    }
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (count[i] == 0) current.push_back(i);
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto i : current)
            for (auto j : dominated_by[i])
                if (--count[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<std::size_t> nondominated_indices(std::span<const std::vector<double>> points)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j)
            dominated = j != i && dominates(points[j], points[i]);
        if (!dominated) out.push_back(i);
    }
    return out;
}

double sde_distance(std::span<const std::vector<double>> points, std::size_t p, std::span<const std::size_t> others)
{
    double best = std::numeric_limits<double>::infinity();
    const auto& pp = points[p];
    for (auto q : others) {
        if (q == p) continue;
        double sq = 0.0;
        for (std::size_t k = 0; k < pp.size(); ++k) {
            const double d = std::max(points[q][k] - pp[k], 0.0);
            sq += d * d;
        }
        best = std::min(best, std::sqrt(sq));
    }
    return best;
}

std::vector<std::size_t> sde_truncate(std::span<const std::vector<double>> points, std::vector<std::size_t> front,
                                      std::size_t keep)
{
    std::sort(front.begin(), front.end());
    while (front.size() > keep) {
        std::size_t victim = 0;
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < front.size(); ++i) {
            const double d = sde_distance(points, front[i], front);
            if (d < smallest) {
                smallest = d;
                victim = i;
            }
        }
        front.erase(front.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    return front;
}

std::vector<std::size_t> SdeSelector::select(std::span<const ObjectiveVector> pool, std::span<const int> born,
                                             std::size_t keep, ObjectiveMode mode) const
{
    if (pool.size() < keep)
        throw Error(ErrorKind::PoolTooSmall,
                    "pool of " + std::to_string(pool.size()) + " cannot yield " + std::to_string(keep));
    if (born.size() != pool.size()) throw Error(ErrorKind::ShapeMismatch, "born/pool size mismatch");

    std::vector<std::size_t> chosen;
    if (mode == ObjectiveMode::P) {
        std::vector<std::size_t> order(pool.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (pool[a].f_p != pool[b].f_p) return pool[a].f_p < pool[b].f_p;
            if (born[a] != born[b]) return born[a] < born[b];
            return a < b;
        });
        chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
    } else {
        std::vector<std::vector<double>> points;
        points.reserve(pool.size());
        for (const auto& v : pool) points.push_back(project(v, mode));
        for (auto& front : nondominated_sort(points)) {
            if (chosen.size() == keep) break;
            const std::size_t room = keep - chosen.size();
            if (front.size() > room) front = sde_truncate(points, std::move(front), room);
            chosen.insert(chosen.end(), front.begin(), front.end());
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

std::vector<std::size_t> sde_survival_select(std::span<const ObjectiveVector> pool, std::span<const int> born,
                                             std::size_t keep, ObjectiveMode mode)
{
    return SdeSelector{}.select(pool, born, keep, mode);
}

} // namespace moel

#include "moel/indicators.hpp"

namespace moel {

std::vector<double> hv_contributions(std::span<const std::vector<double>> front, std::span<const double> nadir)
{
    const double total = hypervolume(front, nadir);
    std::vector<double> out;
    out.reserve(front.size());
    std::vector<std::vector<double>> rest;
    for (std::size_t i = 0; i < front.size(); ++i) {
        rest.clear();
        for (std::size_t j = 0; j < front.size(); ++j)
            if (j != i) rest.push_back(front[j]);
        out.push_back(total - hypervolume(rest, nadir));
    }
    return out;
}

std::size_t knee_point(std::span<const std::vector<double>> front, std::span<const double> nadir)
{
    if (front.empty()) throw Error(ErrorKind::EmptyInput, "knee point of an empty front");
    for (std::size_t i = 0; i < front.size(); ++i)
        for (std::size_t k = 0; k < nadir.size(); ++k)
            if (!(front[i][k] < nadir[k]))
                throw Error(ErrorKind::PointBeyondNadir, "front member " + std::to_string(i) + " on axis " +
                                                             std::to_string(k));
    auto contrib = hv_contributions(front, nadir);
    return static_cast<std::size_t>(std::max_element(contrib.begin(), contrib.end()) - contrib.begin());
}

} // namespace moel
