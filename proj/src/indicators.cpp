#include "moel/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "moel/error.hpp"
#include "moel/moea.hpp"

namespace moel {

namespace {

// Area dominated by (x, y) points below `nadir`; points must already be
// strictly inside.
double hv2d(std::vector<std::pair<double, double>> pts, double nx, double ny)
{
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double floor = ny;
    for (auto [x, y] : pts) {
        if (y < floor) {
            area += (nx - x) * (floor - y);
            floor = y;
        }
    }
    return area;
}

} // namespace

double hypervolume(std::span<const std::vector<double>> points, std::span<const double> nadir)
{
    const std::size_t m = nadir.size();
    if (m == 0 || m > 3) throw Error(ErrorKind::UnsupportedDimension, "hypervolume supports 1 to 3 objectives");

    std::vector<const std::vector<double>*> inside;
    for (const auto& p : points) {
        if (p.size() != m) throw Error(ErrorKind::ShapeMismatch, "point dimension differs from nadir");
        bool ok = true;
        for (std::size_t k = 0; k < m && ok; ++k) ok = p[k] < nadir[k];
        if (ok) inside.push_back(&p);
    }
    if (inside.empty()) return 0.0;

    // Dominated points would only split slices; dropping them keeps the
    // result bit-identical under dominated additions.
    {
        std::vector<const std::vector<double>*> kept;
        for (auto* p : inside) {
            bool dominated = false;
            for (auto* q : inside)
                if (q != p && dominates(*q, *p)) {
                    dominated = true;
                    break;
                }
            if (!dominated) kept.push_back(p);
        }
        inside = std::move(kept);
    }

    if (m == 1) {
        double best = nadir[0];
        for (auto* p : inside) best = std::min(best, (*p)[0]);
        return nadir[0] - best;
    }
    if (m == 2) {
        std::vector<std::pair<double, double>> pts;
        for (auto* p : inside) pts.emplace_back((*p)[0], (*p)[1]);
        return hv2d(std::move(pts), nadir[0], nadir[1]);
    }

    // Slice along the third axis: between consecutive z levels the cross
    // section is the 2D front of every point at or below that level.
    std::sort(inside.begin(), inside.end(), [](auto* a, auto* b) { return (*a)[2] < (*b)[2]; });
    double volume = 0.0;
    std::vector<std::pair<double, double>> slab;
    for (std::size_t i = 0; i < inside.size(); ++i) {
        slab.emplace_back((*inside[i])[0], (*inside[i])[1]);
        const double z = (*inside[i])[2];
        const double next = i + 1 < inside.size() ? (*inside[i + 1])[2] : nadir[2];
        if (next > z) volume += hv2d(slab, nadir[0], nadir[1]) * (next - z);
    }
    return volume;
}

std::vector<double> Bounds::normalize(std::span<const double> point) const
{
    std::vector<double> out(point.size());
    for (std::size_t k = 0; k < point.size(); ++k)
        out[k] = degenerate(k) ? 0.0 : (point[k] - lo[k]) / (hi[k] - lo[k]);
    return out;
}

ReferenceFront build_pseudo_pf(std::span<const std::vector<double>> history)
{
    if (history.empty()) throw Error(ErrorKind::EmptyInput, "pseudo front needs at least one point");
    const std::size_t m = history.front().size();

    // Drop exact duplicates so the front holds distinct vectors.
    std::vector<std::vector<double>> unique(history.begin(), history.end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    ReferenceFront ref;
    std::vector<std::vector<double>> raw;
    for (auto i : nondominated_indices(unique)) raw.push_back(unique[i]);

    ref.bounds.lo.assign(m, std::numeric_limits<double>::infinity());
    ref.bounds.hi.assign(m, -std::numeric_limits<double>::infinity());
    for (const auto& p : raw) {
        for (std::size_t k = 0; k < m; ++k) {
            ref.bounds.lo[k] = std::min(ref.bounds.lo[k], p[k]);
            ref.bounds.hi[k] = std::max(ref.bounds.hi[k], p[k]);
        }
    }
    for (std::size_t k = 0; k < m; ++k)
        if (ref.bounds.degenerate(k) && raw.size() > 1)
            std::clog << "warning: objective " << k << " is constant on the pseudo front; normalising it to 0\n";
    for (const auto& p : raw) ref.points.push_back(ref.bounds.normalize(p));
    return ref;
}

double cpf(std::span<const std::vector<double>> solutions, const ReferenceFront& reference, double theta)
{
    if (reference.points.empty()) throw Error(ErrorKind::EmptyReference, "coverage needs reference points");
    if (solutions.empty()) return 0.0;
    auto nd = nondominated_indices(solutions);
    std::size_t covered = 0;
    for (const auto& r : reference.points) {
        double nearest = std::numeric_limits<double>::infinity();
        for (auto i : nd) {
            double cheb = 0.0;
            for (std::size_t k = 0; k < r.size(); ++k) cheb = std::max(cheb, std::abs(solutions[i][k] - r[k]));
            nearest = std::min(nearest, cheb);
        }
        covered += nearest <= theta;
    }
    return static_cast<double>(covered) / static_cast<double>(reference.points.size());
}

std::vector<double> hv_history(std::span<const std::vector<std::vector<double>>> generations, const Bounds& bounds,
                               std::span<const double> nadir)
{
    std::vector<double> series;
    series.reserve(generations.size());
    for (const auto& gen : generations) {
        std::vector<std::vector<double>> front;
        for (auto i : nondominated_indices(gen)) front.push_back(bounds.normalize(gen[i]));
        series.push_back(hypervolume(front, nadir));
    }
    return series;
}

} // namespace moel
