#include "moel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "moel/error.hpp"

namespace moel {

double transform_playability(double p) noexcept { return 1.0 - p; }

double transform_player_diversity(double pd, PdScaling scaling) noexcept
{
    return (scaling.offset - pd) / scaling.scale;
}

double transform_content_diversity(double cd) noexcept { return 1.0 - cd; }

double dtw(const Playtrace& a, const Playtrace& b)
{
    if (a.empty() || b.empty()) throw Error(ErrorKind::EmptyTrace, "dtw needs non-empty traces");
    const std::size_t m = b.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    // Two rolling rows; prev[j] is D(i-1, j-1) in 1-based terms.
    std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
    prev[0] = 0.0;
    for (const auto& pa : a) {
        cur[0] = inf;
        for (std::size_t j = 1; j <= m; ++j) {
            double cost = std::hypot(pa.x - b[j - 1].x, pa.y - b[j - 1].y);
            cur[j] = cost + std::min({prev[j], cur[j - 1], prev[j - 1]});
        }
        std::swap(prev, cur);
        prev[0] = inf;
    }
    return prev[m];
}

double tpjs(const PatternDistribution& p, const PatternDistribution& q)
{
    if (p.k != q.k)
        throw Error(ErrorKind::PatternSizeMismatch,
                    "pattern sizes " + std::to_string(p.k) + " and " + std::to_string(q.k));
    if (p.total == 0 || q.total == 0) throw Error(ErrorKind::EmptyInput, "empty pattern distribution");

    const double np = static_cast<double>(p.total);
    const double nq = static_cast<double>(q.total);
    // Each side's term: pi * log2(pi / mi).
    auto term = [](double x, double m) { return x > 0.0 ? x * std::log2(x / m) : 0.0; };

    double kl_p = 0.0;
    double kl_q = 0.0;
    auto ip = p.counts.begin();
    auto iq = q.counts.begin();
    while (ip != p.counts.end() || iq != q.counts.end()) {
        double pp = 0.0;
        double qq = 0.0;
        if (iq == q.counts.end() || (ip != p.counts.end() && ip->first < iq->first)) {
            pp = ip->second / np;
            ++ip;
        } else if (ip == p.counts.end() || iq->first < ip->first) {
            qq = iq->second / nq;
            ++iq;
        } else {
            pp = ip->second / np;
            qq = iq->second / nq;
            ++ip;
            ++iq;
        }
        const double mid = 0.5 * (pp + qq);
        kl_p += term(pp, mid);
        kl_q += term(qq, mid);
    }
    double js = 0.5 * kl_p + 0.5 * kl_q;
    return std::clamp(js, 0.0, 1.0);
}

double playability(std::span<const SimResult> results)
{
    if (results.empty()) throw Error(ErrorKind::TooFewSamples, "playability needs at least one level");
    std::size_t done = 0;
    for (const auto& r : results) done += r.completed;
    return static_cast<double>(done) / static_cast<double>(results.size());
}

double playability(std::span<const Level> levels, const TileVocabulary& vocab)
{
    std::vector<SimResult> results;
    results.reserve(levels.size());
    for (const auto& l : levels) results.push_back(simulate(l, vocab));
    return playability(results);
}

double player_diversity(std::span<const Playtrace> traces)
{
    const std::size_t n = traces.size();
    if (n < 2) throw Error(ErrorKind::TooFewSamples, "player diversity needs n >= 2");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) sum += dtw(traces[i], traces[j]);
    return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double content_diversity(std::span<const PatternDistribution> patterns)
{
    const std::size_t n = patterns.size();
    if (n < 2) throw Error(ErrorKind::TooFewSamples, "content diversity needs n >= 2");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) sum += tpjs(patterns[i], patterns[j]);
    return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double content_diversity(std::span<const Level> levels, std::size_t k)
{
    std::vector<PatternDistribution> patterns;
    patterns.reserve(levels.size());
    for (const auto& l : levels) patterns.push_back(extract_patterns(l, k));
    return content_diversity(patterns);
}

MetricValues evaluate_levels(std::span<const Level> levels, const TileVocabulary& vocab, std::size_t k,
                             PdScaling scaling)
{
    if (levels.size() < 2) throw Error(ErrorKind::TooFewSamples, "evaluation needs n >= 2 levels");
    std::vector<SimResult> results;
    std::vector<Playtrace> traces;
    results.reserve(levels.size());
    traces.reserve(levels.size());
    for (const auto& l : levels) {
        results.push_back(simulate(l, vocab));
        traces.push_back(results.back().trace);
    }
    MetricValues v;
    v.playability = playability(results);
    v.player_diversity = player_diversity(traces);
    v.content_diversity = content_diversity(levels, k);
    v.objectives = {transform_playability(v.playability),
                    transform_player_diversity(v.player_diversity, scaling),
                    transform_content_diversity(v.content_diversity)};
    return v;
}

} // namespace moel
