// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grad_check.hpp"
#include "moel/experiment.hpp"
#include "moel/indicators.hpp"
#include "moel/metrics.hpp"
#include "moel/moea.hpp"
#include "moel/report.hpp"
#include "moel/sim.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace moel;
using Points = std::vector<std::vector<double>>;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            if (pass) detail = what;
            pass = false;
        }
    }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const TileVocabulary& vocab() {
    static const TileVocabulary v = TileVocabulary::standard();
    return v;
}

constexpr TileIndex kEmpty = 0, kSolid = 1, kHazard = 5;

Level flat_ground()
{
    Level l(14, 28, kEmpty);
    for (std::size_t c = 0; c < 28; ++c) l.at(13, c) = kSolid;
    return l;
}

// ---------------------------------------------------------------------------

Outcome metric_oracles()
{
    Outcome o;
    std::mt19937_64 rng(2024);
    double worst_dtw = 0.0;
    for (int c = 0; c < 50; ++c) {
        auto a = test::random_trace(rng, 6), b = test::random_trace(rng, 6);
        worst_dtw = std::max(worst_dtw, std::abs(dtw(a, b) - test::dtw_brute(a, b)));
    }
    o.require(worst_dtw <= 1e-9, fmt("DTW differs from brute force by %.3g", worst_dtw));

    double worst_pd = 0.0, worst_cd = 0.0;
    for (int c = 0; c < 20; ++c) {
        std::vector<Playtrace> traces;
        for (int i = 0; i < 6; ++i) traces.push_back(test::random_trace(rng, 12));
        double s = 0.0;
        int pairs = 0;
        for (std::size_t i = 0; i < traces.size(); ++i)
            for (std::size_t j = i + 1; j < traces.size(); ++j, ++pairs) s += dtw(traces[i], traces[j]);
        worst_pd = std::max(worst_pd, std::abs(player_diversity(traces) - s / pairs));

        std::vector<Level> levels;
        std::uniform_int_distribution<int> pick(0, 7);
        for (int i = 0; i < 5; ++i) {
            Level l(14, 28);
            for (std::size_t r = 0; r < 14; ++r)
                for (std::size_t k = 0; k < 28; ++k) l.at(r, k) = static_cast<TileIndex>(pick(rng) < 5 ? 0 : pick(rng));
            levels.push_back(l);
        }
        s = 0.0;
        pairs = 0;
        for (std::size_t i = 0; i < levels.size(); ++i)
            for (std::size_t j = i + 1; j < levels.size(); ++j, ++pairs)
                s += tpjs(extract_patterns(levels[i], 2), extract_patterns(levels[j], 2));
        worst_cd = std::max(worst_cd, std::abs(content_diversity(levels, 2) - s / pairs));
    }
    o.require(worst_pd <= 1e-12, fmt("PD differs from the pair mean by %.3g", worst_pd));
    o.require(worst_cd <= 1e-12, fmt("CD differs from the pair mean by %.3g", worst_cd));

    for (int i = 0; i < 10000; ++i) {
        auto p = test::random_dist(rng), q = test::random_dist(rng);
        const double pq = tpjs(p, q), qp = tpjs(q, p);
        o.require(pq >= 0.0 && pq <= 1.0, fmt("TPJS %.17g outside [0,1]", pq));
        o.require(pq == qp, fmt("TPJS asymmetric: %.17g vs %.17g", pq, qp));
        o.require((pq == 0.0) == test::same_distribution(p, q), fmt("TPJS zero-iff-equal violated (%.3g)", pq));
        o.require(tpjs(p, p) == 0.0, "TPJS(p, p) is not zero");
    }
    if (o.pass) o.detail = fmt("worst DTW error %.2g, PD %.2g, CD %.2g", worst_dtw, worst_pd, worst_cd);
    return o;
}

Outcome transforms()
{
    Outcome o;
    o.require(transform_playability(0.0) == 1.0 && transform_playability(1.0) == 0.0, "f_P boundary values");
    o.require(transform_player_diversity(0.0) == 2.0 && transform_player_diversity(200.0) == 0.0,
              "f_PD boundary values");
    o.require(transform_content_diversity(0.0) == 1.0 && transform_content_diversity(1.0) == 0.0,
              "f_CD boundary values");
    for (double v : {0.25, 0.5, 0.8}) {
        o.require(transform_playability(v) == 1.0 - v, "f_P interior");
        o.require(transform_content_diversity(v) == 1.0 - v, "f_CD interior");
        o.require(transform_player_diversity(100.0 * v) == (200.0 - 100.0 * v) / 100.0, "f_PD interior");
    }
    if (o.pass) o.detail = "f_P, f_PD, f_CD exact at P in {0,1}, PD in {0,200}, CD in {0,1}";
    return o;
}

Outcome gradients()
{
    Outcome o;
    std::mt19937_64 rng(314);
    double worst[3] = {0, 0, 0};
    const std::size_t channels = 3;
    for (int draw = 0; draw < 10; ++draw) {
        Rng init(rng());
        auto g = MlpParams::glorot({6, 12, 10, 24}, init);
        auto d = MlpParams::glorot({24, 10, 6, 1}, init);
        for (auto& v : g.values()) v += 0.01;
        for (auto& v : d.values()) v += 0.01;
        Rng zr(rng());
        auto z = gaussian_noise_batch(5, 6, zr);
        auto fake = generator_levels(g, gaussian_noise_batch(5, 6, zr), channels);
        Batch real(5, 24);
        std::uniform_int_distribution<int> pick(0, 2);
        for (std::size_t r = 0; r < 5; ++r)
            for (std::size_t c = 0; c < 8; ++c) real.row(r)[c * 3 + pick(rng)] = 1.0;

        auto dh = d_hinge_gradients(d, real, fake);
        worst[0] = std::max(worst[0], test::finite_difference_check(
                                          d, dh.grad, [&] { return d_hinge_gradients(d, real, fake).loss; }, 20, rng)
                                          .worst_relative_error);
        auto mm = g_minmax_gradients(g, d, z, channels);
        worst[1] = std::max(worst[1], test::finite_difference_check(
                                          g, mm.grad, [&] { return g_minmax_gradients(g, d, z, channels).loss; }, 20,
                                          rng)
                                          .worst_relative_error);
        auto ls = g_lsq_gradients(g, d, z, channels);
        worst[2] = std::max(worst[2], test::finite_difference_check(
                                          g, ls.grad, [&] { return g_lsq_gradients(g, d, z, channels).loss; }, 20,
                                          rng)
                                          .worst_relative_error);
    }
    o.require(worst[0] < 1e-4, fmt("hinge gradient relative error %.3g", worst[0]));
    o.require(worst[1] < 1e-4, fmt("minmax gradient relative error %.3g", worst[1]));
    o.require(worst[2] < 1e-4, fmt("least-squares gradient relative error %.3g", worst[2]));
    if (o.pass) o.detail = fmt("worst relative error hinge %.2g, minmax %.2g, lsq %.2g", worst[0], worst[1], worst[2]);
    return o;
}

Outcome hypervolume_checks()
{
    Outcome o;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.1);
    std::uniform_int_distribution<int> count(1, 8);
    double worst = 0.0;
    for (int s = 0; s < 50; ++s) {
        const std::size_t m = s % 2 ? 3 : 2;
        std::vector<double> nadir(m, 1.1);
        Points pts(static_cast<std::size_t>(count(rng)), std::vector<double>(m));
        for (auto& p : pts)
            for (auto& v : p) v = u(rng);
        const double exact = hypervolume(pts, nadir);
        const double mc = test::monte_carlo_hv(pts, nadir, 1000000, rng);
        const double rel = exact > 0 ? std::abs(exact - mc) / exact : std::abs(mc);
        worst = std::max(worst, rel);

        double last = 0.0;
        Points grow;
        for (const auto& p : pts) {
            grow.push_back(p);
            const double hv = hypervolume(grow, nadir);
            o.require(hv >= last, "HV decreased after adding a point");
            last = hv;
        }
        auto worse = pts[0];
        for (auto& v : worse) v = std::min(1.2, v + 0.05);
        grow.push_back(worse);
        o.require(hypervolume(grow, nadir) == last, "dominated addition changed HV");
    }
    o.require(worst <= 0.01, fmt("Monte Carlo relative error %.4f", worst));
    const double single = hypervolume(Points{{0.0, 0.0}}, std::vector<double>{1.1, 1.1});
    o.require(std::abs(single - 1.21) < 1e-12, fmt("single point HV %.17g", single));
    if (o.pass) o.detail = fmt("worst Monte Carlo relative error %.4f, single point %.4f", worst, single);
    return o;
}

Outcome sorting_selection()
{
    Outcome o;
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int> grid(0, 7);
    std::uniform_int_distribution<std::size_t> size(20, 200);
    for (int pool = 0; pool < 20; ++pool) {
        Points pts(size(rng), std::vector<double>(3));
        for (auto& p : pts)
            for (auto& v : p) v = grid(rng) / 7.0;
        auto fronts = nondominated_sort(pts);
        auto ranks = test::brute_ranks(pts);
        std::size_t seen = 0;
        for (std::size_t f = 0; f < fronts.size(); ++f)
            for (auto i : fronts[f]) {
                o.require(ranks[i] == f, "front assignment differs from brute force");
                ++seen;
            }
        o.require(seen == pts.size(), "sort lost points");
    }

    std::uniform_real_distribution<double> u(0.0, 1.0);
    int knees = 0;
    for (int t = 0; t < 40; ++t) {
        Points front;
        const std::size_t target = 2 + t % 9;
        while (front.size() < target) {
            // Points on the simplex never dominate each other.
            double a = u(rng), b = u(rng) * (1 - a);
            front.push_back({a, b, 1 - a - b});
        }
        std::vector<double> nadir(3, 1.1);
        const double total = test::hv_inclusion_exclusion(front, nadir);
        std::size_t best = 0;
        double best_c = -1.0;
        for (std::size_t i = 0; i < front.size(); ++i) {
            Points rest;
            for (std::size_t j = 0; j < front.size(); ++j)
                if (j != i) rest.push_back(front[j]);
            const double c = total - test::hv_inclusion_exclusion(rest, nadir);
            if (c > best_c + 1e-12) {
                best_c = c;
                best = i;
            }
        }
        o.require(knee_point(front, nadir) == best, "knee differs from brute-force contribution maximum");
        ++knees;
    }

    int dup_cases = 0;
    for (int t = 0; t < 50; ++t) {
        Points front;
        const std::size_t n = 3 + t % 8;
        for (std::size_t i = 0; i < n; ++i) {
            double a = u(rng), b = u(rng) * (1 - a);
            front.push_back({a, b, 1 - a - b});
        }
        const std::size_t src = t % n;
        front.push_back(front[src]);
        std::vector<std::size_t> all(front.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        auto kept = sde_truncate(front, all, front.size() - 1);
        const bool removed_dup = std::find(kept.begin(), kept.end(), src) == kept.end() ||
                                 std::find(kept.begin(), kept.end(), front.size() - 1) == kept.end();
        o.require(removed_dup, "SDE truncation removed a non-duplicate first");
        ++dup_cases;
    }
    if (o.pass)
        o.detail = "20 pools, " + std::to_string(knees) + " knee fronts, " + std::to_string(dup_cases) +
                   " duplicate cases agree";
    return o;
}

Outcome simulator_sanity()
{
    Outcome o;
    o.require(simulate(flat_ground(), vocab()).completed, "flat ground not playable");
    auto gap = flat_ground();
    for (std::size_t c = 10; c < 17; ++c) gap.at(13, c) = kEmpty;
    o.require(!simulate(gap, vocab()).completed, "7-wide gap playable");
    auto wall = flat_ground();
    for (std::size_t r = 0; r < 14; ++r) wall.at(r, 12) = kSolid;
    o.require(!simulate(wall, vocab()).completed, "full-height wall playable");

    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> col(1, 26), row(3, 12), tile(0, 7), gap_width(1, 7), height(1, 9);
    auto random_structured = [&] {
        Level l = flat_ground();
        for (int k = 0; k < 2; ++k) {
            const int c = col(rng), w = gap_width(rng);
            for (int j = 0; j < w && c + j < 27; ++j) l.at(13, static_cast<std::size_t>(c + j)) = kEmpty;
        }
        const int wc = col(rng), h = height(rng);
        for (int r = 12; r > 12 - h; --r) l.at(static_cast<std::size_t>(r), static_cast<std::size_t>(wc)) = kSolid;
        for (int k = 0; k < 10; ++k) l.at(row(rng), col(rng)) = static_cast<TileIndex>(tile(rng));
        return l;
    };

    auto probe = random_structured();
    const auto first = simulate(probe, vocab());
    for (int i = 0; i < 100; ++i) {
        auto again = simulate(probe, vocab());
        o.require(again.completed == first.completed && again.trace == first.trace &&
                      again.progress == first.progress,
                  "simulate not deterministic");
    }

    int flips = 0, completable = 0;
    for (int t = 0; t < 200; ++t) {
        auto base = random_structured();
        auto with_hazard = base;
        with_hazard.at(row(rng), col(rng)) = kHazard;
        const bool before = simulate(base, vocab()).completed;
        const bool after = simulate(with_hazard, vocab()).completed;
        completable += before;
        if (!before && after) ++flips;
    }
    o.require(flips == 0, std::to_string(flips) + " hazard insertions made a level playable");
    if (o.pass)
        o.detail = "100 identical reruns; 0 of 200 hazard pairs flipped (" + std::to_string(completable) +
                   " bases playable)";
    return o;
}

Outcome warm_start_signal(const std::string& data_dir)
{
    Outcome o;
    const auto corpus = load_corpus(data_dir + "/corpus.txt", vocab());
    const auto pooled = pooled_patterns(corpus, 2);
    std::vector<double> at0, at30;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        ExperimentConfig cfg;
        apply_profile(cfg, "desk");
        TrainConfig tc = cfg.train;
        tc.lambda = 4;
        tc.warm_epochs = 30;
        tc.seed = seed;
        auto measure = [&](const std::vector<Generator>& gens) {
            double s = 0.0;
            for (std::size_t j = 0; j < gens.size(); ++j) {
                Rng rng(1000 * seed + j);
                auto levels = sample_levels(gens[j].net, tc, vocab().size(), 32, rng);
                s += mean_tpjs_to_corpus(levels, pooled);
            }
            return s / static_cast<double>(gens.size());
        };
        warm_start(corpus, tc, vocab().size(), [&](std::size_t epoch, const auto& gens, const auto&) {
            if (epoch == 0) at0.push_back(measure(gens));
            if (epoch == 30) at30.push_back(measure(gens));
        });
    }
    const double m0 = median(at0), m30 = median(at30);
    const double drop = (m0 - m30) / m0;
    o.require(drop >= 0.20, fmt("median mean-TPJS %.4f -> %.4f, drop %.1f%%", m0, m30, 100 * drop));
    if (o.pass) o.detail = fmt("median mean-TPJS %.4f -> %.4f, drop %.1f%%", m0, m30, 100 * drop);
    return o;
}

Outcome moel_directional(const std::string& data_dir, const fs::path& work)
{
    Outcome o;
    const auto corpus = load_corpus(data_dir + "/corpus.txt", vocab());
    const std::vector<ObjectiveMode> modes{ObjectiveMode::P, ObjectiveMode::P_PD, ObjectiveMode::P_CD,
                                           ObjectiveMode::P_PD_CD};
    std::vector<std::string> dirs;
    for (auto mode : modes) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            ExperimentConfig cfg;
            apply_profile(cfg, "desk");
            cfg.train.mode = mode;
            cfg.train.seed = seed;
            std::string name = std::string(mode_name(mode));
            std::replace(name.begin(), name.end(), '+', '_');
            auto dir = work / "c8" / name / ("seed_" + std::to_string(seed));
            if (!fs::exists(dir / "manifest.json")) {
                cfg.output_dir = dir.string();
                run_trial(cfg, corpus, vocab(), dir.string());
            }
            dirs.push_back(dir.string());
        }
    }
    auto report = compute_indicators(collect_runs(dirs), 0.1);
    write_indicator_outputs(report, (work / "c8" / "indicators").string());

    std::map<std::string, std::map<std::uint64_t, double>> final_hv = final_hv_by_mode(report.rows);
    std::vector<double> gen1;
    for (const auto& r : report.rows)
        if (r.mode == "P+PD+CD" && r.generation == 1) gen1.push_back(r.hv);

    auto med = [&](const std::string& m) {
        std::vector<double> v;
        for (auto& [s, hv] : final_hv[m]) v.push_back(hv);
        return median(v);
    };
    const double full = med("P+PD+CD");
    std::ostringstream detail;
    detail << "median final HV:";
    for (auto mode : modes) detail << ' ' << mode_name(mode) << '=' << fmt("%.4f", med(std::string(mode_name(mode))));
    detail << "; P+PD+CD generation 1 median " << fmt("%.4f", median(gen1));

    o.require(full >= median(gen1), "(a) final HV below generation 1");
    for (auto other : {"P+PD", "P+CD", "P"}) {
        int wins = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) wins += final_hv["P+PD+CD"][seed] >= final_hv[other][seed];
        detail << "; wins vs " << other << ' ' << wins << "/5";
        o.require(wins >= 4, std::string("(b) fewer than 4 of 5 seed wins against ") + other);
    }
    const double p = med("P");
    o.require(p < med("P+PD") && p < med("P+CD") && p < full, "(c) P does not rank last");
    o.detail = (o.pass ? "" : o.detail + " | ") + detail.str();
    return o;
}

int run_cli(const std::string& cli, const std::string& args)
{
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

Outcome reproducibility(const std::string& data_dir, const std::string& cli, const fs::path& work)
{
    Outcome o;
    const auto a = work / "c9" / "run_a", b = work / "c9" / "run_b";
    fs::remove_all(work / "c9");
    const std::string common = "train --profile desk --seed 11 --mode P+PD+CD --corpus " + data_dir + "/corpus.txt";
    o.require(run_cli(cli, common + " --out " + a.string()) == 0, "first train run failed");
    o.require(run_cli(cli, common + " --out " + b.string()) == 0, "second train run failed");
    if (!o.pass) return o;
    o.require(slurp((a / "objectives.csv").string()) == slurp((b / "objectives.csv").string()),
              "objective CSVs differ");

    auto cfg = load_run_config(a.string());
    auto voc = load_vocabulary(cfg);
    auto manifest = read_manifest((a / "manifest.json").string());
    int checked = 0;
    for (const auto& m : manifest.members) {
        auto again = reevaluate_member(cfg, voc, (a / m.checkpoint).string(), m.id, m.born);
        o.require(again.objectives == m.metrics.objectives,
                  "member " + std::to_string(m.id) + " re-evaluates to different objectives");
        ++checked;
    }
    if (o.pass) o.detail = "CSV byte-identical; " + std::to_string(checked) + " checkpoints re-evaluate exactly";
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance checks"};
    std::string data_dir = "data", cli = "moel", work = "acceptance_work";
    std::vector<int> only;
    app.add_option("--data", data_dir, "Directory holding corpus.txt");
    app.add_option("--cli", cli, "Path to the moel executable");
    app.add_option("--work", work, "Scratch directory");
    app.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(work);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"metric oracles", metric_oracles},
        {"transform exactness", transforms},
        {"gradient correctness", gradients},
        {"hypervolume", hypervolume_checks},
        {"sorting and selection oracles", sorting_selection},
        {"simulator sanity", simulator_sanity},
        {"warm-start learning signal", [&] { return warm_start_signal(data_dir); }},
        {"MOEL directional reproduction", [&] { return moel_directional(data_dir, work); }},
        {"reproducibility", [&] { return reproducibility(data_dir, cli, work); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !out.pass;
        std::printf("criterion %d [%s] %s (%.1fs): %s\n", id, criteria[i].first.c_str(), out.pass ? "PASS" : "FAIL",
                    secs, out.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
