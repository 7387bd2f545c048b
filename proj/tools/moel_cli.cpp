#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moel/config.hpp"
#include "moel/error.hpp"
#include "moel/experiment.hpp"
#include "moel/report.hpp"
#include "moel/sim.hpp"

namespace fs = std::filesystem;

namespace {

void apply_overrides(moel::ExperimentConfig& cfg, const std::vector<std::string>& sets)
{
    for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw moel::Error(moel::ErrorKind::InvalidConfig, "--set expects key=value, got '" + s + "'");
        moel::set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
}

int run_report(const std::string& dir)
{
    const fs::path p(dir);
    if (fs::exists(p / "indicators.csv")) {
        std::cout << moel::summarize_indicators(moel::read_indicator_csv((p / "indicators.csv").string()));
        return 0;
    }
    auto manifest = moel::read_manifest((p / "manifest.json").string());
    std::cout << "mode " << manifest.mode << ", seed " << manifest.seed << ", final generation "
              << manifest.final_generation << "\n";
    std::cout << "id      lineage        born  pareto  f_P      f_PD     f_CD\n";
    for (const auto& m : manifest.members) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "%-7llu %-14s %4d  %-6s  %-7.4f  %-7.4f  %-7.4f\n",
                      static_cast<unsigned long long>(m.id), m.lineage.c_str(), m.born, m.pareto ? "yes" : "no",
                      m.metrics.objectives.f_p, m.metrics.objectives.f_pd, m.metrics.objectives.f_cd);
        std::cout << buf;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-objective evolutionary training of platformer level generators"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "Warm start and evolve a generator population");
    std::string config_path, profile, mode, out, corpus, vocab;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::vector<std::string> sets;
    train->add_option("-c,--config", config_path, "Key-value config file");
    train->add_option("--profile", profile, "full or desk");
    train->add_option("--mode", mode, "P, P+PD, P+CD or P+PD+CD");
    train->add_option("--seed", seed, "Master seed");
    train->add_option("--trials", trials, "Number of independent trials");
    train->add_option("-o,--out", out, "Output directory");
    train->add_option("--corpus", corpus, "Training corpus file");
    train->add_option("--vocab", vocab, "Tile vocabulary file");
    train->add_option("--set", sets, "Override any config key (key=value)");

    // sample
    auto* sample = app.add_subcommand("sample", "Decode levels from a generator checkpoint");
    std::string checkpoint, sample_out = "samples", sample_config, sample_vocab;
    std::size_t count = 10;
    std::uint64_t sample_seed = 1;
    sample->add_option("--checkpoint", checkpoint, "Generator checkpoint JSON")->required();
    sample->add_option("--count", count, "Number of levels");
    sample->add_option("--seed", sample_seed, "Latent sampling seed");
    sample->add_option("-o,--out", sample_out, "Output directory");
    sample->add_option("-c,--config", sample_config, "Run config (level size, vocabulary)");
    sample->add_option("--vocab", sample_vocab, "Tile vocabulary file");

    // render
    auto* render = app.add_subcommand("render", "Simulate levels and overlay the agent trace");
    std::string level_path, render_vocab, trace_dir;
    render->add_option("level", level_path, "Level or corpus file")->required();
    render->add_option("--vocab", render_vocab, "Tile vocabulary file");
    render->add_option("--trace-dir", trace_dir, "Write trace_<i>.csv files here");

    // indicators
    auto* indicators = app.add_subcommand("indicators", "HV, CPF and knee points across runs");
    std::vector<std::string> run_dirs;
    std::string ind_out = "indicators";
    double theta = 0.1, nadir = 1.1;
    indicators->add_option("runs", run_dirs, "Run directories (or parents of trial directories)")->required();
    indicators->add_option("-o,--out", ind_out, "Output directory");
    indicators->add_option("--theta", theta, "Coverage radius");
    indicators->add_option("--nadir", nadir, "Nadir value on every normalised axis");

    // report
    auto* report = app.add_subcommand("report", "Summarise an indicator directory or a run directory");
    std::string report_dir;
    report->add_option("dir", report_dir, "Indicator output or run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            moel::ExperimentConfig cfg;
            if (!config_path.empty()) moel::load_config_file(cfg, config_path);
            if (!profile.empty()) moel::apply_profile(cfg, profile);
            if (!mode.empty()) cfg.train.mode = moel::parse_mode(mode);
            if (train->count("--seed")) cfg.train.seed = seed;
            if (train->count("--trials")) cfg.trials = trials;
            if (!out.empty()) cfg.output_dir = out;
            if (!corpus.empty()) cfg.corpus_path = corpus;
            if (!vocab.empty()) cfg.vocab_path = vocab;
            apply_overrides(cfg, sets);
            std::cout << "# effective configuration\n" << moel::dump_config(cfg) << std::flush;
            auto runs = moel::run_experiment(cfg);
            for (const auto& r : runs) std::cout << "wrote " << r.directory << "\n";
            return 0;
        }
        if (*sample) {
            moel::ExperimentConfig cfg;
            if (!sample_config.empty()) moel::load_config_file(cfg, sample_config);
            if (!sample_vocab.empty()) cfg.vocab_path = sample_vocab;
            auto v = moel::load_vocabulary(cfg);
            auto files = moel::sample_checkpoint(checkpoint, cfg.train, v, count, sample_seed, sample_out);
            for (std::size_t i = 0; i < files.levels.size(); ++i)
                std::cout << files.levels[i] << ' ' << files.renders[i] << ' ' << files.traces[i] << '\n';
            return 0;
        }
        if (*render) {
            auto v = render_vocab.empty() ? moel::TileVocabulary::standard() : moel::TileVocabulary::load(render_vocab);
            auto levels = moel::load_corpus(level_path, v);
            if (!trace_dir.empty()) fs::create_directories(trace_dir);
            for (std::size_t i = 0; i < levels.size(); ++i) {
                auto sim = moel::simulate(levels[i], v);
                std::cout << "# level " << i << ": " << (sim.completed ? "completed" : "not completed")
                          << ", progress " << sim.progress << "\n"
                          << moel::render_trace(levels[i], v, sim.trace) << "\n\n";
                if (!trace_dir.empty()) {
                    std::ofstream f(fs::path(trace_dir) / ("trace_" + std::to_string(i) + ".csv"));
                    f << moel::trace_csv(sim.trace);
                }
            }
            return 0;
        }
        if (*indicators) {
            auto runs = moel::collect_runs(run_dirs);
            auto rep = moel::compute_indicators(runs, theta, nadir);
            for (const auto& f : moel::write_indicator_outputs(rep, ind_out)) std::cout << "wrote " << f << "\n";
            std::cout << moel::summarize_indicators(rep.rows);
            return 0;
        }
        if (*report) return run_report(report_dir);
    } catch (const moel::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
