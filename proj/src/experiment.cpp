#include "moel/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "moel/error.hpp"
#include "moel/indicators.hpp"

namespace fs = std::filesystem;

namespace moel {

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json metrics_json(const MetricValues& m)
{
    return {{"f_P", m.objectives.f_p}, {"f_PD", m.objectives.f_pd}, {"f_CD", m.objectives.f_cd},
            {"P", m.playability},      {"PD", m.player_diversity}, {"CD", m.content_diversity}};
}

MetricValues metrics_from_json(const nlohmann::json& j)
{
    MetricValues m;
    m.objectives = {j.at("f_P").get<double>(), j.at("f_PD").get<double>(), j.at("f_CD").get<double>()};
    m.playability = j.at("P").get<double>();
    m.player_diversity = j.at("PD").get<double>();
    m.content_diversity = j.at("CD").get<double>();
    return m;
}

bool finite(const MetricValues& m)
{
    return std::isfinite(m.objectives.f_p) && std::isfinite(m.objectives.f_pd) && std::isfinite(m.objectives.f_cd);
}

void evaluate_member(PopulationMember& m, const TrainConfig& cfg, const TileVocabulary& vocab, const fs::path& dir)
{
    auto rng = evaluation_stream(cfg, m.id, m.born);
    m.metrics = evaluate_generator(m.generator.net, cfg, vocab, rng);
    if (!finite(*m.metrics)) {
        const auto dump = dir / ("nonfinite_member_" + std::to_string(m.id) + ".json");
        write_text(dump, checkpoint_json(m.generator.net, "non-finite objectives; lineage " + m.lineage));
        throw Error(ErrorKind::NonFiniteObjective,
                    "member " + std::to_string(m.id) + " produced non-finite objectives; dumped to " + dump.string());
    }
}

void append_generation(std::ostream& csv, int generation, const std::vector<PopulationMember>& population)
{
    for (const auto& m : population)
        csv << format_objective_row({generation, m.id, m.lineage, *m.metrics}) << '\n';
}

} // namespace

std::string format_objective_row(const ObjectiveRow& row)
{
    const auto& m = row.metrics;
    return std::to_string(row.generation) + ',' + std::to_string(row.member_id) + ',' + row.lineage + ',' +
           num(m.objectives.f_p) + ',' + num(m.objectives.f_pd) + ',' + num(m.objectives.f_cd) + ',' +
           num(m.playability) + ',' + num(m.player_diversity) + ',' + num(m.content_diversity);
}

std::vector<ObjectiveRow> read_objective_csv(const std::string& path)
{
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || line != kObjectiveCsvHeader)
        throw Error(ErrorKind::Io, path + ": missing or unexpected header");
    std::vector<ObjectiveRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 9) throw Error(ErrorKind::Io, path + ":" + std::to_string(lineno) + ": expected 9 fields");
        try {
            ObjectiveRow r;
            r.generation = std::stoi(f[0]);
            r.member_id = std::stoull(f[1]);
            r.lineage = f[2];
            r.metrics.objectives = {std::stod(f[3]), std::stod(f[4]), std::stod(f[5])};
            r.metrics.playability = std::stod(f[6]);
            r.metrics.player_diversity = std::stod(f[7]);
            r.metrics.content_diversity = std::stod(f[8]);
            rows.push_back(std::move(r));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Io, path + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
    return rows;
}

std::string manifest_json(const RunManifest& manifest)
{
    nlohmann::json j;
    j["mode"] = manifest.mode;
    j["seed"] = manifest.seed;
    j["final_generation"] = manifest.final_generation;
    auto members = nlohmann::json::array();
    for (const auto& e : manifest.members)
        members.push_back({{"id", e.id},
                           {"lineage", e.lineage},
                           {"born", e.born},
                           {"checkpoint", e.checkpoint},
                           {"pareto", e.pareto},
                           {"metrics", metrics_json(e.metrics)}});
    j["members"] = std::move(members);
    return j.dump(2) + "\n";
}

RunManifest read_manifest(const std::string& path)
{
    try {
        auto j = nlohmann::json::parse(read_text(path));
        RunManifest m;
        m.mode = j.at("mode").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.final_generation = j.at("final_generation").get<int>();
        for (const auto& e : j.at("members"))
            m.members.push_back({e.at("id").get<std::uint64_t>(), e.at("lineage").get<std::string>(),
                                 e.at("born").get<int>(), e.at("checkpoint").get<std::string>(),
                                 e.at("pareto").get<bool>(), metrics_from_json(e.at("metrics"))});
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Io, path + ": " + e.what());
    }
}

TileVocabulary load_vocabulary(const ExperimentConfig& cfg)
{
    return cfg.vocab_path.empty() ? TileVocabulary::standard() : TileVocabulary::load(cfg.vocab_path);
}

RunArtifacts run_trial(const ExperimentConfig& cfg, const std::vector<Level>& corpus, const TileVocabulary& vocab,
                       const std::string& directory)
{
    const TrainConfig& tc = cfg.train;
    tc.validate();
    const fs::path dir(directory);
    fs::create_directories(dir / "checkpoints");
    fs::create_directories(dir / "samples");
    fs::create_directories(dir / "renders");
    write_text(dir / "config.txt", dump_config(cfg));

    const std::size_t v = vocab.size();
    RunArtifacts art;
    art.directory = dir.string();
    art.objectives_csv = (dir / "objectives.csv").string();
    art.manifest = (dir / "manifest.json").string();

    std::ostringstream csv;
    csv << kObjectiveCsvHeader << '\n';

    std::clog << "[" << mode_name(tc.mode) << " seed " << tc.seed << "] warm start, " << tc.warm_epochs
              << " epochs\n";
    auto warm = warm_start(corpus, tc, v);
    Discriminator d = std::move(warm.discriminator);

    int generation = 1;
    std::vector<PopulationMember> population;
    std::uint64_t next_id = 0;
    for (auto& g : warm.generators) {
        PopulationMember m;
        m.generator = std::move(g);
        m.id = next_id++;
        m.lineage = "init";
        m.born = generation;
        evaluate_member(m, tc, vocab, dir);
        population.push_back(std::move(m));
    }
    append_generation(csv, generation, population);

    SdeSelector selector;
    while (static_cast<std::size_t>(generation) < tc.generations) {
        std::vector<Generator> current;
        current.reserve(population.size());
        for (const auto& m : population) current.push_back(m.generator);
        refresh_discriminator(d, corpus, current, tc, v, static_cast<std::uint64_t>(generation));

        auto offspring = variation(population, d, tc, v, generation + 1, next_id);
        next_id += offspring.size();
        for (auto& child : offspring) evaluate_member(child, tc, vocab, dir);

        std::vector<PopulationMember> pool = std::move(population);
        for (auto& child : offspring) pool.push_back(std::move(child));
        std::vector<ObjectiveVector> objs;
        std::vector<int> born;
        for (const auto& m : pool) {
            objs.push_back(m.objectives());
            born.push_back(m.born);
        }
        auto keep = selector.select(objs, born, tc.lambda, tc.mode);
        population.clear();
        for (auto i : keep) population.push_back(std::move(pool[i]));

        ++generation;
        append_generation(csv, generation, population);
        std::clog << "[" << mode_name(tc.mode) << " seed " << tc.seed << "] generation " << generation << "/"
                  << tc.generations << '\n';
    }
    write_text(art.objectives_csv, csv.str());

    // Pareto flags under the optimised objectives.
    std::vector<std::vector<double>> active;
    for (const auto& m : population) active.push_back(project(m.objectives(), tc.mode));
    auto nd = nondominated_indices(active);

    RunManifest manifest;
    manifest.mode = std::string(mode_name(tc.mode));
    manifest.seed = tc.seed;
    manifest.final_generation = generation;
    for (std::size_t i = 0; i < population.size(); ++i) {
        const auto& m = population[i];
        const std::string stem = "member_" + std::to_string(m.id);
        const std::string ckpt = "checkpoints/" + stem + ".json";
        save_checkpoint(m.generator.net, (dir / ckpt).string(),
                        "seed " + std::to_string(tc.seed) + ", member " + std::to_string(m.id) + ", born " +
                            std::to_string(m.born));
        art.checkpoints.push_back((dir / ckpt).string());
        manifest.members.push_back({m.id, m.lineage, m.born, ckpt,
                                    std::find(nd.begin(), nd.end(), i) != nd.end(), *m.metrics});

        // Evaluation levels of the final population, with agent traces.
        auto rng = evaluation_stream(tc, m.id, m.born);
        auto levels = sample_levels(m.generator.net, tc, v, tc.eval_samples, rng);
        std::string level_text, render_text;
        for (std::size_t k = 0; k < levels.size(); ++k) {
            auto sim = simulate(levels[k], vocab);
            const char* sep = k ? "\n\n" : "";
            level_text += sep + serialize_level(levels[k], vocab);
            render_text += sep + render_trace(levels[k], vocab, sim.trace);
        }
        auto sample_path = dir / "samples" / (stem + ".txt");
        auto render_path = dir / "renders" / (stem + ".txt");
        write_text(sample_path, level_text + "\n");
        write_text(render_path, render_text + "\n");
        art.samples.push_back(sample_path.string());
        art.renders.push_back(render_path.string());
    }
    write_text(art.manifest, manifest_json(manifest));
    return art;
}

std::vector<RunArtifacts> run_experiment(const ExperimentConfig& cfg)
{
    cfg.train.validate();
    if (cfg.trials == 0) throw Error(ErrorKind::InvalidConfig, "trials must be positive");
    auto vocab = load_vocabulary(cfg);
    auto corpus = load_corpus(cfg.corpus_path, vocab);
    if (corpus.empty()) throw Error(ErrorKind::EmptyCorpus, cfg.corpus_path + " holds no levels");

    std::vector<RunArtifacts> out;
    for (std::size_t k = 0; k < cfg.trials; ++k) {
        ExperimentConfig trial = cfg;
        trial.train.seed = cfg.train.seed + k;
        trial.trials = 1;
        std::string dir = cfg.trials == 1 ? cfg.output_dir
                                          : (fs::path(cfg.output_dir) / ("trial_" + std::to_string(k))).string();
        trial.output_dir = dir;
        out.push_back(run_trial(trial, corpus, vocab, dir));
    }
    return out;
}

ExperimentConfig load_run_config(const std::string& run_dir)
{
    ExperimentConfig cfg;
    load_config_file(cfg, (fs::path(run_dir) / "config.txt").string());
    return cfg;
}

MetricValues reevaluate_member(const ExperimentConfig& cfg, const TileVocabulary& vocab, const std::string& checkpoint,
                               std::uint64_t member_id, int born)
{
    auto net = load_checkpoint(checkpoint);
    auto rng = evaluation_stream(cfg.train, member_id, born);
    return evaluate_generator(net, cfg.train, vocab, rng);
}

SampleOutputs sample_checkpoint(const std::string& checkpoint, const TrainConfig& cfg, const TileVocabulary& vocab,
                                std::size_t count, std::uint64_t seed, const std::string& out_dir)
{
    auto net = load_checkpoint(checkpoint);
    if (net.output_size() != cfg.height * cfg.width * vocab.size())
        throw Error(ErrorKind::CorruptCheckpoint,
                    checkpoint + ": output size " + std::to_string(net.output_size()) + " does not match " +
                        std::to_string(cfg.height) + "x" + std::to_string(cfg.width) + "x" +
                        std::to_string(vocab.size()));
    TrainConfig tc = cfg;
    tc.z_dim = net.input_size();

    SampleOutputs out;
    if (count == 0) return out;
    fs::create_directories(out_dir);
    Rng rng(seed);
    auto levels = sample_levels(net, tc, vocab.size(), count, rng);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        auto sim = simulate(levels[i], vocab);
        const fs::path base = fs::path(out_dir);
        const std::string idx = std::to_string(i);
        auto level_path = base / ("level_" + idx + ".txt");
        auto render_path = base / ("render_" + idx + ".txt");
        auto trace_path = base / ("trace_" + idx + ".csv");
        write_text(level_path, serialize_level(levels[i], vocab) + "\n");
        write_text(render_path, render_trace(levels[i], vocab, sim.trace) + "\n");
        write_text(trace_path, trace_csv(sim.trace));
        out.levels.push_back(level_path.string());
        out.renders.push_back(render_path.string());
        out.traces.push_back(trace_path.string());
    }
    return out;
}

} // namespace moel
