#include "moel/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "moel/error.hpp"

namespace moel {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::size_t to_size(std::string_view key, std::string_view v)
{
    std::size_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw Error(ErrorKind::InvalidConfig, std::string(key) + ": expected a non-negative integer, got '" +
                                                  std::string(v) + "'");
    return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v)
{
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw Error(ErrorKind::InvalidConfig, std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
    return out;
}

double to_double(std::string_view key, std::string_view v)
{
    try {
        std::size_t used = 0;
        std::string s(v);
        double out = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return out;
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidConfig, std::string(key) + ": expected a number, got '" + std::string(v) + "'");
    }
}

std::vector<std::size_t> to_sizes(std::string_view key, std::string_view v)
{
    std::vector<std::size_t> out;
    while (!v.empty()) {
        auto comma = v.find(',');
        out.push_back(to_size(key, trim(v.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    if (out.empty()) throw Error(ErrorKind::InvalidConfig, std::string(key) + ": empty list");
    return out;
}

std::string join(const std::vector<std::size_t>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

} // namespace

void apply_profile(ExperimentConfig& cfg, std::string_view profile)
{
    const TrainConfig defaults;
    if (profile == "desk") {
        cfg.train.lambda = 8;
        cfg.train.generations = 20;
        cfg.train.eval_samples = 10;
        cfg.train.warm_epochs = 30;
        // Fewer warm-start epochs: scale both learning rates so lr * T_w
        // matches the full profile.
        const double scale = static_cast<double>(defaults.warm_epochs) / 30.0;
        cfg.train.g_adam.lr = defaults.g_adam.lr * scale;
        cfg.train.d_adam.lr = defaults.d_adam.lr * scale;
    } else if (profile == "full") {
        cfg.train.lambda = defaults.lambda;
        cfg.train.generations = defaults.generations;
        cfg.train.eval_samples = defaults.eval_samples;
        cfg.train.warm_epochs = defaults.warm_epochs;
        cfg.train.g_adam.lr = defaults.g_adam.lr;
        cfg.train.d_adam.lr = defaults.d_adam.lr;
    } else {
        throw Error(ErrorKind::InvalidConfig, "profile: expected 'full' or 'desk', got '" + std::string(profile) + "'");
    }
    cfg.profile = std::string(profile);
}

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value)
{
    value = trim(value);
    auto& t = cfg.train;
    if (key == "profile") apply_profile(cfg, value);
    else if (key == "lambda") t.lambda = to_size(key, value);
    else if (key == "generations") t.generations = to_size(key, value);
    else if (key == "warm_epochs") t.warm_epochs = to_size(key, value);
    else if (key == "d_iters") t.d_iters = to_size(key, value);
    else if (key == "g_iters") t.g_iters = to_size(key, value);
    else if (key == "batch") t.batch = to_size(key, value);
    else if (key == "eval_samples") t.eval_samples = to_size(key, value);
    else if (key == "z_dim") t.z_dim = to_size(key, value);
    else if (key == "height") t.height = to_size(key, value);
    else if (key == "width") t.width = to_size(key, value);
    else if (key == "pattern_k") t.pattern_k = to_size(key, value);
    else if (key == "g_hidden") t.g_hidden = to_sizes(key, value);
    else if (key == "d_hidden") t.d_hidden = to_sizes(key, value);
    else if (key == "g_lr") t.g_adam.lr = to_double(key, value);
    else if (key == "g_weight_decay") t.g_adam.weight_decay = to_double(key, value);
    else if (key == "d_lr") t.d_adam.lr = to_double(key, value);
    else if (key == "d_weight_decay") t.d_adam.weight_decay = to_double(key, value);
    else if (key == "beta1") t.g_adam.beta1 = t.d_adam.beta1 = to_double(key, value);
    else if (key == "beta2") t.g_adam.beta2 = t.d_adam.beta2 = to_double(key, value);
    else if (key == "adam_eps") t.g_adam.eps = t.d_adam.eps = to_double(key, value);
    else if (key == "pd_offset") t.pd_scaling.offset = to_double(key, value);
    else if (key == "pd_scale") t.pd_scaling.scale = to_double(key, value);
    else if (key == "mode") t.mode = parse_mode(value);
    else if (key == "seed") t.seed = to_u64(key, value);
    else if (key == "corpus") cfg.corpus_path = std::string(value);
    else if (key == "vocab") cfg.vocab_path = std::string(value);
    else if (key == "trials") cfg.trials = to_size(key, value);
    else if (key == "out") cfg.output_dir = std::string(value);
    else if (key == "theta") cfg.theta = to_double(key, value);
    else throw Error(ErrorKind::InvalidConfig, "unknown config key '" + std::string(key) + "'");
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text, const std::string& origin)
{
    std::vector<std::pair<std::string, std::string>> entries;
    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorKind::InvalidConfig, origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        entries.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    }
    auto apply = [&](bool profile_pass) {
        for (const auto& [k, v] : entries) {
            if ((k == "profile") != profile_pass) continue;
            try {
                set_config_value(cfg, k, v);
            } catch (const Error& e) {
                throw Error(ErrorKind::InvalidConfig, origin + ": " + e.what());
            }
        }
    };
    apply(true);
    apply(false);
}

void load_config_file(ExperimentConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str(), path);
}

std::string dump_config(const ExperimentConfig& cfg)
{
    const auto& t = cfg.train;
    std::ostringstream o;
    o << "profile = " << cfg.profile << '\n'
      << "mode = " << mode_name(t.mode) << '\n'
      << "seed = " << t.seed << '\n'
      << "trials = " << cfg.trials << '\n'
      << "lambda = " << t.lambda << '\n'
      << "generations = " << t.generations << '\n'
      << "warm_epochs = " << t.warm_epochs << '\n'
      << "d_iters = " << t.d_iters << '\n'
      << "g_iters = " << t.g_iters << '\n'
      << "batch = " << t.batch << '\n'
      << "eval_samples = " << t.eval_samples << '\n'
      << "z_dim = " << t.z_dim << '\n'
      << "height = " << t.height << '\n'
      << "width = " << t.width << '\n'
      << "pattern_k = " << t.pattern_k << '\n'
      << "g_hidden = " << join(t.g_hidden) << '\n'
      << "d_hidden = " << join(t.d_hidden) << '\n'
      << "g_lr = " << fmt(t.g_adam.lr) << '\n'
      << "g_weight_decay = " << fmt(t.g_adam.weight_decay) << '\n'
      << "d_lr = " << fmt(t.d_adam.lr) << '\n'
      << "d_weight_decay = " << fmt(t.d_adam.weight_decay) << '\n'
      << "beta1 = " << fmt(t.g_adam.beta1) << '\n'
      << "beta2 = " << fmt(t.g_adam.beta2) << '\n'
      << "adam_eps = " << fmt(t.g_adam.eps) << '\n'
      << "pd_offset = " << fmt(t.pd_scaling.offset) << '\n'
      << "pd_scale = " << fmt(t.pd_scaling.scale) << '\n'
      << "corpus = " << cfg.corpus_path << '\n'
      << "vocab = " << cfg.vocab_path << '\n'
      << "out = " << cfg.output_dir << '\n'
      << "theta = " << fmt(cfg.theta) << '\n';
    return o.str();
}

} // namespace moel
