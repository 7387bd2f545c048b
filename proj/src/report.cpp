#include "moel/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "moel/error.hpp"
#include "moel/moea.hpp"

namespace fs = std::filesystem;

namespace moel {

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::vector<double> full(const ObjectiveVector& v) { return {v.f_p, v.f_pd, v.f_cd}; }

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << text;
}

} // namespace

std::map<int, std::vector<std::vector<double>>> RunLog::generations() const
{
    std::map<int, std::vector<std::vector<double>>> out;
    for (const auto& r : rows) out[r.generation].push_back(full(r.metrics.objectives));
    return out;
}

RunLog load_run(const std::string& directory)
{
    const fs::path dir(directory);
    if (!fs::exists(dir / "objectives.csv"))
        throw Error(ErrorKind::Io, "missing logs: " + (dir / "objectives.csv").string());
    RunLog log;
    log.directory = directory;
    log.rows = read_objective_csv((dir / "objectives.csv").string());
    if (log.rows.empty()) throw Error(ErrorKind::Io, "missing logs: " + directory + " has an empty objective log");
    auto manifest = read_manifest((dir / "manifest.json").string());
    log.mode = manifest.mode;
    log.seed = manifest.seed;
    return log;
}

std::vector<RunLog> collect_runs(const std::vector<std::string>& paths)
{
    std::vector<RunLog> runs;
    for (const auto& p : paths) {
        const fs::path dir(p);
        if (fs::exists(dir / "objectives.csv")) {
            runs.push_back(load_run(p));
            continue;
        }
        if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "missing logs: " + p);
        std::vector<fs::path> subs;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_directory() && fs::exists(e.path() / "objectives.csv")) subs.push_back(e.path());
        if (subs.empty()) throw Error(ErrorKind::Io, "missing logs: no runs under " + p);
        std::sort(subs.begin(), subs.end());
        for (const auto& s : subs) runs.push_back(load_run(s.string()));
    }
    return runs;
}

IndicatorReport compute_indicators(const std::vector<RunLog>& runs, double theta, double nadir)
{
    if (runs.empty()) throw Error(ErrorKind::Io, "missing logs: no runs given");
    IndicatorReport report;
    report.theta = theta;
    report.nadir = nadir;

    std::vector<std::vector<double>> history;
    for (const auto& run : runs)
        for (const auto& r : run.rows) history.push_back(full(r.metrics.objectives));
    report.reference = build_pseudo_pf(history);
    const std::vector<double> nadir_point(3, nadir);

    for (const auto& run : runs) {
        auto gens = run.generations();
        for (const auto& [gen, points] : gens) {
            std::vector<std::vector<double>> normalized;
            for (const auto& p : points) normalized.push_back(report.reference.bounds.normalize(p));
            std::vector<std::vector<double>> front;
            for (auto i : nondominated_indices(normalized)) front.push_back(normalized[i]);
            report.rows.push_back({run.seed, gen, hypervolume(front, nadir_point),
                                   cpf(normalized, report.reference, theta), run.mode});
        }

        // Knee of the final population's front, among members inside the nadir box.
        const int last = gens.rbegin()->first;
        std::vector<const ObjectiveRow*> final_rows;
        for (const auto& r : run.rows)
            if (r.generation == last) final_rows.push_back(&r);
        std::vector<std::vector<double>> normalized;
        for (auto* r : final_rows) normalized.push_back(report.reference.bounds.normalize(full(r->metrics.objectives)));
        std::vector<std::vector<double>> front;
        std::vector<const ObjectiveRow*> owners;
        for (auto i : nondominated_indices(normalized)) {
            bool inside = std::all_of(normalized[i].begin(), normalized[i].end(), [&](double x) { return x < nadir; });
            if (!inside) continue;
            front.push_back(normalized[i]);
            owners.push_back(final_rows[i]);
        }
        if (front.empty()) {
            std::clog << "warning: " << run.directory << " has no final member inside the nadir box; no knee point\n";
            continue;
        }
        auto k = knee_point(front, nadir_point);
        report.knees.push_back({run.seed, run.mode, owners[k]->metrics.objectives});
    }
    return report;
}

std::vector<std::string> write_indicator_outputs(const IndicatorReport& report, const std::string& out_dir)
{
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    std::ostringstream ind;
    ind << "trial,generation,HV,CPF,mode\n";
    for (const auto& r : report.rows)
        ind << r.trial << ',' << r.generation << ',' << num(r.hv) << ',' << num(r.cpf) << ',' << r.mode << '\n';

    std::ostringstream knee;
    knee << "trial,mode,f_P,f_PD,f_CD\n";
    for (const auto& k : report.knees)
        knee << k.trial << ',' << k.mode << ',' << num(k.objectives.f_p) << ',' << num(k.objectives.f_pd) << ','
             << num(k.objectives.f_cd) << '\n';

    // Cross-trial means per (mode, generation).
    std::map<std::pair<std::string, int>, std::tuple<double, double, int>> acc;
    for (const auto& r : report.rows) {
        auto& [hv, c, n] = acc[{r.mode, r.generation}];
        hv += r.hv;
        c += r.cpf;
        ++n;
    }
    std::ostringstream means;
    means << "mode,generation,mean_HV,mean_CPF,trials\n";
    for (const auto& [key, val] : acc) {
        auto [hv, c, n] = val;
        means << key.first << ',' << key.second << ',' << num(hv / n) << ',' << num(c / n) << ',' << n << '\n';
    }

    std::ostringstream ref;
    ref << "f_P,f_PD,f_CD\n";
    for (const auto& p : report.reference.points) ref << num(p[0]) << ',' << num(p[1]) << ',' << num(p[2]) << '\n';

    std::vector<std::string> files{(dir / "indicators.csv").string(), (dir / "knee.csv").string(),
                                   (dir / "indicator_means.csv").string(), (dir / "pseudo_pf.csv").string(),
                                   (dir / "hv.svg").string()};
    write_text(files[0], ind.str());
    write_text(files[1], knee.str());
    write_text(files[2], means.str());
    write_text(files[3], ref.str());
    write_text(files[4], hv_svg(report.rows));
    return files;
}

std::vector<IndicatorRow> read_indicator_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "missing logs: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "trial,generation,HV,CPF,mode")
        throw Error(ErrorKind::Io, path + ": unexpected header");
    std::vector<IndicatorRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 5) throw Error(ErrorKind::Io, path + ": expected 5 fields");
        rows.push_back({std::stoull(f[0]), std::stoi(f[1]), std::stod(f[2]), std::stod(f[3]), f[4]});
    }
    return rows;
}

std::map<std::string, std::map<std::uint64_t, double>> final_hv_by_mode(const std::vector<IndicatorRow>& rows)
{
    std::map<std::pair<std::string, std::uint64_t>, const IndicatorRow*> last;
    for (const auto& r : rows) {
        auto& slot = last[{r.mode, r.trial}];
        if (!slot || r.generation > slot->generation) slot = &r;
    }
    std::map<std::string, std::map<std::uint64_t, double>> out;
    for (const auto& [key, r] : last) out[key.first][key.second] = r->hv;
    return out;
}

double median(std::vector<double> values)
{
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string summarize_indicators(const std::vector<IndicatorRow>& rows)
{
    std::map<std::pair<std::string, std::uint64_t>, const IndicatorRow*> last;
    for (const auto& r : rows) {
        auto& slot = last[{r.mode, r.trial}];
        if (!slot || r.generation > slot->generation) slot = &r;
    }
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_mode;
    for (const auto& [key, r] : last) {
        by_mode[key.first].first.push_back(r->hv);
        by_mode[key.first].second.push_back(r->cpf);
    }
    std::ostringstream out;
    out << "mode       trials  median_HV  mean_HV    median_CPF  mean_CPF\n";
    for (const auto& [mode, vals] : by_mode) {
        auto mean = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x;
            return v.empty() ? 0.0 : s / static_cast<double>(v.size());
        };
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-10s %6zu  %9.4f  %9.4f  %10.4f  %8.4f\n", mode.c_str(), vals.first.size(),
                      median(vals.first), mean(vals.first), median(vals.second), mean(vals.second));
        out << buf;
    }
    return out.str();
}

std::string hv_svg(const std::vector<IndicatorRow>& rows)
{
    std::map<std::string, std::map<int, std::pair<double, int>>> series;
    int max_gen = 1;
    double max_hv = 0.0;
    for (const auto& r : rows) {
        auto& [s, n] = series[r.mode][r.generation];
        s += r.hv;
        ++n;
        max_gen = std::max(max_gen, r.generation);
    }
    for (const auto& [mode, pts] : series)
        for (const auto& [g, sn] : pts) max_hv = std::max(max_hv, sn.first / sn.second);
    if (max_hv <= 0.0) max_hv = 1.0;

    const double w = 640, h = 400, left = 60, right = 150, top = 20, bottom = 50;
    const double pw = w - left - right, ph = h - top - bottom;
    auto px = [&](int g) { return left + (max_gen > 1 ? (g - 1) * pw / (max_gen - 1) : 0.0); };
    auto py = [&](double v) { return top + ph - v / max_hv * ph; };
    const char* colors[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\" font-size=\"12\">generation</text>\n"
      << "<text x=\"15\" y=\"" << top + ph / 2 << "\" font-size=\"12\" transform=\"rotate(-90 15 " << top + ph / 2
      << ")\" text-anchor=\"middle\">mean HV</text>\n"
      << "<text x=\"" << left - 5 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\" font-size=\"10\">"
      << short_num(max_hv) << "</text>\n"
      << "<text x=\"" << left - 5 << "\" y=\"" << top + ph << "\" text-anchor=\"end\" font-size=\"10\">0</text>\n"
      << "<text x=\"" << left + pw << "\" y=\"" << top + ph + 15 << "\" text-anchor=\"end\" font-size=\"10\">"
      << max_gen << "</text>\n";
    std::size_t ci = 0;
    for (const auto& [mode, pts] : series) {
        const char* color = colors[ci % std::size(colors)];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [g, sn] : pts) s << px(g) << ',' << py(sn.first / sn.second) << ' ';
        s << "\"/>\n";
        const double ly = top + 20 + 18.0 * static_cast<double>(ci);
        s << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 35 << "\" y2=\"" << ly
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
          << "<text x=\"" << left + pw + 40 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">A_" << mode << "</text>\n";
        ++ci;
    }
    s << "</svg>\n";
    return s.str();
}

} // namespace moel
