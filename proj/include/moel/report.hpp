#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "moel/experiment.hpp"
#include "moel/indicators.hpp"

namespace moel {

struct RunLog {
    std::string directory;
    std::string mode;
    std::uint64_t seed = 0;
    std::vector<ObjectiveRow> rows;

    /// Full objective vectors per generation, in generation order.
    std::map<int, std::vector<std::vector<double>>> generations() const;
};

RunLog load_run(const std::string& directory);

/// Expands each path: a directory holding objectives.csv is one run; otherwise
/// its immediate subdirectories that hold one are collected in name order.
std::vector<RunLog> collect_runs(const std::vector<std::string>& paths);

struct IndicatorRow {
    std::uint64_t trial = 0;
    int generation = 0;
    double hv = 0.0;
    double cpf = 0.0;
    std::string mode;
};

struct KneeRow {
    std::uint64_t trial = 0;
    std::string mode;
    ObjectiveVector objectives;
};

struct IndicatorReport {
    ReferenceFront reference;
    std::vector<IndicatorRow> rows;
    std::vector<KneeRow> knees;
    double theta = 0.1;
    double nadir = 1.1;
};

/// Pseudo front over every logged member of every run, then per-generation HV
/// and CPF of each run's population and the knee point of its final front,
/// all in the full three-objective space.
IndicatorReport compute_indicators(const std::vector<RunLog>& runs, double theta, double nadir = 1.1);

/// Writes indicators.csv, knee.csv, indicator_means.csv and hv.svg.
std::vector<std::string> write_indicator_outputs(const IndicatorReport& report, const std::string& out_dir);

std::vector<IndicatorRow> read_indicator_csv(const std::string& path);

/// Final-generation HV per trial, grouped by mode.
std::map<std::string, std::map<std::uint64_t, double>> final_hv_by_mode(const std::vector<IndicatorRow>& rows);

/// Per-mode summary table of final HV and CPF.
std::string summarize_indicators(const std::vector<IndicatorRow>& rows);

/// Mean HV per generation for each mode as a static SVG line chart.
std::string hv_svg(const std::vector<IndicatorRow>& rows);

double median(std::vector<double> values);

} // namespace moel
