#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qwalk/analysis.hpp"
#include "qwalk/density.hpp"
#include "qwalk/ensemble.hpp"

namespace qwalk {

// All artifacts are plain CSV: one header row, '#'-prefixed metadata lines
// before it, doubles printed with %.17g so re-runs are byte-comparable.

void write_density_csv(const std::filesystem::path& path, const Density& d);
Density read_density_csv(const std::filesystem::path& path);

void write_moments_csv(const std::filesystem::path& path, const MomentSeries& m);
MomentSeries read_moments_csv(const std::filesystem::path& path);

void write_collapse_csv(const std::filesystem::path& path, const CollapseExport::Curve& curve,
                        double gamma);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

// Sidecar describing a CLI invocation: the effective argv plus the parsed
// configuration, enough to reproduce every artifact byte for byte.
struct RunMeta {
    std::string command;
    std::vector<std::string> argv;
    std::string schedule;
    std::vector<double> spinor;  // a0.re, a0.im, b0.re, b0.im
    int t_max = 0;
    int n_realizations = 0;
    std::uint64_t seed = 0;
    std::vector<int> snapshot_times;
    int threads = 0;
    std::vector<std::string> outputs;
};

void write_meta_json(const std::filesystem::path& path, const RunMeta& meta);
RunMeta read_meta_json(const std::filesystem::path& path);

std::string format_double(double v);  // %.17g

}  // namespace qwalk
