#pragma once

#include <cstdint>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/density.hpp"
#include "qwalk/schedule.hpp"

namespace qwalk {

// First and second moments at every tick t = 0..t_max. The variance is
// derived on access so the ensemble-averaged series automatically reports
// <x^2> - <x>^2 of the averaged moments.
struct MomentSeries {
    std::vector<double> mean;
    std::vector<double> second_moment;

    int t_max() const { return static_cast<int>(mean.size()) - 1; }
    double variance(int t) const {
        return second_moment[static_cast<std::size_t>(t)] -
               mean[static_cast<std::size_t>(t)] * mean[static_cast<std::size_t>(t)];
    }
};

struct RunConfig {
    StepSchedule schedule = RandomTwoPoint{0.5, 1};
    CoinOperator coin = CoinOperator::hadamard();
    InitialSpinor spinor = InitialSpinor::asymmetric();
    int t_max = 1000;
    int n_realizations = 1000;
    std::uint64_t master_seed = 1;
    std::vector<int> snapshot_times;  // strictly increasing, each in [0, t_max]

    void validate() const;  // throws std::invalid_argument
};

// Powers of two up to t_max (1, 2, 4, ..., plus t_max itself if not a power).
std::vector<int> default_snapshot_times(int t_max);

struct RealizationResult {
    std::vector<Density> snapshots;  // trimmed to the light cone l_max * t
    MomentSeries moments;
    double max_norm_deviation = 0;  // max over ticks of |sum f - 1|
};

struct EnsembleResult {
    std::vector<Density> averaged_densities;
    MomentSeries moments;  // disorder mean of the per-realization moments
    int n_realizations = 0;
    RunConfig config;
    double max_norm_deviation = 0;  // worst tick of any realization
};

// One disorder realization, deterministic in (config, realization_index).
RealizationResult run_single(const RunConfig& config, int realization_index);

// Arithmetic mean over realizations of densities and moments. Realizations
// are computed in parallel but reduced in fixed chunks in index order with
// compensated summation, so the result is bit-identical for any thread count.
// num_threads = 0 picks the hardware concurrency.
EnsembleResult run_ensemble(const RunConfig& config, int num_threads = 0);

}  // namespace qwalk
