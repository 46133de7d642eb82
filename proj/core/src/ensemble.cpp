#include "qwalk/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qwalk/walker.hpp"

namespace qwalk {

namespace {

// Realizations are reduced in fixed-size chunks in index order. Chunk
// contents never depend on which thread computed them, so the merged result
// is bit-identical for any worker count.
constexpr int kChunkSize = 8;

struct KahanArray {
    std::vector<double> sum, comp;
    explicit KahanArray(std::size_t n) : sum(n, 0.0), comp(n, 0.0) {}
    void add(std::size_t i, double v) {
        const double y = v - comp[i];
        const double t = sum[i] + y;
        comp[i] = (t - sum[i]) - y;
        sum[i] = t;
    }
};

int effective_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

void RunConfig::validate() const {
    validate_schedule(schedule);
    if (t_max < 1) throw std::invalid_argument("config: t_max must be >= 1");
    if (n_realizations < 1) throw std::invalid_argument("config: n_realizations must be >= 1");
    if (!spinor.is_normalized())
        throw std::invalid_argument("config: initial spinor must be normalized");
    if (!coin.is_unitary()) throw std::invalid_argument("config: coin must be unitary");
    if (snapshot_times.empty())
        throw std::invalid_argument("config: snapshot_times must be nonempty");
    int prev = -1;
    for (int t : snapshot_times) {
        if (t < 0 || t > t_max)
            throw std::invalid_argument("config: snapshot times must lie in [0, t_max]");
        if (t <= prev)
            throw std::invalid_argument("config: snapshot times must be strictly increasing");
        prev = t;
    }
    const long long sites = static_cast<long long>(l_max(schedule)) * t_max;
    if (sites > (1LL << 26))
        throw std::invalid_argument("config: l_max * t_max exceeds the library limit of 2^26");
}

std::vector<int> default_snapshot_times(int t_max) {
    std::vector<int> out;
    for (int t = 1; t <= t_max; t *= 2) {
        out.push_back(t);
        if (t > t_max / 2) break;
    }
    if (out.empty() || out.back() != t_max) out.push_back(t_max);
    return out;
}

RealizationResult run_single(const RunConfig& config, int realization_index) {
    config.validate();
    if (realization_index < 0)
        throw std::invalid_argument("run_single: realization_index must be >= 0");

    const int lm = l_max(config.schedule);
    const std::vector<int> seq =
        sample_sequence(config.schedule, config.t_max,
                        SeedSpec{config.master_seed, realization_index});

    Walker walker(config.spinor, config.coin, lm * config.t_max);

    RealizationResult out;
    out.moments.mean.assign(static_cast<std::size_t>(config.t_max) + 1, 0.0);
    out.moments.second_moment.assign(static_cast<std::size_t>(config.t_max) + 1, 0.0);

    std::size_t snap = 0;
    const auto snapshot_if_due = [&](int t) {
        if (snap < config.snapshot_times.size() && config.snapshot_times[snap] == t) {
            out.snapshots.push_back(trimmed(occupation(walker.state()), lm * std::max(t, 1)));
            ++snap;
        }
    };

    snapshot_if_due(0);
    double max_dev = 0;
    for (int t = 1; t <= config.t_max; ++t) {
        const TickMoments tick = walker.step(seq[static_cast<std::size_t>(t - 1)]);
        out.moments.mean[static_cast<std::size_t>(t)] = tick.mean;
        out.moments.second_moment[static_cast<std::size_t>(t)] = tick.second;
        max_dev = std::max(max_dev, std::abs(tick.norm - 1.0));
        snapshot_if_due(t);
    }
    if (max_dev > 1e-9)
        throw std::runtime_error("run_single: norm drifted by " + std::to_string(max_dev));
    out.max_norm_deviation = max_dev;
    return out;
}

EnsembleResult run_ensemble(const RunConfig& config, int num_threads) {
    config.validate();
    const int n_real = config.n_realizations;
    const int n_chunks = (n_real + kChunkSize - 1) / kChunkSize;
    const int lm = l_max(config.schedule);
    const std::size_t n_ticks = static_cast<std::size_t>(config.t_max) + 1;

    struct ChunkSums {
        KahanArray mean, second;
        std::vector<std::vector<double>> density;  // per snapshot, per site
        double max_norm_dev = 0;
        ChunkSums(std::size_t ticks, const std::vector<std::size_t>& snap_sizes)
            : mean(ticks), second(ticks) {
            density.reserve(snap_sizes.size());
            for (std::size_t n : snap_sizes) density.emplace_back(n, 0.0);
        }
    };

    std::vector<std::size_t> snap_sizes;
    snap_sizes.reserve(config.snapshot_times.size());
    for (int t : config.snapshot_times)
        snap_sizes.push_back(2 * static_cast<std::size_t>(lm) * std::max(t, 1) + 1);

    std::vector<ChunkSums> chunks;
    chunks.reserve(static_cast<std::size_t>(n_chunks));
    for (int c = 0; c < n_chunks; ++c) chunks.emplace_back(n_ticks, snap_sizes);

    std::atomic<int> next_chunk{0};
    const auto worker = [&] {
        for (;;) {
            const int c = next_chunk.fetch_add(1, std::memory_order_relaxed);
            if (c >= n_chunks) return;
            ChunkSums& out = chunks[static_cast<std::size_t>(c)];
            const int k_end = std::min((c + 1) * kChunkSize, n_real);
            for (int k = c * kChunkSize; k < k_end; ++k) {
                const RealizationResult r = run_single(config, k);
                for (std::size_t t = 0; t < n_ticks; ++t) {
                    out.mean.add(t, r.moments.mean[t]);
                    out.second.add(t, r.moments.second_moment[t]);
                }
                for (std::size_t s = 0; s < r.snapshots.size(); ++s) {
                    const std::vector<double>& src = r.snapshots[s].values;
                    std::vector<double>& dst = out.density[s];
                    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
                }
                out.max_norm_dev = std::max(out.max_norm_dev, r.max_norm_deviation);
            }
        }
    };

    const int n_workers = std::min(effective_threads(num_threads), n_chunks);
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    // ordered merge: chunk index order, compensated
    KahanArray mean(n_ticks), second(n_ticks);
    std::vector<std::vector<double>> density;
    density.reserve(snap_sizes.size());
    for (std::size_t n : snap_sizes) density.emplace_back(n, 0.0);
    double max_norm_dev = 0;
    for (const ChunkSums& c : chunks) {
        for (std::size_t t = 0; t < n_ticks; ++t) {
            mean.add(t, c.mean.sum[t]);
            mean.add(t, -c.mean.comp[t]);
            second.add(t, c.second.sum[t]);
            second.add(t, -c.second.comp[t]);
        }
        for (std::size_t s = 0; s < density.size(); ++s)
            for (std::size_t i = 0; i < density[s].size(); ++i) density[s][i] += c.density[s][i];
        max_norm_dev = std::max(max_norm_dev, c.max_norm_dev);
    }

    EnsembleResult out;
    out.config = config;
    out.n_realizations = n_real;
    out.max_norm_deviation = max_norm_dev;
    out.moments.mean.resize(n_ticks);
    out.moments.second_moment.resize(n_ticks);
    const double inv = 1.0 / n_real;
    for (std::size_t t = 0; t < n_ticks; ++t) {
        out.moments.mean[t] = mean.sum[t] * inv;
        out.moments.second_moment[t] = second.sum[t] * inv;
    }
    out.averaged_densities.reserve(density.size());
    for (std::size_t s = 0; s < density.size(); ++s) {
        Density d;
        d.values = std::move(density[s]);
        for (double& v : d.values) v *= inv;
        d.origin_index = static_cast<int>(d.values.size() / 2);
        d.time = config.snapshot_times[s];
        out.averaged_densities.push_back(std::move(d));
    }
    return out;
}

}  // namespace qwalk
