#include "qwalk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qwalk {

namespace {

struct KahanSum {
    double sum = 0, comp = 0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

int wrap(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

}  // namespace

std::vector<cplx> DenseMatrix::apply(const std::vector<cplx>& v) const {
    std::vector<cplx> out(static_cast<std::size_t>(dim), cplx(0));
    for (int r = 0; r < dim; ++r) {
        cplx acc(0);
        const cplx* row = a.data() + static_cast<std::size_t>(r) * dim;
        for (int c = 0; c < dim; ++c) acc += row[c] * v[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

DenseMatrix build_step_matrix(const CoinOperator& coin, int ell, int capacity) {
    if (ell < 1) throw std::invalid_argument("build_step_matrix: ell must be >= 1");
    if (capacity < 1) throw std::invalid_argument("build_step_matrix: capacity must be >= 1");
    const int sites = 2 * capacity + 1;
    DenseMatrix u(2 * sites);
    for (int xi = 0; xi < sites; ++xi) {
        const int left_dst = wrap(xi - ell, sites);
        const int right_dst = wrap(xi + ell, sites);
        // column block (xi, L), (xi, R); chirality 0 = L, 1 = R
        u.at(2 * left_dst + 0, 2 * xi + 0) = coin.m[0];
        u.at(2 * left_dst + 0, 2 * xi + 1) = coin.m[1];
        u.at(2 * right_dst + 1, 2 * xi + 0) = coin.m[2];
        u.at(2 * right_dst + 1, 2 * xi + 1) = coin.m[3];
    }
    return u;
}

double unitarity_defect(const DenseMatrix& u) {
    double worst = 0;
    for (int r = 0; r < u.dim; ++r) {
        for (int c = 0; c < u.dim; ++c) {
            cplx acc(0);
            for (int k = 0; k < u.dim; ++k) acc += u.at(r, k) * std::conj(u.at(c, k));
            if (r == c) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

WalkerState dense_evolve(const RunConfig& config, const std::vector<int>& sequence) {
    if (sequence.empty()) throw std::invalid_argument("dense_evolve: empty sequence");
    if (static_cast<int>(sequence.size()) > kDenseTimeLimit)
        throw std::invalid_argument("dense_evolve: sequence longer than " +
                                    std::to_string(kDenseTimeLimit) + " ticks refused");
    for (int ell : sequence)
        if (ell < 1) throw std::invalid_argument("dense_evolve: step lengths must be >= 1");
    if (!config.spinor.is_normalized())
        throw std::invalid_argument("dense_evolve: spinor must be normalized");

    const int capacity = std::accumulate(sequence.begin(), sequence.end(), 0);
    const int sites = 2 * capacity + 1;

    std::vector<cplx> vec(2 * static_cast<std::size_t>(sites), cplx(0));
    vec[static_cast<std::size_t>(2 * capacity + 0)] = config.spinor.a0;  // x = 0, L
    vec[static_cast<std::size_t>(2 * capacity + 1)] = config.spinor.b0;  // x = 0, R

    for (int ell : sequence) {
        const DenseMatrix u = build_step_matrix(config.coin, ell, capacity);
        vec = u.apply(vec);
    }

    WalkerState out;
    out.psi_left.assign(static_cast<std::size_t>(sites), cplx(0));
    out.psi_right.assign(static_cast<std::size_t>(sites), cplx(0));
    out.origin_index = capacity;
    out.time = static_cast<int>(sequence.size());
    out.support_min = -capacity;
    out.support_max = capacity;
    for (int xi = 0; xi < sites; ++xi) {
        out.psi_left[static_cast<std::size_t>(xi)] = vec[static_cast<std::size_t>(2 * xi + 0)];
        out.psi_right[static_cast<std::size_t>(xi)] = vec[static_cast<std::size_t>(2 * xi + 1)];
    }
    return out;
}

Density exact_ensemble(const RunConfig& config) {
    const auto* rtp = std::get_if<RandomTwoPoint>(&config.schedule);
    if (rtp == nullptr)
        throw std::invalid_argument("exact_ensemble: schedule must be RandomTwoPoint");
    validate_schedule(config.schedule);
    const int t = config.t_max;
    if (t < 1 || t > kExactTimeLimit)
        throw std::invalid_argument("exact_ensemble: t_max must lie in [1, " +
                                    std::to_string(kExactTimeLimit) + "]");

    const int lm = l_max(config.schedule);
    const int radius = lm * t;
    const std::size_t n_sites = 2 * static_cast<std::size_t>(radius) + 1;
    std::vector<KahanSum> acc(n_sites);
    KahanSum total_weight;

    std::vector<int> seq(static_cast<std::size_t>(t), 1);
    // lexicographic over sequences, bit i of the mask = tick i+1 takes the long step
    for (std::uint64_t mask = 0; mask < (1ULL << t); ++mask) {
        int n_long = 0;
        for (int i = 0; i < t; ++i) {
            const bool is_long = (mask >> i) & 1ULL;
            seq[static_cast<std::size_t>(i)] = is_long ? lm : 1;
            n_long += is_long ? 1 : 0;
        }
        const double weight =
            std::pow(rtp->alpha, t - n_long) * std::pow(1.0 - rtp->alpha, n_long);
        total_weight.add(weight);
        if (weight == 0.0) continue;

        Walker walker(config.spinor, config.coin, radius);
        for (int i = 0; i < t; ++i) walker.step(seq[static_cast<std::size_t>(i)]);
        const WalkerState& s = walker.state();
        for (int x = s.support_min; x <= s.support_max; ++x) {
            const double f = std::norm(s.left_at(x)) + std::norm(s.right_at(x));
            acc[static_cast<std::size_t>(x + radius)].add(weight * f);
        }
    }

    if (std::abs(total_weight.sum - 1.0) > 1e-12)
        throw std::runtime_error("exact_ensemble: sequence weights sum to " +
                                 std::to_string(total_weight.sum));

    Density out;
    out.values.resize(n_sites);
    for (std::size_t i = 0; i < n_sites; ++i) out.values[i] = acc[i].sum;
    out.origin_index = radius;
    out.time = t;
    return out;
}

McComparison compare_exact_vs_mc(const RunConfig& config, int mc_realizations,
                                 int num_threads) {
    if (mc_realizations < 2)
        throw std::invalid_argument("compare_exact_vs_mc: need at least 2 realizations");

    McComparison out;
    out.exact = exact_ensemble(config);

    // Monte Carlo pass with per-site sum and sum of squares for the standard
    // error. Sites are few at oracle scale, so this stays cheap.
    RunConfig mc = config;
    mc.n_realizations = mc_realizations;
    mc.snapshot_times = {config.t_max};
    const EnsembleResult ens = run_ensemble(mc, num_threads);
    out.mc_mean = ens.averaged_densities.front();

    const std::size_t n_sites = out.exact.values.size();
    std::vector<KahanSum> sq(n_sites);
    for (int k = 0; k < mc_realizations; ++k) {
        const RealizationResult r = run_single(mc, k);
        const std::vector<double>& f = r.snapshots.front().values;
        for (std::size_t i = 0; i < n_sites; ++i) sq[i].add(f[i] * f[i]);
    }

    out.standard_error.assign(n_sites, 0.0);
    out.z.assign(n_sites, 0.0);
    int above2 = 0;
    for (std::size_t i = 0; i < n_sites; ++i) {
        const double mean = out.mc_mean.values[i];
        const double var =
            std::max(0.0, (sq[i].sum - mc_realizations * mean * mean) / (mc_realizations - 1));
        const double se = std::sqrt(var / mc_realizations);
        out.standard_error[i] = se;
        const double diff = mean - out.exact.values[i];
        if (se > 0.0) {
            out.z[i] = diff / se;
            ++out.sites_with_error;
            if (std::abs(out.z[i]) > 2.0) ++above2;
        } else {
            out.z[i] = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        }
        out.max_abs_z = std::max(out.max_abs_z, std::abs(out.z[i]));
    }
    out.fraction_above_2 =
        out.sites_with_error > 0 ? static_cast<double>(above2) / out.sites_with_error : 0.0;
    return out;
}

}  // namespace qwalk
