// Acceptance suite: end-to-end checks of the simulator against its
// small-instance oracles and the expected large-scale behaviour. Prints one
// PASS/FAIL line per criterion and exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/analysis.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/schedule.hpp"
#include "qwalk/walker.hpp"

namespace fs = std::filesystem;
using namespace qwalk;

namespace {

struct Criterion {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<Criterion> g_results;
double g_worst_norm_dev = 0;  // across every run the suite performs

void record(int id, const std::string& name, bool pass, const std::string& detail) {
    g_results.push_back({id, name, pass, detail});
    std::fprintf(stderr, "  done: criterion %d (%s)\n", id, pass ? "pass" : "FAIL");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

EnsembleResult tracked_ensemble(const RunConfig& cfg, int threads = 0) {
    EnsembleResult r = run_ensemble(cfg, threads);
    g_worst_norm_dev = std::max(g_worst_norm_dev, r.max_norm_deviation);
    return r;
}

CoinOperator random_coin(SplitMix64& gen) {
    const double pi = 3.14159265358979323846;
    const double theta = gen.next_uniform() * pi / 2.0;
    const double phi = gen.next_uniform() * 2.0 * pi;
    const double psi = gen.next_uniform() * 2.0 * pi;
    CoinOperator coin;
    coin.m[0] = std::polar(std::cos(theta), phi);
    coin.m[1] = std::polar(std::sin(theta), psi);
    coin.m[2] = -std::polar(std::sin(theta), -psi);
    coin.m[3] = std::polar(std::cos(theta), -phi);
    return coin;
}

InitialSpinor random_spinor(SplitMix64& gen) {
    const double pi = 3.14159265358979323846;
    const double theta = gen.next_uniform() * pi / 2.0;
    return {std::polar(std::cos(theta), gen.next_uniform() * 2.0 * pi),
            std::polar(std::sin(theta), gen.next_uniform() * 2.0 * pi)};
}

// ---------------------------------------------------------------------------

void criterion_1_oracle_equivalence() {
    SplitMix64 gen(101);
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        RunConfig cfg;
        cfg.coin = trial % 2 == 0 ? CoinOperator::hadamard() : random_coin(gen);
        cfg.spinor = random_spinor(gen);
        const int t = 1 + static_cast<int>(gen.next() % 12);
        std::vector<int> seq(static_cast<std::size_t>(t));
        for (int& e : seq) e = 1 + static_cast<int>(gen.next() % 8);

        const WalkerState dense = dense_evolve(cfg, seq);
        Walker fast(cfg.spinor, cfg.coin, dense.capacity());
        double norm_dev = 0;
        for (int ell : seq) {
            const TickMoments tick = fast.step(ell);
            norm_dev = std::max(norm_dev, std::abs(tick.norm - 1.0));
        }
        g_worst_norm_dev = std::max(g_worst_norm_dev, norm_dev);
        const WalkerState& f = fast.state();
        for (int x = -dense.capacity(); x <= dense.capacity(); ++x) {
            worst = std::max(worst, std::abs(dense.left_at(x) - f.left_at(x)));
            worst = std::max(worst, std::abs(dense.right_at(x) - f.right_at(x)));
        }
    }
    record(1, "oracle equivalence (dense unitary vs walker, 200 realizations)", worst < 1e-12,
           "max per-amplitude deviation " + fmt(worst) + " (< 1e-12)");
}

void criterion_2_ensemble_vs_enumeration() {
    RunConfig cfg;
    cfg.schedule = RandomTwoPoint{0.5, 1};
    cfg.t_max = 10;
    cfg.master_seed = 1;
    cfg.n_realizations = 100000;
    cfg.snapshot_times = {10};
    const McComparison cmp = compare_exact_vs_mc(cfg, 100000, 0);
    const bool pass = cmp.max_abs_z < 4.0 && cmp.fraction_above_2 < 0.10;
    record(2, "ensemble vs exact enumeration (alpha=0.5, t=10, 1e5 realizations)", pass,
           "max |z| " + fmt(cmp.max_abs_z) + " (< 4), fraction |z|>2 " +
               fmt(cmp.fraction_above_2) + " (< 0.10) over " +
               std::to_string(cmp.sites_with_error) + " sites");
}

void criterion_4_pure_walk_limits() {
    double slope1 = 0, slope0 = 0;
    for (int which = 0; which < 2; ++which) {
        RunConfig cfg;
        cfg.schedule = RandomTwoPoint{which == 0 ? 1.0 : 0.0, 1};
        cfg.t_max = 1024;
        cfg.n_realizations = 1;  // no randomness survives at the limits
        cfg.master_seed = 1;
        cfg.snapshot_times = {1024};
        const EnsembleResult r = tracked_ensemble(cfg);
        const double s = estimate_slope(r.moments, MomentQuantity::SecondMoment, {64, 1024});
        (which == 0 ? slope1 : slope0) = s;
    }
    const bool pass = std::abs(slope1 - 2.0) <= 0.05 && std::abs(slope0 - 2.0) <= 0.05;
    record(4, "pure-walk limits alpha=1 and alpha=0 are ballistic", pass,
           "slope(alpha=1) " + fmt(slope1) + ", slope(alpha=0) " + fmt(slope0) +
               " (2.00 +- 0.05)");
}

const EnsembleResult& shared_run_a() {
    static const EnsembleResult r = [] {
        RunConfig cfg;
        cfg.schedule = RandomTwoPoint{0.5, 1};
        cfg.t_max = 4096;
        cfg.n_realizations = 1000;
        cfg.master_seed = 1;
        cfg.snapshot_times = {512, 1024, 2048, 4096};
        return tracked_ensemble(cfg);
    }();
    return r;
}

void criterion_5_anomalous_scaling() {
    const EnsembleResult& r = shared_run_a();
    const Window w{512, 4096};
    const double s2 = estimate_slope(r.moments, MomentQuantity::SecondMoment, w);
    const double sm = estimate_slope(r.moments, MomentQuantity::Mean, w);
    const double sv = estimate_slope(r.moments, MomentQuantity::Variance, w);
    const bool pass =
        std::abs(s2 - 1.5) <= 0.1 && std::abs(sm - 0.5) <= 0.1 && std::abs(sv - 1.5) <= 0.1;
    record(5, "anomalous scaling at alpha=0.5 (slopes over t in [512, 4096])", pass,
           "<x^2> " + fmt(s2) + " (1.5 +- 0.1), |<x>| " + fmt(sm) + " (0.5 +- 0.1), var " +
               fmt(sv) + " (1.5 +- 0.1)");
}

void criterion_6_moment_form_fit() {
    const EnsembleResult& r = shared_run_a();
    const MomentFit fit = fit_moment_forms(r.moments, default_fit_window(r.moments.t_max()));
    const bool pass = fit.relative_residual_max < 0.02;
    record(6, "moment forms reconstruct the alpha=0.5 run", pass,
           "max relative residual " + fmt(fit.relative_residual_max) + " (< 0.02) on window [" +
               std::to_string(fit.fit_window.t_min) + ", " +
               std::to_string(fit.fit_window.t_max) + "], b2 " + fmt(fit.b2) + ", b4 " +
               fmt(fit.b4));
}

void criterion_7_decoherence_power_law() {
    RunConfig base;
    base.schedule = RandomTwoPoint{0.5, 1};
    base.t_max = 2048;
    base.n_realizations = 1000;
    base.master_seed = 1;
    base.snapshot_times = {2048};
    const std::vector<double> alphas = {0.9, 0.95, 0.98, 0.99, 0.995};
    const std::vector<SweepRow> rows = sweep_alpha(base, alphas, 0);

    std::vector<std::pair<double, double>> pts2, pts4;
    bool positive = true;
    for (const SweepRow& row : rows) {
        if (row.b2 <= 0 || row.b4 <= 0) positive = false;
        pts2.emplace_back(1.0 - row.alpha, row.b2);
        pts4.emplace_back(1.0 - row.alpha, row.b4);
    }
    double beta2 = 0, beta4 = 0;
    bool pass = positive;
    if (positive) {
        beta2 = fit_power_law(pts2).exponent;
        beta4 = fit_power_law(pts4).exponent;
        pass = std::abs(beta2 - 0.5) <= 0.15 && std::abs(beta4 - 0.5) <= 0.15;
    }
    record(7, "decoherence parameters vanish as (1-alpha)^beta near alpha=1", pass,
           positive ? "beta(b2) " + fmt(beta2) + ", beta(b4) " + fmt(beta4) + " (0.5 +- 0.15)"
                    : "nonpositive fitted b2/b4; power law not defined");
}

void criterion_8_nonmonotonic_localization() {
    RunConfig base;
    base.schedule = RandomTwoPoint{0.5, 1};
    base.t_max = 2048;
    base.n_realizations = 1000;
    base.master_seed = 1;
    base.snapshot_times = {2048};
    const std::vector<double> alphas = {0.5, 0.6, 0.7, 0.75, 0.8, 0.85, 0.9};
    const std::vector<SweepRow> rows = sweep_alpha(base, alphas, 0);
    double argmin = -1;
    std::string detail = "x2(tmax):";
    for (const SweepRow& row : rows) {
        if (row.min_flag) argmin = row.alpha;
        detail += " " + fmt(row.alpha) + "->" + fmt(row.x2_at_tmax);
    }
    const bool pass = argmin >= 0.7 && argmin <= 0.9;
    record(8, "maximal localization near alpha ~ 0.8", pass,
           "argmin alpha = " + fmt(argmin) + " (in [0.7, 0.9]); " + detail);
}

void criterion_9_ballistic_peaks() {
    const EnsembleResult& r = shared_run_a();
    const Density* snap = nullptr;
    for (const Density& d : r.averaged_densities)
        if (d.time == 1024) snap = &d;
    const PeakReport report = locate_peaks(*snap, 0.5);
    const double predicted = report.predicted;  // (2 - 0.5) * 1024 / sqrt2
    const double right_err = std::abs(report.right_peak_x - predicted) / predicted;
    const double left_err = std::abs(-report.left_peak_x - predicted) / predicted;
    const bool pass = right_err <= 0.05 && left_err <= 0.05;
    record(9, "ballistic peaks sit at +-(2-alpha) t / sqrt2", pass,
           "peaks " + std::to_string(report.left_peak_x) + ", " +
               std::to_string(report.right_peak_x) + " vs +-" + fmt(predicted) +
               " (errors " + fmt(left_err) + ", " + fmt(right_err) + "; tol 5%)");
}

void criterion_10_dual_collapse() {
    const EnsembleResult& r = shared_run_a();
    const auto central = [](double x, double t) { return std::abs(x) < std::sqrt(t); };
    const auto ballistic = [](double x, double t) { return std::abs(x) > 0.3 * t; };
    // relative spread: the scaled-curve magnitudes differ between the two
    // gamma values, so only the normalized score compares fairly
    const double c05 = collapse_spread(r.averaged_densities, 0.5, central).relative_spread;
    const double c10 = collapse_spread(r.averaged_densities, 1.0, central).relative_spread;
    const double b05 = collapse_spread(r.averaged_densities, 0.5, ballistic).relative_spread;
    const double b10 = collapse_spread(r.averaged_densities, 1.0, ballistic).relative_spread;
    const bool pass = c05 < c10 && b10 < b05;
    record(10, "dual collapse: gamma=0.5 wins centrally, gamma=1 wins ballistically", pass,
           "central relative spread " + fmt(c05) + " (g=0.5) vs " + fmt(c10) +
               " (g=1); ballistic " + fmt(b10) + " (g=1) vs " + fmt(b05) + " (g=0.5)");
}

void criterion_11_tail_exponent() {
    const EnsembleResult& r = shared_run_a();
    const Density& d = r.averaged_densities.back();
    const TailFit fit = fit_tail(d);
    const bool pass =
        fit.kind == TailFit::Kind::PowerLaw && std::abs(fit.slope - (-1.7)) <= 0.3;
    record(11, "central-region tail decays as a power law with slope -1.7", pass,
           std::string(fit.kind == TailFit::Kind::PowerLaw ? "power law" : "stretched exp") +
               ", slope " + fmt(fit.slope) + " (-1.7 +- 0.3) on x/sqrt(t) in [" + fmt(fit.u_min) +
               ", " + fmt(fit.u_max) + "]");
}

void criterion_12_periodic_control() {
    const std::vector<std::vector<int>> schedules = {{1, 2}, {1, 4}, {1, 8}, {1, 2, 4}};
    bool pass = true;
    std::string detail;
    for (const auto& lengths : schedules) {
        RunConfig cfg;
        cfg.schedule = Periodic{lengths};
        cfg.t_max = 1024;
        cfg.n_realizations = 1;
        cfg.master_seed = 1;
        cfg.snapshot_times = {1024};
        const EnsembleResult r = tracked_ensemble(cfg);
        const double slope = estimate_slope(r.moments, MomentQuantity::SecondMoment, {64, 1024});
        if (std::abs(slope - 2.0) > 0.05) pass = false;
        if (!detail.empty()) detail += ", ";
        std::string tag;
        for (int l : lengths) tag += (tag.empty() ? "" : "-") + std::to_string(l);
        detail += tag + ": " + fmt(slope);
    }
    record(12, "ordered long steps keep the conventional t^2 scaling", pass,
           detail + " (2.00 +- 0.05)");
}

void criterion_13_rescaling_identity() {
    const int t_max = 256;
    Walker w1(InitialSpinor::asymmetric(), CoinOperator::hadamard(), t_max);
    Walker w2(InitialSpinor::asymmetric(), CoinOperator::hadamard(), 2 * t_max);
    double worst = 0;
    for (int t = 1; t <= t_max; ++t) {
        const TickMoments m1 = w1.step(1);
        const TickMoments m2 = w2.step(2);
        g_worst_norm_dev = std::max({g_worst_norm_dev, std::abs(m1.norm - 1.0),
                                     std::abs(m2.norm - 1.0)});
        const Density d1 = occupation(w1.state());
        const Density d2 = occupation(w2.state());
        for (int x = -t; x <= t; ++x)
            worst = std::max(worst, std::abs(d2.at(2 * x) - d1.at(x)));
    }
    record(13, "constant ell=2 walk is the ell=1 walk on a doubled lattice", worst < 1e-12,
           "max |f_2(2x,t) - f_1(x,t)| = " + fmt(worst) + " for t <= 256 (< 1e-12)");
}

void criterion_14_crossover() {
    // the crossover at alpha so close to 1 only completes once a typical
    // realization has accumulated tens of long steps, hence the longer run
    RunConfig cfg;
    cfg.schedule = RandomTwoPoint{0.999, 3};
    cfg.t_max = 16384;
    cfg.n_realizations = 100;
    cfg.master_seed = 1;
    cfg.snapshot_times = {16384};
    const EnsembleResult r = tracked_ensemble(cfg);
    const double early = estimate_slope(r.moments, MomentQuantity::SecondMoment, {8, 64});
    const double late = estimate_slope(r.moments, MomentQuantity::SecondMoment,
                                       default_slope_window(cfg.t_max));
    const bool pass = early > 1.8 && std::abs(late - 1.5) <= 0.2;
    record(14, "n=3, alpha=0.999: ballistic start crossing to the anomalous regime", pass,
           "early slope " + fmt(early) + " (> 1.8), late slope " + fmt(late) +
               " (1.5 +- 0.2, window [1638, 16384])");
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_15_cli_determinism() {
    const char* cli = std::getenv("QWALK_CLI");
    if (cli == nullptr || !fs::exists(cli)) {
        record(15, "CLI determinism across --threads", false,
               "QWALK_CLI not set or binary missing; run via ctest");
        return;
    }
    const fs::path base = fs::temp_directory_path() / "qwalk_acceptance_cli";
    fs::remove_all(base);
    fs::create_directories(base);
    const std::string common = std::string(cli) +
                               " simulate --schedule random:alpha=0.5,n=1 --tmax 256"
                               " --realizations 200 --seed 5 --snapshots 64,256";
    const std::string run1 =
        common + " --threads 1 -o " + (base / "t1").string() + " > /dev/null 2>&1";
    const std::string run2 =
        common + " --threads 3 -o " + (base / "t3").string() + " > /dev/null 2>&1";
    const int rc1 = std::system(run1.c_str());
    const int rc2 = std::system(run2.c_str());
    bool pass = rc1 == 0 && rc2 == 0;
    std::string detail;
    int compared = 0;
    if (pass) {
        for (const auto& entry : fs::directory_iterator(base / "t1")) {
            if (entry.path().extension() != ".csv") continue;
            ++compared;
            if (read_file(entry.path()) !=
                read_file(base / "t3" / entry.path().filename())) {
                pass = false;
                detail = "mismatch in " + entry.path().filename().string();
            }
        }
        if (compared == 0) pass = false;
    } else {
        detail = "CLI exited with " + std::to_string(rc1) + "/" + std::to_string(rc2);
    }
    if (detail.empty())
        detail = std::to_string(compared) + " CSVs byte-identical between --threads 1 and 3";
    record(15, "CLI determinism across --threads", pass, detail);
    fs::remove_all(base);
}

void criterion_3_norm_conservation() {
    record(3, "norm conservation at every tick of every run", g_worst_norm_dev <= 1e-10,
           "worst |sum f - 1| across the suite = " + fmt(g_worst_norm_dev) + " (<= 1e-10)");
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    criterion_1_oracle_equivalence();
    criterion_2_ensemble_vs_enumeration();
    criterion_4_pure_walk_limits();
    criterion_5_anomalous_scaling();
    criterion_6_moment_form_fit();
    criterion_7_decoherence_power_law();
    criterion_8_nonmonotonic_localization();
    criterion_9_ballistic_peaks();
    criterion_10_dual_collapse();
    criterion_11_tail_exponent();
    criterion_12_periodic_control();
    criterion_13_rescaling_identity();
    criterion_14_crossover();
    criterion_15_cli_determinism();
    criterion_3_norm_conservation();  // aggregates every run above

    std::sort(g_results.begin(), g_results.end(),
              [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
    bool all = true;
    for (const Criterion& c : g_results) {
        std::printf("criterion %2d [%s] %s: %s\n", c.id, c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.detail.c_str());
        all = all && c.pass;
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("%s (15 criteria, %.0f s)\n", all ? "ALL PASS" : "FAILURES PRESENT", secs);
    return all ? 0 : 1;
}
