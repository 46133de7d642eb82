// qwalk: simulate 1D discrete-time quantum walks with random or ordered
// long-range steps and emit plot-ready CSV artifacts.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwalk/analysis.hpp"
#include "qwalk/csv_io.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/schedule.hpp"
#include "qwalk/walker.hpp"

namespace fs = std::filesystem;
using namespace qwalk;

namespace {

// CLI memory ceiling: positions per realization, t_max * l_max
constexpr long long kMaxPositions = 1LL << 22;

struct CommonOpts {
    std::string output_dir = ".";
    int threads = 0;
    std::uint64_t seed = 1;
};

std::vector<std::string> g_argv;

void add_common(CLI::App* cmd, CommonOpts& common) {
    cmd->add_option("-o,--output-dir", common.output_dir, "Directory for output artifacts")
        ->capture_default_str();
    cmd->add_option("--threads", common.threads,
                    "Worker threads (0 = hardware; env QWALK_THREADS as fallback)")
        ->capture_default_str();
    cmd->add_option("--seed", common.seed, "Master seed; every artifact records it")
        ->capture_default_str();
}

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("QWALK_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;
}

void announce_seed(const CLI::App& cmd, std::uint64_t seed) {
    if (cmd.count("--seed") == 0)
        std::cout << "seed: " << seed << " (default; pass --seed for an independent run)\n";
    else
        std::cout << "seed: " << seed << "\n";
}

InitialSpinor parse_spinor(const std::string& text) {
    if (text == "asymmetric") return InitialSpinor::asymmetric();
    if (text == "symmetric") return InitialSpinor::symmetric();
    std::vector<double> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string piece =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        parts.push_back(std::stod(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (parts.size() != 4)
        throw CLI::ValidationError("--spinor",
                                   "expected 'asymmetric', 'symmetric' or a0re,a0im,b0re,b0im");
    InitialSpinor s{cplx(parts[0], parts[1]), cplx(parts[2], parts[3])};
    if (!s.is_normalized(1e-9))
        throw CLI::ValidationError("--spinor", "|a0|^2 + |b0|^2 must equal 1");
    return s;
}

void check_memory_ceiling(const StepSchedule& schedule, int t_max) {
    // the library takes any n >= 1; the CLI stops at n = 6 to keep runs sane
    if (const auto* rtp = std::get_if<RandomTwoPoint>(&schedule); rtp != nullptr && rtp->n > 6)
        throw CLI::ValidationError("--schedule", "n is capped at 6 in the CLI");
    const long long positions = static_cast<long long>(l_max(schedule)) * t_max;
    if (positions > kMaxPositions)
        throw CLI::ValidationError(
            "--tmax", "t_max * l_max = " + std::to_string(positions) +
                          " positions exceeds the ceiling 2^22; reduce t_max or n");
}

RunMeta base_meta(const std::string& command, const RunConfig& cfg, int threads) {
    RunMeta meta;
    meta.command = command;
    meta.argv = g_argv;
    meta.schedule = schedule_to_string(cfg.schedule);
    meta.spinor = {cfg.spinor.a0.real(), cfg.spinor.a0.imag(), cfg.spinor.b0.real(),
                   cfg.spinor.b0.imag()};
    meta.t_max = cfg.t_max;
    meta.n_realizations = cfg.n_realizations;
    meta.seed = cfg.master_seed;
    meta.snapshot_times = cfg.snapshot_times;
    meta.threads = threads;
    return meta;
}

std::string alpha_tag(double alpha) {
    std::string s = std::to_string(alpha);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::string periodic_tag(const std::vector<int>& lengths) {
    std::string s;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (i) s += '-';
        s += std::to_string(lengths[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOpts {
    CommonOpts common;
    std::string schedule = "random:alpha=0.5,n=1";
    std::string spinor = "asymmetric";
    int t_max = 4096;
    int realizations = 1000;
    std::vector<int> snapshots;
};

int run_simulate(const CLI::App& cmd, const SimulateOpts& opt) {
    RunConfig cfg;
    cfg.schedule = parse_schedule(opt.schedule);
    cfg.spinor = parse_spinor(opt.spinor);
    cfg.t_max = opt.t_max;
    cfg.n_realizations = opt.realizations;
    cfg.master_seed = opt.common.seed;
    cfg.snapshot_times = opt.snapshots.empty() ? default_snapshot_times(opt.t_max) : opt.snapshots;
    check_memory_ceiling(cfg.schedule, cfg.t_max);
    cfg.validate();
    announce_seed(cmd, cfg.master_seed);

    const int threads = resolve_threads(opt.common.threads);
    const EnsembleResult result = run_ensemble(cfg, threads);

    const fs::path dir(opt.common.output_dir);
    fs::create_directories(dir);
    RunMeta meta = base_meta("simulate", cfg, threads);
    for (const Density& d : result.averaged_densities) {
        const std::string name = "density_t" + std::to_string(d.time) + ".csv";
        write_density_csv(dir / name, d);
        meta.outputs.push_back(name);
    }
    write_moments_csv(dir / "moments.csv", result.moments);
    meta.outputs.push_back("moments.csv");
    write_meta_json(dir / "run_meta.json", meta);
    std::cout << "wrote " << meta.outputs.size() << " artifacts to " << dir.string()
              << " (max norm deviation " << format_double(result.max_norm_deviation) << ")\n";
    return 0;
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

struct OracleOpts {
    CommonOpts common;
    std::string mode = "exact";
    std::string schedule = "random:alpha=0.5,n=1";
    std::string spinor = "asymmetric";
    std::string sequence;
    int t_max = 10;
    int mc_realizations = 100000;
};

int run_oracle_exact(const CLI::App& cmd, const OracleOpts& opt) {
    RunConfig cfg;
    cfg.schedule = parse_schedule(opt.schedule);
    cfg.spinor = parse_spinor(opt.spinor);
    cfg.t_max = opt.t_max;
    cfg.n_realizations = opt.mc_realizations;
    cfg.master_seed = opt.common.seed;
    cfg.snapshot_times = {opt.t_max};
    announce_seed(cmd, cfg.master_seed);

    const int threads = resolve_threads(opt.common.threads);
    const McComparison cmp = compare_exact_vs_mc(cfg, opt.mc_realizations, threads);

    const fs::path dir(opt.common.output_dir);
    fs::create_directories(dir);
    write_density_csv(dir / "oracle_exact.csv", cmp.exact);

    std::ofstream out(dir / "oracle_compare.csv", std::ios::binary);
    out << "# time=" << cmp.exact.time << " mc_realizations=" << opt.mc_realizations << "\n";
    out << "x,f_exact,f_mc,stderr,z\n";
    for (int x = cmp.exact.x_min(); x <= cmp.exact.x_max(); ++x) {
        const std::size_t i = static_cast<std::size_t>(x + cmp.exact.origin_index);
        out << x << ',' << format_double(cmp.exact.values[i]) << ','
            << format_double(cmp.mc_mean.values[i]) << ','
            << format_double(cmp.standard_error[i]) << ',' << format_double(cmp.z[i]) << "\n";
    }
    out.close();

    RunMeta meta = base_meta("oracle", cfg, threads);
    meta.outputs = {"oracle_exact.csv", "oracle_compare.csv"};
    write_meta_json(dir / "run_meta.json", meta);

    std::cout << "exact vs Monte Carlo: max |z| = " << cmp.max_abs_z << ", fraction |z| > 2 = "
              << cmp.fraction_above_2 << " over " << cmp.sites_with_error << " sites\n";
    std::cout << (cmp.max_abs_z < 4.0 ? "agreement: OK (max |z| < 4)\n"
                                      : "agreement: SUSPECT (max |z| >= 4)\n");
    return 0;
}

int run_oracle_dense(const CLI::App& cmd, const OracleOpts& opt) {
    if (opt.sequence.empty())
        throw CLI::ValidationError("--sequence", "dense mode needs --sequence l1,l2,...");
    std::vector<int> seq;
    std::size_t start = 0;
    while (start <= opt.sequence.size()) {
        const std::size_t comma = opt.sequence.find(',', start);
        seq.push_back(std::stoi(opt.sequence.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }

    RunConfig cfg;
    cfg.spinor = parse_spinor(opt.spinor);
    cfg.t_max = static_cast<int>(seq.size());
    cfg.snapshot_times = {cfg.t_max};
    announce_seed(cmd, cfg.master_seed);

    const WalkerState dense = dense_evolve(cfg, seq);
    Walker fast(cfg.spinor, cfg.coin, dense.capacity());
    for (int ell : seq) fast.step(ell);
    const WalkerState& f = fast.state();

    double max_dev = 0;
    for (int x = -dense.capacity(); x <= dense.capacity(); ++x) {
        max_dev = std::max(max_dev, std::abs(dense.left_at(x) - f.left_at(x)));
        max_dev = std::max(max_dev, std::abs(dense.right_at(x) - f.right_at(x)));
    }

    const fs::path dir(opt.common.output_dir);
    fs::create_directories(dir);
    const Density dd = occupation(dense);
    const Density df = occupation(f);
    std::ofstream out(dir / "oracle_dense.csv", std::ios::binary);
    out << "# time=" << dense.time << " sequence=" << opt.sequence << "\n";
    out << "x,f_dense,f_walker\n";
    for (int x = -dense.capacity(); x <= dense.capacity(); ++x)
        out << x << ',' << format_double(dd.at(x)) << ',' << format_double(df.at(x)) << "\n";
    out.close();

    RunMeta meta = base_meta("oracle", cfg, 1);
    meta.outputs = {"oracle_dense.csv"};
    write_meta_json(dir / "run_meta.json", meta);

    std::cout << "dense vs walker: max amplitude deviation = " << format_double(max_dev) << "\n";
    std::cout << (max_dev < 1e-12 ? "agreement: OK (< 1e-12)\n" : "agreement: SUSPECT\n");
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOpts {
    CommonOpts common;
    std::vector<double> alphas;
    int n = 1;
    int t_max = 2048;
    int realizations = 1000;
};

void write_powerlaw_csv(const fs::path& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    out << "parameter,amplitude,exponent,residual,points_used\n";
    for (const char* param : {"b2", "b4"}) {
        std::vector<std::pair<double, double>> pts;
        for (const SweepRow& r : rows) {
            const double b = std::string(param) == "b2" ? r.b2 : r.b4;
            if (b > 0) pts.emplace_back(1.0 - r.alpha, b);
        }
        if (pts.size() < 4) {
            std::cerr << "powerlaw: skipping " << param << " (needs >= 4 positive values)\n";
            continue;
        }
        const PowerLawFit fit = fit_power_law(pts);
        out << param << ',' << format_double(fit.amplitude) << ',' << format_double(fit.exponent)
            << ',' << format_double(fit.residual) << ',' << pts.size() << "\n";
    }
}

int run_sweep(const CLI::App& cmd, const SweepOpts& opt) {
    RunConfig base;
    base.schedule = RandomTwoPoint{0.5, opt.n};
    base.t_max = opt.t_max;
    base.n_realizations = opt.realizations;
    base.master_seed = opt.common.seed;
    base.snapshot_times = {opt.t_max};
    check_memory_ceiling(base.schedule, base.t_max);
    announce_seed(cmd, base.master_seed);

    const int threads = resolve_threads(opt.common.threads);
    const std::vector<SweepRow> rows = sweep_alpha(base, opt.alphas, threads);

    const fs::path dir(opt.common.output_dir);
    fs::create_directories(dir);
    write_sweep_csv(dir / "sweep.csv", rows);
    write_powerlaw_csv(dir / "powerlaw.csv", rows);

    RunMeta meta = base_meta("sweep", base, threads);
    meta.outputs = {"sweep.csv", "powerlaw.csv"};
    write_meta_json(dir / "run_meta.json", meta);

    for (const SweepRow& r : rows)
        std::cout << "alpha=" << r.alpha << "  b2=" << r.b2 << "  b4=" << r.b4
                  << "  slope_x2=" << r.slope_x2 << (r.min_flag ? "  <- min <x^2>" : "") << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitOpts {
    CommonOpts common;
    std::string moments_path;
    std::string window;
    std::string slope_window;
};

Window parse_window(const std::string& text, Window fallback) {
    if (text.empty()) return fallback;
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--window", "expected tmin:tmax");
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

int run_fit(const CLI::App&, const FitOpts& opt) {
    const MomentSeries series = read_moments_csv(opt.moments_path);
    const Window fit_w = parse_window(opt.window, default_fit_window(series.t_max()));
    const Window slope_w = parse_window(opt.slope_window, default_slope_window(series.t_max()));

    const MomentFit fit = fit_moment_forms(series, fit_w);
    const double slope_mean = estimate_slope(series, MomentQuantity::Mean, slope_w);
    const double slope_x2 = estimate_slope(series, MomentQuantity::SecondMoment, slope_w);
    const double slope_var = estimate_slope(series, MomentQuantity::Variance, slope_w);

    const fs::path dir(opt.common.output_dir);
    fs::create_directories(dir);
    std::ofstream out(dir / "fit.csv", std::ios::binary);
    out << "b1,b2,b3,b4,residual_mean,residual_second,slope_mean,slope_x2,slope_var,"
           "fit_tmin,fit_tmax,slope_tmin,slope_tmax\n";
    out << format_double(fit.b1) << ',' << format_double(fit.b2) << ',' << format_double(fit.b3)
        << ',' << format_double(fit.b4) << ',' << format_double(fit.residual_mean_max) << ','
        << format_double(fit.residual_second_max) << ',' << format_double(slope_mean) << ','
        << format_double(slope_x2) << ',' << format_double(slope_var) << ',' << fit_w.t_min << ','
        << fit_w.t_max << ',' << slope_w.t_min << ',' << slope_w.t_max << "\n";
    out.close();

    std::cout << "b1=" << fit.b1 << " b2=" << fit.b2 << " b3=" << fit.b3 << " b4=" << fit.b4
              << "\nmax relative residual: mean " << fit.residual_mean_max << ", second "
              << fit.residual_second_max << "\nslopes: |<x>| " << slope_mean << ", <x^2> "
              << slope_x2 << ", var " << slope_var << "\n";
    std::cout << "wrote fit.csv\n";
    return 0;
}

// ---------------------------------------------------------------------------
// collapse
// ---------------------------------------------------------------------------

struct CollapseOpts {
    CommonOpts common;
    std::vector<std::string> density_paths;
    std::vector<double> gammas = {0.5, 1.0};
    int bins = 200;
};

int run_collapse(const CLI::App&, const CollapseOpts& opt) {
    std::vector<Density> densities;
    for (const std::string& p : opt.density_paths) densities.push_back(read_density_csv(p));

    const fs::path dir(opt.common.output_dir);
    fs::create_directories(dir);
    std::ofstream quality(dir / "collapse_quality.csv", std::ios::binary);
    quality << "gamma,spread,relative_spread,bins\n";
    for (double gamma : opt.gammas) {
        const CollapseExport exported = export_collapse(densities, gamma, opt.bins);
        for (const auto& curve : exported.curves) {
            const std::string name = "collapse_gamma" + alpha_tag(gamma) + "_t" +
                                     std::to_string(curve.time) + ".csv";
            write_collapse_csv(dir / name, curve, gamma);
        }
        quality << format_double(gamma) << ',' << format_double(exported.spread) << ','
                << format_double(exported.relative_spread) << ',' << opt.bins << "\n";
        std::cout << "gamma=" << gamma << ": spread " << exported.spread << " (relative "
                  << exported.relative_spread << ")\n";
    }
    std::cout << "wrote collapse curves for " << densities.size() << " snapshots\n";
    return 0;
}

// ---------------------------------------------------------------------------
// figures
// ---------------------------------------------------------------------------

struct FiguresOpts {
    CommonOpts common;
    std::string figure;
    double alpha = -1;  // <0: per-figure default
    int t_max = 0;      // 0: per-figure default
    int realizations = 0;
};

EnsembleResult fig_ensemble(const FiguresOpts& opt, const StepSchedule& schedule, int t_max,
                            int realizations, std::vector<int> snapshots,
                            std::uint64_t seed_salt) {
    RunConfig cfg;
    cfg.schedule = schedule;
    cfg.t_max = opt.t_max > 0 ? opt.t_max : t_max;
    cfg.n_realizations = opt.realizations > 0 ? opt.realizations : realizations;
    if (std::holds_alternative<Periodic>(schedule) || std::holds_alternative<Constant>(schedule))
        cfg.n_realizations = 1;  // no disorder to average over
    cfg.master_seed = mix64(opt.common.seed ^ seed_salt);
    for (int& t : snapshots) t = std::min(t, cfg.t_max);
    std::sort(snapshots.begin(), snapshots.end());
    snapshots.erase(std::unique(snapshots.begin(), snapshots.end()), snapshots.end());
    cfg.snapshot_times = snapshots;
    check_memory_ceiling(cfg.schedule, cfg.t_max);
    return run_ensemble(cfg, resolve_threads(opt.common.threads));
}

void write_x2_csv(const fs::path& path, const MomentSeries& m) {
    std::ofstream out(path, std::ios::binary);
    out << "t,second_moment\n";
    for (int t = 1; t <= m.t_max(); ++t)
        out << t << ',' << format_double(m.second_moment[static_cast<std::size_t>(t)]) << "\n";
}

void write_moments_with_fit_csv(const fs::path& path, const MomentSeries& m,
                                const MomentFit& fit) {
    std::ofstream out(path, std::ios::binary);
    out << "# fit window " << fit.fit_window.t_min << ":" << fit.fit_window.t_max << "\n";
    out << "t,mean_abs,second_moment,fit_mean_abs,fit_second_moment\n";
    for (int t = 1; t <= m.t_max(); ++t) {
        const double st = std::sqrt(static_cast<double>(t));
        out << t << ',' << format_double(std::abs(m.mean[static_cast<std::size_t>(t)])) << ','
            << format_double(m.second_moment[static_cast<std::size_t>(t)]) << ','
            << format_double(t / (fit.b1 + fit.b2 * st)) << ','
            << format_double(static_cast<double>(t) * t / (fit.b3 + fit.b4 * st)) << "\n";
    }
}

void write_tail_csv(const fs::path& path, const Density& d) {
    const double st = std::sqrt(static_cast<double>(d.time));
    std::ofstream out(path, std::ios::binary);
    out << "# time=" << d.time << "\n";
    out << "x_over_sqrt_t,f\n";
    for (int x = 1; x <= d.x_max(); ++x)
        out << format_double(x / st) << ',' << format_double(d.at(x)) << "\n";
}

int run_figures(const CLI::App& cmd, const FiguresOpts& opt) {
    const fs::path dir(opt.common.output_dir);
    fs::create_directories(dir);
    announce_seed(cmd, opt.common.seed);
    std::vector<std::string> outputs;

    const auto collapse_files = [&](const EnsembleResult& ens, const std::string& prefix) {
        for (double gamma : {0.5, 1.0}) {
            const CollapseExport exported = export_collapse(ens.averaged_densities, gamma);
            for (const auto& curve : exported.curves) {
                const std::string name = prefix + "_gamma" + alpha_tag(gamma) + "_t" +
                                         std::to_string(curve.time) + ".csv";
                write_collapse_csv(dir / name, curve, gamma);
                outputs.push_back(name);
            }
        }
    };

    if (opt.figure == "fig1") {
        const int t = opt.t_max > 0 ? opt.t_max : 512;
        for (double alpha : {1.0, 0.995, 0.5}) {
            const EnsembleResult ens =
                fig_ensemble(opt, RandomTwoPoint{alpha, 1}, t, 1000, {t},
                             0xF1ULL + static_cast<std::uint64_t>(alpha * 1000));
            const std::string name = "density_alpha" + alpha_tag(alpha) + ".csv";
            write_density_csv(dir / name, ens.averaged_densities.back());
            outputs.push_back(name);
        }
    } else if (opt.figure == "fig2") {
        for (double alpha : {0.5, 0.995}) {
            const EnsembleResult ens =
                fig_ensemble(opt, RandomTwoPoint{alpha, 1}, 4096, 1000, {4096},
                             0xF2ULL + static_cast<std::uint64_t>(alpha * 1000));
            const MomentFit fit =
                fit_moment_forms(ens.moments, default_fit_window(ens.moments.t_max()));
            const std::string name = "moments_alpha" + alpha_tag(alpha) + ".csv";
            write_moments_with_fit_csv(dir / name, ens.moments, fit);
            outputs.push_back(name);
        }
    } else if (opt.figure == "fig3") {
        for (double alpha : {0.5, 0.6, 0.7, 0.8, 0.9, 0.95}) {
            const EnsembleResult ens =
                fig_ensemble(opt, RandomTwoPoint{alpha, 1}, 2048, 1000, {2048},
                             0xF3ULL + static_cast<std::uint64_t>(alpha * 1000));
            const std::string name = "x2_alpha" + alpha_tag(alpha) + ".csv";
            write_x2_csv(dir / name, ens.moments);
            outputs.push_back(name);
        }
    } else if (opt.figure == "fig4") {
        const double alpha = opt.alpha > 0 ? opt.alpha : 0.5;
        const EnsembleResult ens = fig_ensemble(opt, RandomTwoPoint{alpha, 1}, 4096, 1000,
                                                {512, 1024, 2048, 4096}, 0xF4ULL);
        collapse_files(ens, "collapse_alpha" + alpha_tag(alpha));
    } else if (opt.figure == "fig5") {
        RunConfig base;
        base.schedule = RandomTwoPoint{0.5, 1};
        base.t_max = opt.t_max > 0 ? opt.t_max : 2048;
        base.n_realizations = opt.realizations > 0 ? opt.realizations : 1000;
        base.master_seed = mix64(opt.common.seed ^ 0xF5ULL);
        base.snapshot_times = {base.t_max};
        const std::vector<double> alphas = {0.9, 0.93, 0.95, 0.97, 0.98, 0.99, 0.995};
        const std::vector<SweepRow> rows =
            sweep_alpha(base, alphas, resolve_threads(opt.common.threads));
        std::ofstream out(dir / "decoherence.csv", std::ios::binary);
        out << "one_minus_alpha,b2,b4\n";
        for (const SweepRow& r : rows)
            out << format_double(1.0 - r.alpha) << ',' << format_double(r.b2) << ','
                << format_double(r.b4) << "\n";
        out.close();
        write_powerlaw_csv(dir / "powerlaw.csv", rows);
        outputs = {"decoherence.csv", "powerlaw.csv"};
    } else if (opt.figure == "fig6") {
        std::ofstream fits(dir / "tail_fits.csv", std::ios::binary);
        fits << "alpha,kind,slope,u_min,u_max,prefactor,rate,exponent,residual\n";
        for (double alpha : {0.5, 0.7, 0.9, 0.995}) {
            const EnsembleResult ens =
                fig_ensemble(opt, RandomTwoPoint{alpha, 1}, 4096, 1000, {4096},
                             0xF6ULL + static_cast<std::uint64_t>(alpha * 1000));
            const Density& d = ens.averaged_densities.back();
            const std::string name = "tail_alpha" + alpha_tag(alpha) + ".csv";
            write_tail_csv(dir / name, d);
            outputs.push_back(name);
            const TailFit fit = fit_tail(d);
            fits << format_double(alpha) << ','
                 << (fit.kind == TailFit::Kind::PowerLaw ? "power_law" : "stretched_exponential")
                 << ',' << format_double(fit.slope) << ',' << format_double(fit.u_min) << ','
                 << format_double(fit.u_max) << ',' << format_double(fit.prefactor) << ','
                 << format_double(fit.rate) << ',' << format_double(fit.exponent) << ','
                 << format_double(fit.residual) << "\n";
        }
        outputs.push_back("tail_fits.csv");
    } else if (opt.figure == "fig7") {
        const double alpha = opt.alpha > 0 ? opt.alpha : 0.5;
        const EnsembleResult ens = fig_ensemble(opt, RandomTwoPoint{alpha, 3}, 4096, 1000,
                                                {512, 1024, 2048, 4096}, 0xF7ULL);
        collapse_files(ens, "collapse_n3_alpha" + alpha_tag(alpha));
    } else if (opt.figure == "fig8") {
        for (int n : {2, 3}) {
            for (double alpha : {0.5, 0.9, 0.99, 0.999}) {
                const EnsembleResult ens = fig_ensemble(
                    opt, RandomTwoPoint{alpha, n}, 4096, 1000, {4096},
                    0xF8ULL + static_cast<std::uint64_t>(n * 10000 + alpha * 1000));
                const std::string name =
                    "x2_n" + std::to_string(n) + "_alpha" + alpha_tag(alpha) + ".csv";
                write_x2_csv(dir / name, ens.moments);
                outputs.push_back(name);
            }
        }
    } else if (opt.figure == "fig9" || opt.figure == "fig10") {
        const std::vector<std::vector<int>> schedules = {{1, 2},    {1, 4},    {1, 8},
                                                         {1, 2, 4}, {1, 2, 8}, {1, 4, 8}};
        for (const auto& lengths : schedules) {
            if (opt.figure == "fig9") {
                const int t = opt.t_max > 0 ? opt.t_max : 512;
                const EnsembleResult ens =
                    fig_ensemble(opt, Periodic{lengths}, t, 1, {t}, 0xF9ULL);
                const std::string name = "density_" + periodic_tag(lengths) + ".csv";
                write_density_csv(dir / name, ens.averaged_densities.back());
                outputs.push_back(name);
            } else {
                const EnsembleResult ens =
                    fig_ensemble(opt, Periodic{lengths}, 1024, 1, {1024}, 0xFAULL);
                const std::string name = "x2_" + periodic_tag(lengths) + ".csv";
                write_x2_csv(dir / name, ens.moments);
                outputs.push_back(name);
            }
        }
    } else {
        throw CLI::ValidationError("figure", "unknown figure id '" + opt.figure +
                                                 "' (expected fig1..fig10)");
    }

    RunMeta meta;
    meta.command = "figures " + opt.figure;
    meta.argv = g_argv;
    meta.seed = opt.common.seed;
    meta.threads = resolve_threads(opt.common.threads);
    meta.t_max = opt.t_max;
    meta.n_realizations = opt.realizations;
    meta.outputs = outputs;
    write_meta_json(dir / "run_meta.json", meta);
    std::cout << "wrote " << outputs.size() << " artifacts to " << dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) g_argv.emplace_back(argv[i]);

    CLI::App app{"1D discrete-time quantum walk simulator with random long-range steps"};
    app.require_subcommand(1);

    SimulateOpts sim;
    CLI::App* sim_cmd = app.add_subcommand(
        "simulate", "Run a disorder ensemble; write densities, moments and a meta sidecar");
    add_common(sim_cmd, sim.common);
    sim_cmd->add_option("--schedule", sim.schedule,
                        "random:alpha=A,n=N | periodic:l1,l2,... | constant:L")
        ->capture_default_str();
    sim_cmd->add_option("--tmax", sim.t_max, "Number of ticks")->capture_default_str();
    sim_cmd->add_option("--realizations", sim.realizations, "Disorder realizations to average")
        ->capture_default_str();
    sim_cmd->add_option("--snapshots", sim.snapshots,
                        "Snapshot times (default: powers of two up to tmax)")
        ->delimiter(',');
    sim_cmd->add_option("--spinor", sim.spinor, "asymmetric | symmetric | a0re,a0im,b0re,b0im")
        ->capture_default_str();

    OracleOpts ora;
    CLI::App* ora_cmd = app.add_subcommand(
        "oracle", "Small-scale ground truth: exact disorder enumeration or dense-matrix evolution");
    add_common(ora_cmd, ora.common);
    ora_cmd->add_option("--mode", ora.mode, "exact | dense")->capture_default_str();
    ora_cmd->add_option("--schedule", ora.schedule, "Schedule for exact mode (random:...)")
        ->capture_default_str();
    ora_cmd->add_option("--tmax", ora.t_max, "Ticks for exact mode (<= 16)")
        ->capture_default_str();
    ora_cmd->add_option("--mc-realizations", ora.mc_realizations,
                        "Monte Carlo realizations compared against the enumeration")
        ->capture_default_str();
    ora_cmd->add_option("--sequence", ora.sequence, "Step sequence for dense mode (<= 12 ticks)");
    ora_cmd->add_option("--spinor", ora.spinor, "asymmetric | symmetric | a0re,a0im,b0re,b0im")
        ->capture_default_str();

    SweepOpts swp;
    CLI::App* swp_cmd = app.add_subcommand(
        "sweep", "Ensembles across alpha values; moment-form fits and decoherence power laws");
    add_common(swp_cmd, swp.common);
    swp_cmd->add_option("--alphas", swp.alphas, "Sorted alpha grid in (0,1)")
        ->delimiter(',')
        ->required();
    swp_cmd->add_option("--n", swp.n, "Long step is 2^n")->capture_default_str();
    swp_cmd->add_option("--tmax", swp.t_max, "Ticks per run")->capture_default_str();
    swp_cmd->add_option("--realizations", swp.realizations, "Realizations per alpha")
        ->capture_default_str();

    FitOpts fit;
    CLI::App* fit_cmd =
        app.add_subcommand("fit", "Fit moment forms and log-log slopes from a moments.csv");
    add_common(fit_cmd, fit.common);
    fit_cmd->add_option("--moments", fit.moments_path, "Path to moments.csv")->required();
    fit_cmd->add_option("--window", fit.window, "Fit window tmin:tmax (default tmax/16 : tmax)");
    fit_cmd->add_option("--slope-window", fit.slope_window,
                        "Slope window tmin:tmax (default last decade)");

    CollapseOpts col;
    CLI::App* col_cmd =
        app.add_subcommand("collapse", "Scale density snapshots onto t^gamma master curves");
    add_common(col_cmd, col.common);
    col_cmd->add_option("--density", col.density_paths, "Density CSVs (repeat; >= 2)")
        ->required()
        ->expected(-2);
    col_cmd->add_option("--gamma", col.gammas, "Scaling exponents to export")
        ->delimiter(',')
        ->capture_default_str();
    col_cmd->add_option("--bins", col.bins, "Bins for the spread score")->capture_default_str();

    FiguresOpts fig;
    CLI::App* fig_cmd = app.add_subcommand(
        "figures", "One-shot drivers that emit the plot-ready CSVs for fig1..fig10");
    add_common(fig_cmd, fig.common);
    fig_cmd->add_option("figure", fig.figure, "fig1..fig10")->required();
    fig_cmd->add_option("--alpha", fig.alpha, "Alpha override where the figure takes one");
    fig_cmd->add_option("--tmax", fig.t_max, "Override the figure's default tmax");
    fig_cmd->add_option("--realizations", fig.realizations,
                        "Override the figure's default realization count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed()) return run_simulate(*sim_cmd, sim);
        if (ora_cmd->parsed()) {
            if (ora.mode == "exact") return run_oracle_exact(*ora_cmd, ora);
            if (ora.mode == "dense") return run_oracle_dense(*ora_cmd, ora);
            throw CLI::ValidationError("--mode", "expected exact or dense");
        }
        if (swp_cmd->parsed()) return run_sweep(*swp_cmd, swp);
        if (fit_cmd->parsed()) return run_fit(*fit_cmd, fit);
        if (col_cmd->parsed()) return run_collapse(*col_cmd, col);
        if (fig_cmd->parsed()) return run_figures(*fig_cmd, fig);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
