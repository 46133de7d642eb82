#include "qwalk/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qwalk/errors.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

namespace {

struct LinFit {
    double intercept = 0;
    double slope = 0;
};

// Mean-centered ordinary least squares of y against x.
LinFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols: degenerate abscissa");
    LinFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

void check_window(const MomentSeries& series, Window w) {
    if (w.t_min < 1 || w.t_max > series.t_max() || w.t_min > w.t_max)
        throw std::invalid_argument("window must satisfy 1 <= t_min <= t_max <= series range");
}

double quantity_at(const MomentSeries& series, MomentQuantity q, int t) {
    switch (q) {
        case MomentQuantity::Mean:
            return std::abs(series.mean[static_cast<std::size_t>(t)]);
        case MomentQuantity::SecondMoment:
            return series.second_moment[static_cast<std::size_t>(t)];
        case MomentQuantity::Variance:
            return series.variance(t);
    }
    return 0;
}

// Solve the 3x3 system a x = b in place, partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (a[col][col] == 0.0) throw std::runtime_error("solve3: singular system");
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < 3; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

}  // namespace

Window default_fit_window(int t_max) {
    // Skip the early transient: below ~t_max/16 the moment forms still carry
    // a few-percent systematic deviation and the t/<x> transform amplifies
    // ensemble noise where <x> is small.
    int t_min = std::max(16, t_max / 16);
    if (t_min > t_max / 2) t_min = std::max(1, t_max / 2);
    return Window{t_min, t_max};
}

Window default_slope_window(int t_max) {
    return Window{std::max(1, t_max / 10), t_max};
}

MomentFit fit_moment_forms(const MomentSeries& series, Window window) {
    check_window(series, window);
    const int count = window.t_max - window.t_min + 1;
    if (count < 10) throw std::invalid_argument("fit_moment_forms: window must hold >= 10 ticks");

    std::vector<double> sq, y1, y2;
    sq.reserve(static_cast<std::size_t>(count));
    y1.reserve(static_cast<std::size_t>(count));
    y2.reserve(static_cast<std::size_t>(count));
    const double first_mean = series.mean[static_cast<std::size_t>(window.t_min)];
    for (int t = window.t_min; t <= window.t_max; ++t) {
        const double m = series.mean[static_cast<std::size_t>(t)];
        const double s = series.second_moment[static_cast<std::size_t>(t)];
        if (m == 0.0 || (m > 0) != (first_mean > 0))
            throw FitDegenerateError("fit_moment_forms: <x> touches or crosses zero at t = " +
                                     std::to_string(t) + "; shrink the window");
        if (s <= 0.0)
            throw FitDegenerateError("fit_moment_forms: <x^2> not positive at t = " +
                                     std::to_string(t));
        sq.push_back(std::sqrt(static_cast<double>(t)));
        y1.push_back(static_cast<double>(t) / std::abs(m));
        y2.push_back(static_cast<double>(t) * t / s);
    }

    const LinFit f1 = ols(sq, y1);
    const LinFit f2 = ols(sq, y2);

    MomentFit out;
    out.b1 = f1.intercept;
    out.b2 = f1.slope;
    out.b3 = f2.intercept;
    out.b4 = f2.slope;
    out.fit_window = window;

    // denominators must stay positive across the window (linear, so endpoints suffice)
    for (double s : {sq.front(), sq.back()}) {
        if (out.b1 + out.b2 * s <= 0.0 || out.b3 + out.b4 * s <= 0.0)
            throw FitDegenerateError("fit_moment_forms: fitted denominator not positive on window");
    }

    for (int t = window.t_min; t <= window.t_max; ++t) {
        const double st = std::sqrt(static_cast<double>(t));
        const double rec_mean = static_cast<double>(t) / (out.b1 + out.b2 * st);
        const double rec_second = static_cast<double>(t) * t / (out.b3 + out.b4 * st);
        const double m = std::abs(series.mean[static_cast<std::size_t>(t)]);
        const double s = series.second_moment[static_cast<std::size_t>(t)];
        out.residual_mean_max = std::max(out.residual_mean_max, std::abs(rec_mean - m) / m);
        out.residual_second_max =
            std::max(out.residual_second_max, std::abs(rec_second - s) / s);
    }
    out.relative_residual_max = std::max(out.residual_mean_max, out.residual_second_max);
    return out;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 4)
        throw std::invalid_argument("fit_power_law: need at least 4 points");
    std::vector<double> lx, ly;
    lx.reserve(points.size());
    ly.reserve(points.size());
    for (const auto& [x, y] : points) {
        if (x <= 0.0 || y <= 0.0)
            throw std::invalid_argument("fit_power_law: coordinates must be positive");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    const LinFit f = ols(lx, ly);
    PowerLawFit out;
    out.amplitude = std::exp(f.intercept);
    out.exponent = f.slope;
    double ss = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (f.intercept + f.slope * lx[i]);
        ss += r * r;
    }
    out.residual = std::sqrt(ss / static_cast<double>(lx.size()));
    return out;
}

double estimate_slope(const MomentSeries& series, MomentQuantity quantity, Window window) {
    check_window(series, window);
    std::vector<double> lx, ly;
    lx.reserve(static_cast<std::size_t>(window.t_max - window.t_min + 1));
    ly.reserve(lx.capacity());
    for (int t = window.t_min; t <= window.t_max; ++t) {
        const double v = quantity_at(series, quantity, t);
        if (v <= 0.0)
            throw std::invalid_argument("estimate_slope: nonpositive value at t = " +
                                        std::to_string(t));
        lx.push_back(std::log(static_cast<double>(t)));
        ly.push_back(std::log(v));
    }
    if (lx.size() < 2) throw std::invalid_argument("estimate_slope: need >= 2 ticks");
    return ols(lx, ly).slope;
}

namespace {

struct ScaledPoint {
    double u;
    double y;
};

// Bin each curve onto a shared grid and average the across-curve variance
// over bins that at least two curves populate.
SpreadResult binned_spread(const std::vector<std::vector<ScaledPoint>>& curves, int bins) {
    if (bins < 1) throw std::invalid_argument("collapse: bins must be >= 1");
    double umin = std::numeric_limits<double>::infinity();
    double umax = -std::numeric_limits<double>::infinity();
    for (const auto& curve : curves) {
        for (const ScaledPoint& p : curve) {
            umin = std::min(umin, p.u);
            umax = std::max(umax, p.u);
        }
    }
    SpreadResult out;
    if (!(umax > umin)) return out;

    const double width = (umax - umin) / bins;
    const std::size_t nb = static_cast<std::size_t>(bins);
    std::vector<double> mean_acc(nb), count_acc(nb);
    std::vector<double> bin_sum(nb, 0.0), bin_sumsq(nb, 0.0);
    std::vector<int> bin_curves(nb, 0);
    for (const auto& curve : curves) {
        std::fill(mean_acc.begin(), mean_acc.end(), 0.0);
        std::fill(count_acc.begin(), count_acc.end(), 0.0);
        for (const ScaledPoint& p : curve) {
            std::size_t b = static_cast<std::size_t>((p.u - umin) / width);
            if (b >= nb) b = nb - 1;
            mean_acc[b] += p.y;
            count_acc[b] += 1.0;
        }
        for (std::size_t b = 0; b < nb; ++b) {
            if (count_acc[b] == 0.0) continue;
            const double v = mean_acc[b] / count_acc[b];
            bin_sum[b] += v;
            bin_sumsq[b] += v * v;
            bin_curves[b] += 1;
        }
    }
    double total = 0, total_level = 0;
    int used = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        if (bin_curves[b] < 2) continue;
        const double n = bin_curves[b];
        const double mean = bin_sum[b] / n;
        const double var = std::max(0.0, bin_sumsq[b] / n - mean * mean);
        total += var;
        total_level += mean * mean;
        ++used;
    }
    out.bins_used = used;
    out.spread = used > 0 ? total / used : 0.0;
    out.relative_spread = total_level > 0 ? total / total_level : 0.0;
    return out;
}

}  // namespace

CollapseExport export_collapse(const std::vector<Density>& densities, double gamma, int bins) {
    if (densities.size() < 2)
        throw std::invalid_argument("export_collapse: need >= 2 snapshot densities");
    CollapseExport out;
    out.gamma = gamma;
    std::vector<std::vector<ScaledPoint>> scaled;
    scaled.reserve(densities.size());
    for (const Density& d : densities) {
        if (d.time < 1) throw std::invalid_argument("export_collapse: densities need t >= 1");
        const double tg = std::pow(static_cast<double>(d.time), gamma);
        CollapseExport::Curve curve;
        curve.time = d.time;
        curve.points.reserve(d.values.size());
        std::vector<ScaledPoint> sp;
        sp.reserve(d.values.size());
        for (int x = d.x_min(); x <= d.x_max(); ++x) {
            const double u = static_cast<double>(x) / tg;
            const double y = tg * d.at(x);
            curve.points.emplace_back(u, y);
            sp.push_back({u, y});
        }
        out.curves.push_back(std::move(curve));
        scaled.push_back(std::move(sp));
    }
    const SpreadResult s = binned_spread(scaled, bins);
    out.spread = s.spread;
    out.relative_spread = s.relative_spread;
    return out;
}

SpreadResult collapse_spread(const std::vector<Density>& densities, double gamma,
                             const std::function<bool(double x, double t)>& region, int bins) {
    if (densities.size() < 2)
        throw std::invalid_argument("collapse_spread: need >= 2 snapshot densities");
    std::vector<std::vector<ScaledPoint>> scaled;
    scaled.reserve(densities.size());
    for (const Density& d : densities) {
        if (d.time < 1) throw std::invalid_argument("collapse_spread: densities need t >= 1");
        const double t = static_cast<double>(d.time);
        const double tg = std::pow(t, gamma);
        std::vector<ScaledPoint> sp;
        for (int x = d.x_min(); x <= d.x_max(); ++x) {
            if (!region(static_cast<double>(x), t)) continue;
            sp.push_back({static_cast<double>(x) / tg, tg * d.at(x)});
        }
        scaled.push_back(std::move(sp));
    }
    return binned_spread(scaled, bins);
}

PeakReport locate_peaks(const Density& density, double alpha) {
    if (density.time < 16) throw std::invalid_argument("locate_peaks: need t >= 16");
    const double central_radius = std::sqrt(static_cast<double>(density.time));
    // The central structure's power-law tail reaches several sqrt(t) but the
    // ballistic peaks always travel at a finite fraction of the light cone;
    // the height reference comes from there so the tail cannot outvote them.
    const double far_radius = std::max(central_radius, 0.45 * density.time);

    // Collapse out exact parity zeros: local maxima are judged against the
    // nearest occupied neighbours.
    std::vector<int> xs;
    std::vector<double> fs;
    for (int x = density.x_min(); x <= density.x_max(); ++x) {
        const double f = density.at(x);
        if (f > 1e-15) {
            xs.push_back(x);
            fs.push_back(f);
        }
    }
    if (xs.empty()) throw EmptyReportError("locate_peaks: density has no occupied sites");

    const auto is_local_max = [&](std::size_t i) {
        const bool left_ok = i == 0 || fs[i] >= fs[i - 1];
        const bool right_ok = i + 1 == fs.size() || fs[i] >= fs[i + 1];
        return left_ok && right_ok;
    };

    double right_ref = 0, left_ref = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] >= far_radius) right_ref = std::max(right_ref, fs[i]);
        if (xs[i] <= -far_radius) left_ref = std::max(left_ref, fs[i]);
    }
    if (right_ref == 0.0 || left_ref == 0.0)
        throw EmptyReportError("locate_peaks: no occupied sites in the ballistic region");

    // outermost maxima outside the central region that reach a quarter of the
    // ballistic reference height; >= in is_local_max breaks plateau ties
    // toward larger |x| because the scan keeps moving outward
    bool have_right = false, have_left = false;
    int right_peak = 0, left_peak = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!is_local_max(i)) continue;
        if (xs[i] >= central_radius && fs[i] >= 0.25 * right_ref) {
            right_peak = xs[i];  // keeps the rightmost as the scan ascends in x
            have_right = true;
        }
        if (xs[i] <= -central_radius && fs[i] >= 0.25 * left_ref && !have_left) {
            left_peak = xs[i];  // first hit is the leftmost
            have_left = true;
        }
    }
    if (!have_right || !have_left)
        throw EmptyReportError("locate_peaks: no ballistic local maximum found");

    PeakReport out;
    out.right_peak_x = right_peak;
    out.left_peak_x = left_peak;
    out.predicted = (2.0 - alpha) * density.time / std::sqrt(2.0);
    out.central_peak_height = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::abs(xs[i]) <= central_radius)
            out.central_peak_height = std::max(out.central_peak_height, fs[i]);
    return out;
}

namespace {

struct TailPoints {
    std::vector<double> lu;  // log u
    std::vector<double> lf;  // log f
    double u_min = 0, u_max = 0;
};

// Positive-side samples with u = x/sqrt(t) >= 1, cut where f drops below
// 1e-6 or the decay flattens out (the curve leaving the central region for
// the inter-peak plateau). Steepening is never cut, so a stretched
// exponential keeps its full range and fails the power-law residual check.
TailPoints tail_region(const Density& d) {
    const double st = std::sqrt(static_cast<double>(d.time));
    std::vector<double> lu, lf;
    for (int x = 1; x <= d.x_max(); ++x) {
        const double u = static_cast<double>(x) / st;
        if (u < 1.0) continue;
        const double f = d.at(x);
        if (f < 1e-6) break;
        lu.push_back(std::log(u));
        lf.push_back(std::log(f));
    }

    const auto slope_over = [&](std::size_t begin, std::size_t end) {
        std::vector<double> su(lu.begin() + static_cast<std::ptrdiff_t>(begin),
                               lu.begin() + static_cast<std::ptrdiff_t>(end));
        std::vector<double> sf(lf.begin() + static_cast<std::ptrdiff_t>(begin),
                               lf.begin() + static_cast<std::ptrdiff_t>(end));
        return ols(su, sf).slope;
    };

    if (lu.size() >= 24) {
        // reference decay from the first 0.7 log units (at least a quarter of
        // the points); local slopes use windows 0.35 log units wide so site
        // noise cannot fake a flattening
        std::size_t head = lu.size() / 4;
        while (head < lu.size() && lu[head] - lu.front() < 0.7) ++head;
        head = std::min(head, lu.size());
        const double ref = slope_over(0, head);
        if (ref < 0) {
            std::size_t cut = lu.size();
            for (std::size_t i = head; i < lu.size(); ++i) {
                std::size_t j = i;
                while (j < lu.size() && lu[j] - lu[i] < 0.35) ++j;
                if (j - i < 5 || j > lu.size()) break;
                if (slope_over(i, j) > ref / 3.0) {
                    cut = i;
                    break;
                }
            }
            lu.resize(cut);
            lf.resize(cut);
        }
    }

    TailPoints out;
    out.lu = std::move(lu);
    out.lf = std::move(lf);
    if (!out.lu.empty()) {
        out.u_min = std::exp(out.lu.front());
        out.u_max = std::exp(out.lu.back());
    }
    return out;
}

double stretched_rms(const std::vector<double>& lu, const std::vector<double>& lf, double log_a,
                     double c, double g) {
    double ss = 0;
    for (std::size_t i = 0; i < lu.size(); ++i) {
        const double r = lf[i] - (log_a - c * std::exp(g * lu[i]));
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(lu.size()));
}

}  // namespace

TailFit fit_tail(const Density& density) {
    if (density.time < 1024)
        throw std::invalid_argument("fit_tail: need a late-time density (t >= 1024)");
    const TailPoints pts = tail_region(density);
    if (pts.lu.size() < 8)
        throw std::invalid_argument("fit_tail: insufficient positive points for x/sqrt(t) >= 1");

    const LinFit pl = ols(pts.lu, pts.lf);
    double ss = 0;
    for (std::size_t i = 0; i < pts.lu.size(); ++i) {
        const double r = pts.lf[i] - (pl.intercept + pl.slope * pts.lu[i]);
        ss += r * r;
    }
    const double pl_rms = std::sqrt(ss / static_cast<double>(pts.lu.size()));

    TailFit out;
    out.kind = TailFit::Kind::PowerLaw;
    out.slope = pl.slope;
    out.u_min = pts.u_min;
    out.u_max = pts.u_max;
    out.residual = pl_rms;
    if (pl_rms <= 0.2) return out;

    // Stretched exponential log f = log A - c u^gamma: initialize from the
    // log(log A - log f) linearization, then damped Gauss-Newton.
    const double max_lf = *std::max_element(pts.lf.begin(), pts.lf.end());
    double log_a = max_lf + 0.5;
    double c = 1.0, g = 0.5;
    {
        std::vector<double> zx, zy;
        for (std::size_t i = 0; i < pts.lu.size(); ++i) {
            const double inner = log_a - pts.lf[i];
            if (inner <= 0) continue;
            zx.push_back(pts.lu[i]);
            zy.push_back(std::log(inner));
        }
        if (zx.size() >= 2) {
            const LinFit lin = ols(zx, zy);
            g = lin.slope;
            c = std::exp(lin.intercept);
        }
    }

    double rms = stretched_rms(pts.lu, pts.lf, log_a, c, g);
    for (int iter = 0; iter < 200; ++iter) {
        // residuals r_i = lf_i - (log_a - c u^g); jacobian wrt (log_a, c, g)
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (std::size_t i = 0; i < pts.lu.size(); ++i) {
            const double ug = std::exp(g * pts.lu[i]);
            const double r = pts.lf[i] - (log_a - c * ug);
            const std::array<double, 3> j = {-1.0, ug, c * ug * pts.lu[i]};
            for (int a = 0; a < 3; ++a) {
                jtr[static_cast<std::size_t>(a)] -= j[static_cast<std::size_t>(a)] * r;
                for (int b = 0; b < 3; ++b)
                    jtj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +=
                        j[static_cast<std::size_t>(a)] * j[static_cast<std::size_t>(b)];
            }
        }
        std::array<double, 3> delta{};
        try {
            delta = solve3(jtj, jtr);
        } catch (const std::runtime_error&) {
            break;
        }
        // backtracking on the step
        double scale = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 30; ++bt) {
            const double na = log_a + scale * delta[0];
            const double nc = c + scale * delta[1];
            const double ng = g + scale * delta[2];
            const double nr = stretched_rms(pts.lu, pts.lf, na, nc, ng);
            if (nr < rms) {
                log_a = na;
                c = nc;
                g = ng;
                rms = nr;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        const double step_norm = scale * std::sqrt(delta[0] * delta[0] + delta[1] * delta[1] +
                                                   delta[2] * delta[2]);
        if (!accepted || step_norm < 1e-10) break;
    }

    if (g > 0.0 && g < 1.0 && c > 0.0 && rms < pl_rms) {
        out.kind = TailFit::Kind::StretchedExponential;
        out.prefactor = std::exp(log_a);
        out.rate = c;
        out.exponent = g;
        out.residual = rms;
    }
    return out;
}

std::vector<SweepRow> sweep_alpha(const RunConfig& base, const std::vector<double>& alphas,
                                  int num_threads) {
    const auto* rtp = std::get_if<RandomTwoPoint>(&base.schedule);
    if (rtp == nullptr)
        throw std::invalid_argument("sweep_alpha: base schedule must be RandomTwoPoint");
    if (alphas.empty()) throw std::invalid_argument("sweep_alpha: alpha list is empty");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0 && alphas[i] < 1.0))
            throw std::invalid_argument("sweep_alpha: alphas must lie in (0, 1)");
        if (i > 0 && alphas[i] <= alphas[i - 1])
            throw std::invalid_argument("sweep_alpha: alphas must be sorted ascending");
    }

    std::vector<SweepRow> rows;
    rows.reserve(alphas.size());
    const Window slope_w = default_slope_window(base.t_max);
    const Window fit_w = default_fit_window(base.t_max);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        RunConfig cfg = base;
        cfg.schedule = RandomTwoPoint{alphas[i], rtp->n};
        // independent disorder ensemble per alpha
        cfg.master_seed = mix64(base.master_seed ^ (0x53574545500ULL + i));
        if (cfg.snapshot_times.empty()) cfg.snapshot_times = {cfg.t_max};
        const EnsembleResult ens = run_ensemble(cfg, num_threads);
        const MomentFit fit = fit_moment_forms(ens.moments, fit_w);
        SweepRow row;
        row.alpha = alphas[i];
        row.b1 = fit.b1;
        row.b2 = fit.b2;
        row.b3 = fit.b3;
        row.b4 = fit.b4;
        row.residual_mean = fit.residual_mean_max;
        row.residual_second = fit.residual_second_max;
        row.slope_x2 = estimate_slope(ens.moments, MomentQuantity::SecondMoment, slope_w);
        row.x2_at_tmax = ens.moments.second_moment.back();
        rows.push_back(row);
    }
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].x2_at_tmax < rows[argmin].x2_at_tmax) argmin = i;
    rows[argmin].min_flag = true;
    return rows;
}

}  // namespace qwalk
