#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qwalk/density.hpp"
#include "qwalk/ensemble.hpp"

namespace qwalk {

struct Window {
    int t_min = 1;
    int t_max = 1;
};

// Parameters of the moment forms
//   |<x>|  = t   / (b1 + b2 sqrt t)
//   <x^2>  = t^2 / (b3 + b4 sqrt t)
// fitted by ordinary least squares after the transforms t/|<x>| and
// t^2/<x^2>, which are exactly linear in sqrt t. b2 and b4 are the
// decoherence parameters: both vanish in the pure-walk limits.
struct MomentFit {
    double b1 = 0, b2 = 0;
    double b3 = 0, b4 = 0;
    double residual_mean_max = 0;    // max relative residual of reconstructed |<x>|
    double residual_second_max = 0;  // same for <x^2>
    double relative_residual_max = 0;
    Window fit_window;
};

// Throws std::invalid_argument if the window holds fewer than 10 ticks,
// FitDegenerateError if <x> touches or crosses zero inside the window (the
// transform is singular there) or the fitted denominators fail to stay
// positive across the window.
MomentFit fit_moment_forms(const MomentSeries& series, Window window);

struct PowerLawFit {
    double amplitude = 0;
    double exponent = 0;  // beta
    double residual = 0;  // RMS residual in log space
};

// Least squares of log(b) against log(1-alpha) over (one_minus_alpha, b) points.
// Needs >= 4 points, all coordinates positive.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

enum class MomentQuantity { Mean, SecondMoment, Variance };

// Log-log least-squares slope of the chosen quantity over the window.
// Mean uses |<x>|. Nonpositive entries on the window throw.
double estimate_slope(const MomentSeries& series, MomentQuantity quantity, Window window);

// The default windows used by sweeps and the CLI: the moment-form fit skips
// the early transient ticks; slopes are taken over the last decade of t.
Window default_fit_window(int t_max);
Window default_slope_window(int t_max);

struct CollapseExport {
    double gamma = 0;
    struct Curve {
        int time = 0;
        std::vector<std::pair<double, double>> points;  // (x / t^gamma, t^gamma f)
    };
    std::vector<Curve> curves;
    double spread = 0;           // mean across-curve variance per bin
    double relative_spread = 0;  // spread normalized by the squared curve level
};

// Scaled curves t^gamma f(x,t) against x / t^gamma for each snapshot, plus a
// collapse-quality score: curves are binned onto a common scaled-x grid and
// the spread is the mean across bins of the across-curve variance. Requires
// >= 2 densities.
CollapseExport export_collapse(const std::vector<Density>& densities, double gamma,
                               int bins = 200);

struct SpreadResult {
    double spread = 0;           // mean across-curve variance per bin
    double relative_spread = 0;  // spread / mean squared curve level; the
                                 // scale-free number to compare across gamma
    int bins_used = 0;
};

// Same quality score restricted to sites where region(x, t) is true; the
// region is expressed in unscaled coordinates so the identical set of sites
// can be compared under different gamma.
SpreadResult collapse_spread(const std::vector<Density>& densities, double gamma,
                             const std::function<bool(double x, double t)>& region,
                             int bins = 200);

struct PeakReport {
    int right_peak_x = 0;
    int left_peak_x = 0;
    double predicted = 0;  // (2 - alpha) t / sqrt2, the ballistic peak speed times t
    double central_peak_height = 0;
};

// Ballistic peaks: the outermost local maxima at |x| >= sqrt(t) that reach a
// quarter of the ballistic reference height, the side's maximum over
// |x| >= max(sqrt(t), 0.45 t) (parity zeros are skipped). Central peak
// height: max f over |x| <= sqrt(t). Throws EmptyReportError if a side has
// no usable maximum.
PeakReport locate_peaks(const Density& density, double alpha);

struct TailFit {
    enum class Kind { PowerLaw, StretchedExponential };
    Kind kind = Kind::PowerLaw;
    // PowerLaw: f ~ u^slope on u = x/sqrt(t) in [u_min, u_max]
    double slope = 0;
    double u_min = 0, u_max = 0;
    // StretchedExponential: f = prefactor * exp(-rate * u^exponent)
    double prefactor = 0, rate = 0, exponent = 0;
    double residual = 0;  // RMS residual in log space of the returned fit
};

// Classifies the central-region decay on the positive side, u = x/sqrt(t) >= 1:
// power law first; if its log-space RMS residual exceeds 0.2, a stretched
// exponential fitted by damped Gauss-Newton. The fit range is cut where f
// drops below 1e-6 or the log-log slope turns over.
TailFit fit_tail(const Density& density);

struct SweepRow {
    double alpha = 0;
    double b1 = 0, b2 = 0, b3 = 0, b4 = 0;
    double slope_x2 = 0;
    double x2_at_tmax = 0;
    double residual_mean = 0;
    double residual_second = 0;
    bool min_flag = false;  // set on the row minimizing x2_at_tmax
};

// Independent ensemble per alpha (seed derived from base.master_seed and the
// alpha index), moment-form fit on the default window, slope over the last
// decade. base.schedule must be RandomTwoPoint; its n is reused.
std::vector<SweepRow> sweep_alpha(const RunConfig& base, const std::vector<double>& alphas,
                                  int num_threads = 0);

}  // namespace qwalk
