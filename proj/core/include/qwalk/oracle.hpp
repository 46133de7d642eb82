#pragma once

#include <vector>

#include "qwalk/ensemble.hpp"
#include "qwalk/walker.hpp"

namespace qwalk {

// Small dense complex matrix on the truncated (position x chirality) space,
// basis index = 2 * (x + capacity) + chirality with chirality 0 = L, 1 = R.
struct DenseMatrix {
    int dim = 0;
    std::vector<cplx> a;  // row-major

    explicit DenseMatrix(int d) : dim(d), a(static_cast<std::size_t>(d) * d) {}
    cplx& at(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
    cplx at(int r, int c) const { return a[static_cast<std::size_t>(r) * dim + c]; }

    std::vector<cplx> apply(const std::vector<cplx>& v) const;
};

inline constexpr int kDenseTimeLimit = 12;  // dense_evolve refuses longer sequences
inline constexpr int kExactTimeLimit = 16;  // exact_ensemble refuses larger t_max

// Full one-tick unitary T(ell) * (I (x) C) as an explicit matrix on the
// lattice [-capacity, capacity] with periodic wrap. As long as the state
// support never reaches the edge the wrap is never exercised and the result
// equals the infinite-lattice evolution; the wrap keeps every tick matrix
// exactly unitary, which the tests check.
DenseMatrix build_step_matrix(const CoinOperator& coin, int ell, int capacity);

// max entrywise |(U U^dag - I)_ij|
double unitarity_defect(const DenseMatrix& u);

// Matrix-route evolution of one realization: builds the explicit step matrix
// each tick and applies it to the state vector. Independent of the walker
// kernels; used to cross-check them. Throws std::invalid_argument if the
// sequence is longer than kDenseTimeLimit.
WalkerState dense_evolve(const RunConfig& config, const std::vector<int>& sequence);

// Exact disorder average: sum over all 2^t_max step sequences s of
// P(s) f_s(x, t_max) with P(s) = alpha^#short (1-alpha)^#long. Requires a
// RandomTwoPoint schedule and t_max <= kExactTimeLimit.
Density exact_ensemble(const RunConfig& config);

struct McComparison {
    Density exact;
    Density mc_mean;
    std::vector<double> standard_error;  // per site, disorder std / sqrt(R)
    std::vector<double> z;               // (mc - exact) / SE, 0 where SE = 0 and diff = 0
    double max_abs_z = 0;
    double fraction_above_2 = 0;  // among sites with SE > 0
    int sites_with_error = 0;
};

// Monte Carlo run at the exact-enumeration scale, with per-site z-scores of
// the averaged density against the enumerated expectation.
McComparison compare_exact_vs_mc(const RunConfig& config, int mc_realizations,
                                 int num_threads = 0);

}  // namespace qwalk
