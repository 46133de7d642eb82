#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace qwalk {

using cplx = std::complex<double>;

// 2x2 unitary acting in chiral space. Row/column order is (L, R), so the
// Hadamard coin maps (psi_L, psi_R) -> ((psi_L + psi_R)/sqrt2, (psi_L - psi_R)/sqrt2).
// This ordering is part of the contract and is held fixed everywhere.
struct CoinOperator {
    std::array<cplx, 4> m{};  // row-major: m[0]=LL, m[1]=LR, m[2]=RL, m[3]=RR

    static CoinOperator hadamard() {
        const double s = 1.0 / std::sqrt(2.0);
        return CoinOperator{{cplx(s, 0), cplx(s, 0), cplx(s, 0), cplx(-s, 0)}};
    }

    // max entrywise |(C C^dag - I)_ij|
    double unitarity_defect() const;
    bool is_unitary(double tol = 1e-12) const { return unitarity_defect() <= tol; }
    bool is_real() const;
};

// Chirality amplitudes at the origin at t = 0.
struct InitialSpinor {
    cplx a0;  // left component
    cplx b0;  // right component

    // sqrt(1/3), sqrt(2/3): gives an asymmetric profile with a nonvanishing
    // first moment, so both <x> and <x^2> scalings are visible.
    static InitialSpinor asymmetric() {
        return {cplx(std::sqrt(1.0 / 3.0), 0), cplx(std::sqrt(2.0 / 3.0), 0)};
    }

    // (1, i)/sqrt2: the Hadamard walk from this spinor is left-right
    // symmetric at every tick, for any step-length sequence.
    static InitialSpinor symmetric() {
        const double s = 1.0 / std::sqrt(2.0);
        return {cplx(s, 0), cplx(0, s)};
    }

    double norm_sq() const { return std::norm(a0) + std::norm(b0); }
    bool is_normalized(double tol = 1e-12) const { return std::abs(norm_sq() - 1.0) <= tol; }
};

}  // namespace qwalk
