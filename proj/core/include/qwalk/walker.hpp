#pragma once

#include <array>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/density.hpp"

namespace qwalk {

// Two-component wavefunction on the integer lattice, dense storage over
// [-capacity, +capacity]. Sites outside [support_min, support_max] hold exact
// zeros; the kernels only touch the support, so one tick costs O(support).
struct WalkerState {
    std::vector<cplx> psi_left;
    std::vector<cplx> psi_right;
    int origin_index = 0;  // array index of lattice site x = 0
    int time = 0;
    int support_min = 0;  // lattice coordinates bounding the nonzero region
    int support_max = 0;

    int capacity() const { return origin_index; }
    int size() const { return static_cast<int>(psi_left.size()); }

    cplx& left_at(int x) { return psi_left[static_cast<std::size_t>(x + origin_index)]; }
    cplx& right_at(int x) { return psi_right[static_cast<std::size_t>(x + origin_index)]; }
    cplx left_at(int x) const { return psi_left[static_cast<std::size_t>(x + origin_index)]; }
    cplx right_at(int x) const { return psi_right[static_cast<std::size_t>(x + origin_index)]; }

    // Write amplitudes at x and widen the support bounds to include it.
    void set(int x, cplx left, cplx right);

    double norm() const;  // sum over sites of |L|^2 + |R|^2, compensated
};

// State with psi_L(0) = a0, psi_R(0) = b0, everything else zero, time 0.
// capacity < 1 or an unnormalized spinor throws std::invalid_argument.
WalkerState init_state(const InitialSpinor& spinor, int capacity);

// (psi_L, psi_R)(x) <- C (psi_L, psi_R)(x) at every site. Time unchanged.
void apply_coin(WalkerState& state, const CoinOperator& coin);

// psi_R moves by +ell, psi_L by -ell. Throws CapacityError if the move would
// leave the array span; std::invalid_argument if ell < 1. Time unchanged.
void shift(WalkerState& state, int ell);

// Coin, then shift; time advances by one tick.
void step(WalkerState& state, const CoinOperator& coin, int ell);

// f(x) over the state's full position range.
Density occupation(const WalkerState& state);

// Sums over sites of f, x f, x^2 f for the post-step state, accumulated in
// the same pass as the amplitude update.
struct TickMoments {
    double norm = 0;
    double mean = 0;
    double second = 0;
};

// Single-realization evolution engine. Double-buffered fused coin+shift,
// produces the same amplitudes as step() (same expression per site) while
// also returning the per-tick moment sums the ensemble needs.
class Walker {
  public:
    Walker(const InitialSpinor& spinor, const CoinOperator& coin, int capacity);

    TickMoments step(int ell);
    const WalkerState& state() const { return state_; }

  private:
    template <bool RealCoin>
    TickMoments step_impl(int ell);

    WalkerState state_;
    std::vector<cplx> next_left_;
    std::vector<cplx> next_right_;
    std::array<cplx, 4> coin_;
    bool coin_real_;
};

}  // namespace qwalk
