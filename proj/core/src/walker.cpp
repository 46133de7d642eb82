#include "qwalk/walker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwalk/errors.hpp"

namespace qwalk {

double CoinOperator::unitarity_defect() const {
    // rows of C C^dag
    double worst = 0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            cplx v = m[static_cast<std::size_t>(2 * r)] * std::conj(m[static_cast<std::size_t>(2 * c)]) +
                     m[static_cast<std::size_t>(2 * r + 1)] * std::conj(m[static_cast<std::size_t>(2 * c + 1)]);
            if (r == c) v -= 1.0;
            worst = std::max(worst, std::abs(v));
        }
    }
    return worst;
}

bool CoinOperator::is_real() const {
    for (const cplx& e : m)
        if (e.imag() != 0.0) return false;
    return true;
}

void WalkerState::set(int x, cplx left, cplx right) {
    left_at(x) = left;
    right_at(x) = right;
    support_min = std::min(support_min, x);
    support_max = std::max(support_max, x);
}

double WalkerState::norm() const {
    double sum = 0, comp = 0;
    for (int x = support_min; x <= support_max; ++x) {
        const double f = std::norm(left_at(x)) + std::norm(right_at(x));
        const double y = f - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

WalkerState init_state(const InitialSpinor& spinor, int capacity) {
    if (capacity < 1) throw std::invalid_argument("init_state: capacity must be >= 1");
    if (!spinor.is_normalized())
        throw std::invalid_argument("init_state: spinor must satisfy |a0|^2 + |b0|^2 = 1");
    WalkerState s;
    s.psi_left.assign(2 * static_cast<std::size_t>(capacity) + 1, cplx(0));
    s.psi_right.assign(2 * static_cast<std::size_t>(capacity) + 1, cplx(0));
    s.origin_index = capacity;
    s.time = 0;
    s.support_min = 0;
    s.support_max = 0;
    s.left_at(0) = spinor.a0;
    s.right_at(0) = spinor.b0;
    return s;
}

void apply_coin(WalkerState& state, const CoinOperator& coin) {
    const cplx c00 = coin.m[0], c01 = coin.m[1], c10 = coin.m[2], c11 = coin.m[3];
    for (int x = state.support_min; x <= state.support_max; ++x) {
        const cplx a = state.left_at(x);
        const cplx b = state.right_at(x);
        state.left_at(x) = c00 * a + c01 * b;
        state.right_at(x) = c10 * a + c11 * b;
    }
}

void shift(WalkerState& state, int ell) {
    if (ell < 1) throw std::invalid_argument("shift: ell must be >= 1");
    if (state.support_max + ell > state.capacity() || state.support_min - ell < -state.capacity())
        throw CapacityError("shift: step of length " + std::to_string(ell) +
                            " exceeds array capacity " + std::to_string(state.capacity()));

    const std::size_t lo = static_cast<std::size_t>(state.support_min + state.origin_index);
    const std::size_t hi = static_cast<std::size_t>(state.support_max + state.origin_index);
    const std::size_t l = static_cast<std::size_t>(ell);

    // right mover: [lo, hi] -> [lo+l, hi+l], moving back to front
    std::copy_backward(state.psi_right.begin() + static_cast<std::ptrdiff_t>(lo),
                       state.psi_right.begin() + static_cast<std::ptrdiff_t>(hi + 1),
                       state.psi_right.begin() + static_cast<std::ptrdiff_t>(hi + 1 + l));
    std::fill(state.psi_right.begin() + static_cast<std::ptrdiff_t>(lo),
              state.psi_right.begin() + static_cast<std::ptrdiff_t>(lo + l), cplx(0));

    // left mover: [lo, hi] -> [lo-l, hi-l]
    std::copy(state.psi_left.begin() + static_cast<std::ptrdiff_t>(lo),
              state.psi_left.begin() + static_cast<std::ptrdiff_t>(hi + 1),
              state.psi_left.begin() + static_cast<std::ptrdiff_t>(lo - l));
    std::fill(state.psi_left.begin() + static_cast<std::ptrdiff_t>(hi + 1 - l),
              state.psi_left.begin() + static_cast<std::ptrdiff_t>(hi + 1), cplx(0));

    state.support_min -= ell;
    state.support_max += ell;
}

void step(WalkerState& state, const CoinOperator& coin, int ell) {
    apply_coin(state, coin);
    shift(state, ell);
    state.time += 1;
}

Density occupation(const WalkerState& state) {
    Density d;
    d.values.assign(state.psi_left.size(), 0.0);
    d.origin_index = state.origin_index;
    d.time = state.time;
    for (int x = state.support_min; x <= state.support_max; ++x)
        d.values[static_cast<std::size_t>(x + state.origin_index)] =
            std::norm(state.left_at(x)) + std::norm(state.right_at(x));
    return d;
}

Walker::Walker(const InitialSpinor& spinor, const CoinOperator& coin, int capacity)
    : state_(init_state(spinor, capacity)),
      next_left_(state_.psi_left.size(), cplx(0)),
      next_right_(state_.psi_right.size(), cplx(0)),
      coin_(coin.m),
      coin_real_(coin.is_real()) {}

TickMoments Walker::step(int ell) {
    return coin_real_ ? step_impl<true>(ell) : step_impl<false>(ell);
}

template <bool RealCoin>
TickMoments Walker::step_impl(int ell) {
    WalkerState& s = state_;
    if (ell < 1) throw std::invalid_argument("step: ell must be >= 1");
    if (s.support_max + ell > s.capacity() || s.support_min - ell < -s.capacity())
        throw CapacityError("step: step of length " + std::to_string(ell) +
                            " exceeds array capacity " + std::to_string(s.capacity()));

    const int org = s.origin_index;
    const int lo = s.support_min;
    const int hi = s.support_max;
    const cplx* __restrict__ pl = s.psi_left.data() + org;
    const cplx* __restrict__ pr = s.psi_right.data() + org;
    cplx* __restrict__ nl = next_left_.data() + org;
    cplx* __restrict__ nr = next_right_.data() + org;

    // The next buffers may hold stale amplitudes from two ticks ago, confined
    // to [lo, hi]. The loop below overwrites [lo-ell, hi-ell] of next_left and
    // [lo+ell, hi+ell] of next_right; clear the uncovered remainders.
    std::fill(nl + (hi - ell + 1), nl + (hi + 1), cplx(0));
    std::fill(nr + lo, nr + (lo + ell), cplx(0));

    const double c00r = coin_[0].real(), c01r = coin_[1].real();
    const double c10r = coin_[2].real(), c11r = coin_[3].real();
    const cplx c00 = coin_[0], c01 = coin_[1], c10 = coin_[2], c11 = coin_[3];

    double norm = 0, mean = 0, second = 0;
    for (int x = lo; x <= hi; ++x) {
        const cplx a = pl[x];
        const cplx b = pr[x];
        cplx outl, outr;
        if constexpr (RealCoin) {
            outl = c00r * a + c01r * b;
            outr = c10r * a + c11r * b;
        } else {
            outl = cplx(c00.real() * a.real() - c00.imag() * a.imag() +
                            c01.real() * b.real() - c01.imag() * b.imag(),
                        c00.real() * a.imag() + c00.imag() * a.real() +
                            c01.real() * b.imag() + c01.imag() * b.real());
            outr = cplx(c10.real() * a.real() - c10.imag() * a.imag() +
                            c11.real() * b.real() - c11.imag() * b.imag(),
                        c10.real() * a.imag() + c10.imag() * a.real() +
                            c11.real() * b.imag() + c11.imag() * b.real());
        }
        nl[x - ell] = outl;
        nr[x + ell] = outr;
        const double fl = outl.real() * outl.real() + outl.imag() * outl.imag();
        const double fr = outr.real() * outr.real() + outr.imag() * outr.imag();
        const double xl = static_cast<double>(x - ell);
        const double xr = static_cast<double>(x + ell);
        norm += fl + fr;
        mean += fl * xl + fr * xr;
        second += fl * xl * xl + fr * xr * xr;
    }

    s.psi_left.swap(next_left_);
    s.psi_right.swap(next_right_);
    s.support_min = lo - ell;
    s.support_max = hi + ell;
    s.time += 1;
    return TickMoments{norm, mean, second};
}

template TickMoments Walker::step_impl<true>(int);
template TickMoments Walker::step_impl<false>(int);

}  // namespace qwalk
