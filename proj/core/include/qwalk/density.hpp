#pragma once

#include <vector>

namespace qwalk {

// Site occupation probabilities f(x) = |psi_L(x)|^2 + |psi_R(x)|^2 over a
// contiguous lattice window centred on the origin.
struct Density {
    std::vector<double> values;
    int origin_index = 0;  // array index of lattice site x = 0
    int time = 0;

    int x_min() const { return -origin_index; }
    int x_max() const { return static_cast<int>(values.size()) - 1 - origin_index; }
    double at(int x) const { return values[static_cast<std::size_t>(x + origin_index)]; }

    double sum() const;  // compensated
};

struct Moments {
    double mean = 0;           // <x>, lattice units
    double second_moment = 0;  // <x^2>, about x = 0
    double variance = 0;       // <x^2> - <x>^2
};

// Moments about x = 0 (not about the mean).
Moments moments_of(const Density& d);

// Copy restricted to [-radius, +radius], zero-padded if the source window is
// smaller. Snapshots use the light-cone radius l_max * t so that every
// realization produces an identically shaped array.
Density trimmed(const Density& d, int radius);

}  // namespace qwalk
