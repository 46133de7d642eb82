#include "qwalk/density.hpp"

#include <algorithm>

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
}  // namespace

double Density::sum() const {
    KahanSum s;
    for (double v : values) s.add(v);
    return s.sum;
}

Moments moments_of(const Density& d) {
    KahanSum m1, m2;
    for (int x = d.x_min(); x <= d.x_max(); ++x) {
        const double f = d.at(x);
        m1.add(f * x);
        m2.add(f * static_cast<double>(x) * x);
    }
    Moments out;
    out.mean = m1.sum;
    out.second_moment = m2.sum;
    out.variance = out.second_moment - out.mean * out.mean;
    return out;
}

Density trimmed(const Density& d, int radius) {
    Density out;
    out.values.assign(2 * static_cast<std::size_t>(radius) + 1, 0.0);
    out.origin_index = radius;
    out.time = d.time;
    const int lo = std::max(-radius, d.x_min());
    const int hi = std::min(radius, d.x_max());
    for (int x = lo; x <= hi; ++x) out.values[static_cast<std::size_t>(x + radius)] = d.at(x);
    return out;
}

}  // namespace qwalk
