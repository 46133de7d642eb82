#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qwalk/rng.hpp"

namespace qwalk {

// P(l) = alpha for l = 1, (1 - alpha) for l = 2^n, drawn independently each tick.
struct RandomTwoPoint {
    double alpha = 0.5;
    int n = 1;  // long step is 2^n
};

// Deterministic cycle through the given lengths: l(t) = lengths[(t-1) % size].
struct Periodic {
    std::vector<int> lengths;
};

struct Constant {
    int ell = 1;
};

using StepSchedule = std::variant<RandomTwoPoint, Periodic, Constant>;

// Identifies one disorder realization. The stream seed is a pure function of
// (master_seed, realization_index), so parallel runs need no coordination.
struct SeedSpec {
    std::uint64_t master_seed = 1;
    int realization_index = 0;

    std::uint64_t stream_seed() const {
        std::uint64_t h = mix64(master_seed ^ 0x6a09e667f3bcc908ULL);
        return mix64(h + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(realization_index) + 1));
    }
};

// Throws std::invalid_argument on malformed parameters
// (alpha outside [0,1], n < 1, lengths empty or < 1, ell < 1).
void validate_schedule(const StepSchedule& schedule);

// Largest step length the schedule can produce; arrays are sized l_max * t_max.
int l_max(const StepSchedule& schedule);

// The translation lengths l(1), ..., l(t_max). RandomTwoPoint draws one
// uniform per tick and compares against alpha (draw < alpha -> l = 1).
std::vector<int> sample_sequence(const StepSchedule& schedule, int t_max, SeedSpec seed);

// CLI grammar: "random:alpha=0.5,n=1", "periodic:1,2", "constant:1".
StepSchedule parse_schedule(std::string_view text);
std::string schedule_to_string(const StepSchedule& schedule);

}  // namespace qwalk
