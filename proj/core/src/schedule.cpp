#include "qwalk/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace qwalk {

namespace {

// 2^n for the long step; n is bounded so the shift fits in an int.
int long_step(int n) {
    if (n < 1 || n > 24) throw std::invalid_argument("schedule: n must be in [1, 24]");
    return 1 << n;
}

double parse_double(std::string_view s, const char* what) {
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("schedule: bad ") + what + " value '" +
                                    std::string(s) + "'");
    return v;
}

int parse_int(std::string_view s, const char* what) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("schedule: bad ") + what + " value '" +
                                    std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

}  // namespace

void validate_schedule(const StepSchedule& schedule) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RandomTwoPoint>) {
                if (!(s.alpha >= 0.0 && s.alpha <= 1.0))
                    throw std::invalid_argument("schedule: alpha must lie in [0, 1]");
                (void)long_step(s.n);
            } else if constexpr (std::is_same_v<T, Periodic>) {
                if (s.lengths.empty())
                    throw std::invalid_argument("schedule: periodic length list is empty");
                for (int l : s.lengths)
                    if (l < 1) throw std::invalid_argument("schedule: step lengths must be >= 1");
            } else {
                if (s.ell < 1) throw std::invalid_argument("schedule: ell must be >= 1");
            }
        },
        schedule);
}

int l_max(const StepSchedule& schedule) {
    validate_schedule(schedule);
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RandomTwoPoint>) {
                return std::max(1, long_step(s.n));
            } else if constexpr (std::is_same_v<T, Periodic>) {
                return *std::max_element(s.lengths.begin(), s.lengths.end());
            } else {
                return s.ell;
            }
        },
        schedule);
}

std::vector<int> sample_sequence(const StepSchedule& schedule, int t_max, SeedSpec seed) {
    if (t_max < 1) throw std::invalid_argument("sample_sequence: t_max must be >= 1");
    validate_schedule(schedule);
    std::vector<int> out(static_cast<std::size_t>(t_max));
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RandomTwoPoint>) {
                const int lmax = long_step(s.n);
                SplitMix64 gen(seed.stream_seed());
                for (int& e : out) e = gen.next_uniform() < s.alpha ? 1 : lmax;
            } else if constexpr (std::is_same_v<T, Periodic>) {
                const std::size_t period = s.lengths.size();
                for (std::size_t t = 0; t < out.size(); ++t) out[t] = s.lengths[t % period];
            } else {
                std::fill(out.begin(), out.end(), s.ell);
            }
        },
        schedule);
    return out;
}

StepSchedule parse_schedule(std::string_view text) {
    const std::size_t colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

    StepSchedule out;
    if (kind == "random") {
        RandomTwoPoint rtp;
        bool have_alpha = false, have_n = false;
        for (std::string_view part : split(rest, ',')) {
            const std::size_t eq = part.find('=');
            if (eq == std::string_view::npos)
                throw std::invalid_argument("schedule: expected key=value in '" + std::string(part) + "'");
            const std::string_view key = part.substr(0, eq);
            const std::string_view val = part.substr(eq + 1);
            if (key == "alpha") {
                rtp.alpha = parse_double(val, "alpha");
                have_alpha = true;
            } else if (key == "n") {
                rtp.n = parse_int(val, "n");
                have_n = true;
            } else {
                throw std::invalid_argument("schedule: unknown key '" + std::string(key) + "'");
            }
        }
        if (!have_alpha || !have_n)
            throw std::invalid_argument("schedule: random needs alpha=... and n=...");
        out = rtp;
    } else if (kind == "periodic") {
        Periodic p;
        for (std::string_view part : split(rest, ','))
            p.lengths.push_back(parse_int(part, "length"));
        out = p;
    } else if (kind == "constant") {
        out = Constant{parse_int(rest, "ell")};
    } else {
        throw std::invalid_argument(
            "schedule: expected random:alpha=A,n=N | periodic:l1,l2,... | constant:L, got '" +
            std::string(text) + "'");
    }
    validate_schedule(out);
    return out;
}

std::string schedule_to_string(const StepSchedule& schedule) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RandomTwoPoint>) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", s.alpha);
                return "random:alpha=" + std::string(buf) + ",n=" + std::to_string(s.n);
            } else if constexpr (std::is_same_v<T, Periodic>) {
                std::string r = "periodic:";
                for (std::size_t i = 0; i < s.lengths.size(); ++i) {
                    if (i) r += ',';
                    r += std::to_string(s.lengths[i]);
                }
                return r;
            } else {
                return "constant:" + std::to_string(s.ell);
            }
        },
        schedule);
}

}  // namespace qwalk
