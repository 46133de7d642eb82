#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// A shift would move amplitude outside the preallocated array span.
// Callers avoid this by sizing arrays as l_max * t_max.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// A moment-form fit cannot proceed on the requested window, e.g. the first
// moment crosses zero so the t/<x> transform blows up. Shrink the window.
struct FitDegenerateError : std::runtime_error {
    explicit FitDegenerateError(const std::string& msg) : std::runtime_error(msg) {}
};

// Peak search found no usable local maximum.
struct EmptyReportError : std::runtime_error {
    explicit EmptyReportError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qwalk
