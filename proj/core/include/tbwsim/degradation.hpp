#pragma once

#include <vector>

#include "tbwsim/types.hpp"

namespace tbwsim {

// One fault segment: from t_start onward (until the next segment starts) the
// effective elevator is gain * command + bias.
struct FaultSegment {
    double t_start = 0.0;  // s
    double gain = 1.0;     // in (0, 1]
    double bias = 0.0;     // rad
};

// Time-scheduled multiplicative + additive elevator fault. Segments are kept
// sorted by t_start; evaluation picks the latest segment with t_start < t,
// so an exact boundary instant still uses the earlier segment.
struct FaultSchedule {
    std::vector<FaultSegment> segments;

    bool empty() const { return segments.empty(); }
    void validate() const;  // throws ConfigError on overlap or gain out of (0,1]

    static FaultSchedule none();
    // Worsening three-segment schedule: 50% power -0.5 deg after 4 s,
    // 40% power +0.6 deg after 8 s, 30% power -0.7 deg after 12 s.
    static FaultSchedule standard_fault();
    // Variant matching the prose description rather than the equation
    // (deficiency percentages swapped); kept as a named alternative.
    static FaultSchedule prose_variant();
};

// Effective deflection for a command at time t, re-saturated to +-0.25 rad.
// Commands before the first segment pass through unchanged. The controller
// never observes the effective value; faults are unannounced.
double apply_fault(double delta_E_cmd, double t, const FaultSchedule& schedule);

}  // namespace tbwsim
