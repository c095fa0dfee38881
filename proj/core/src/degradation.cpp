#include "tbwsim/degradation.hpp"

#include <algorithm>

namespace tbwsim {

void FaultSchedule::validate() const {
    double prev = -1.0;
    for (const auto& seg : segments) {
        if (seg.t_start < 0.0) throw ConfigError("fault segment t_start must be >= 0");
        if (seg.t_start <= prev) throw ConfigError("fault segments must be sorted, non-overlapping");
        if (!(seg.gain > 0.0 && seg.gain <= 1.0)) throw ConfigError("fault gain must be in (0, 1]");
        prev = seg.t_start;
    }
}

FaultSchedule FaultSchedule::none() { return {}; }

FaultSchedule FaultSchedule::standard_fault() {
    FaultSchedule s;
    s.segments = {{4.0, 0.5, deg2rad(-0.5)},
                  {8.0, 0.4, deg2rad(0.6)},
                  {12.0, 0.3, deg2rad(-0.7)}};
    return s;
}

FaultSchedule FaultSchedule::prose_variant() {
    FaultSchedule s;
    s.segments = {{4.0, 0.5, deg2rad(60.0)},   // "50% deficiency and 60 deg additive bias"
                  {8.0, 0.7, deg2rad(0.6)},    // "30% deficiency"
                  {12.0, 0.3, deg2rad(-0.7)}};
    return s;
}

double apply_fault(double delta_E_cmd, double t, const FaultSchedule& schedule) {
    const FaultSegment* active = nullptr;
    for (const auto& seg : schedule.segments) {
        if (seg.t_start < t) active = &seg;  // intervals are (t_start, t_next]
    }
    if (!active) return delta_E_cmd;
    return clamp_elevator(active->gain * delta_E_cmd + active->bias);
}

}  // namespace tbwsim
