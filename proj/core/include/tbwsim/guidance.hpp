#pragma once

#include "tbwsim/types.hpp"

namespace tbwsim {

// Landing profile: straight glideslope at the approach angle, joined C1 to a
// circular flare arc that is tangent to the runway at the touchdown point
// x = 0. Distances along the approach are negative (measured toward
// touchdown); the glideslope is anchored at the screen height and extended
// linearly backward to the initial altitude.
struct LandingGeometry {
    double theta_a = 0.0;        // approach angle, rad
    double V_stall = 0.0;        // m/s
    double V_TD = 0.0;           // 1.15 * V_stall
    double V_f = 0.0;            // 1.23 * V_stall
    double R = 0.0;              // flare radius, m
    double h_f = 0.0;            // flare altitude, m
    double s_a = 0.0;            // approach distance, m (negative)
    double s_f = 0.0;            // flare distance, m (negative)
    double s_td = 0.0;           // s_a + s_f
    double x_td = 0.0;           // touchdown coordinate
    double screen_height = 0.0;  // m
    double h0 = 0.0;             // altitude the profile starts from
    double x_start = 0.0;        // where h_des(x) == h0
};

// Throws GeometryError when the flare is taller than the screen height or
// the inputs are out of range (V_stall > 0, 0 < theta_a <= 3 deg).
LandingGeometry plan_landing(double V_stall, double theta_a_deg, double h0,
                             double screen_height_m = 50.0);

enum class LandingPhase { Approach, Flare, Touchdown };

struct GuidanceCommand {
    double h_des = 0.0;      // m
    double dh_dx = 0.0;      // altitude slope, m per m of ground distance
    double theta_des = 0.0;  // rad
    LandingPhase phase = LandingPhase::Approach;
};

// Pure geometry: the same x always yields the same command. Past the
// touchdown point the phase is Touchdown (episode end), not an error.
GuidanceCommand desired_state(double x, const LandingGeometry& geom);

}  // namespace tbwsim
