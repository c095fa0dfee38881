#include "tbwsim/guidance.hpp"

#include <cmath>

namespace tbwsim {

LandingGeometry plan_landing(double V_stall, double theta_a_deg, double h0,
                             double screen_height_m) {
    if (V_stall <= 0.0) throw GeometryError("plan_landing: V_stall must be positive");
    if (!(theta_a_deg > 0.0 && theta_a_deg <= 3.0))
        throw GeometryError("plan_landing: approach angle must be in (0, 3] deg");
    if (screen_height_m <= 0.0) throw GeometryError("plan_landing: screen height must be positive");

    LandingGeometry g;
    g.theta_a = deg2rad(theta_a_deg);
    g.V_stall = V_stall;
    g.V_TD = 1.15 * V_stall;
    g.V_f = 1.23 * V_stall;
    g.R = g.V_f * g.V_f / (0.2 * kGravity);
    g.h_f = g.R * (1.0 - std::cos(g.theta_a));
    g.screen_height = screen_height_m;
    if (g.h_f >= screen_height_m)
        throw GeometryError("plan_landing: flare altitude reaches the screen height");
    g.s_a = -(screen_height_m - g.h_f) / std::tan(g.theta_a);
    g.s_f = -g.R * std::sin(g.theta_a);
    g.s_td = g.s_a + g.s_f;
    g.x_td = 0.0;
    g.h0 = h0;
    // extend the glideslope backward from the screen height to h0
    g.x_start = g.s_td - (h0 - screen_height_m) / std::tan(g.theta_a);
    return g;
}

GuidanceCommand desired_state(double x, const LandingGeometry& g) {
    GuidanceCommand cmd;
    if (x >= g.x_td) {
        cmd.phase = LandingPhase::Touchdown;
        cmd.h_des = 0.0;
        cmd.dh_dx = 0.0;
        cmd.theta_des = 0.0;
        return cmd;
    }
    if (x <= g.s_f) {
        // glideslope (and its linear extension above the screen height)
        cmd.phase = LandingPhase::Approach;
        cmd.h_des = g.screen_height + (g.s_td - x) * std::tan(g.theta_a);
        cmd.dh_dx = -std::tan(g.theta_a);
        cmd.theta_des = -g.theta_a;
        return cmd;
    }
    // circular flare arc centered above the touchdown point
    cmd.phase = LandingPhase::Flare;
    const double root = std::sqrt(g.R * g.R - x * x);
    cmd.h_des = g.R - root;
    cmd.dh_dx = x / root;
    cmd.theta_des = std::asin((x - g.x_td) / g.R);
    return cmd;
}

}  // namespace tbwsim
