#include <doctest.h>

#include <cmath>

#include "tbwsim/guidance.hpp"

using namespace tbwsim;

TEST_CASE("flare geometry from the touchdown speed anchor") {
    // V_TD = 161 m/s => V_stall = 140 m/s
    const LandingGeometry g = plan_landing(140.0, 3.0, 100.0);
    CHECK(g.V_TD == doctest::Approx(161.0));
    CHECK(g.V_f == doctest::Approx(172.2));
    CHECK(g.R == doctest::Approx(172.2 * 172.2 / 1.9613).epsilon(1e-4));
    CHECK(g.h_f == doctest::Approx(g.R * (1.0 - std::cos(deg2rad(3.0)))).epsilon(1e-12));
    CHECK(g.s_a < 0.0);
    CHECK(g.s_f < 0.0);
    CHECK(g.s_td == doctest::Approx(g.s_a + g.s_f));
    CHECK(g.h_f < 50.0);
    CHECK(g.h_f > 0.0);
}

TEST_CASE("degenerate flat approach limit") {
    const LandingGeometry g = plan_landing(140.0, 0.01, 100.0);
    CHECK(g.h_f < 1e-3);
    CHECK(std::abs(g.s_f) < 30.0);
}

TEST_CASE("profile is continuous and tangent at flare entry") {
    const LandingGeometry g = plan_landing(140.0, 3.0, 100.0);
    const double eps = 1e-9;
    const GuidanceCommand before = desired_state(g.s_f - eps, g);
    const GuidanceCommand after = desired_state(g.s_f + eps, g);
    CHECK(std::abs(before.h_des - after.h_des) < 1e-6);
    CHECK(std::abs(before.h_des - g.h_f) < 1e-6);
    // arc tangent to the glideslope: theta_f(flare entry) = -theta_a
    CHECK(std::abs(after.theta_des + g.theta_a) < 1e-7);
    CHECK(before.dh_dx == doctest::Approx(after.dh_dx).epsilon(1e-6));
}

TEST_CASE("desired pitch is zero at touchdown") {
    const LandingGeometry g = plan_landing(140.0, 3.0, 100.0);
    const GuidanceCommand at_td = desired_state(-1e-12, g);
    CHECK(std::abs(at_td.theta_des) < 1e-7);
    CHECK(desired_state(0.0, g).phase == LandingPhase::Touchdown);
    CHECK(desired_state(5.0, g).phase == LandingPhase::Touchdown);
}

TEST_CASE("flare pitch matches the independent arc-tangent reconstruction") {
    const LandingGeometry g = plan_landing(140.0, 3.0, 100.0);
    const double x_mid = 0.5 * g.s_f;
    const GuidanceCommand cmd = desired_state(x_mid, g);
    // the tangent angle of the circular arc equals asin(x/R)
    const double tangent = std::atan(cmd.dh_dx);
    CHECK(cmd.theta_des == doctest::Approx(std::asin(x_mid / g.R)).epsilon(1e-12));
    CHECK(tangent == doctest::Approx(cmd.theta_des).epsilon(1e-4));
}

TEST_CASE("profile altitude and pitch are monotone along the plan") {
    const LandingGeometry g = plan_landing(140.0, 3.0, 100.0);
    double prev_h = 1e9, prev_theta = -1e9;
    for (double x = g.x_start; x < -1.0; x += 5.0) {
        const GuidanceCommand cmd = desired_state(x, g);
        CHECK(cmd.h_des <= prev_h + 1e-12);
        CHECK(cmd.theta_des >= prev_theta - 1e-12);
        prev_h = cmd.h_des;
        prev_theta = cmd.theta_des;
    }
    CHECK(desired_state(g.x_start, g).h_des == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("planner output is pure geometry") {
    const LandingGeometry g = plan_landing(140.0, 3.0, 100.0);
    const GuidanceCommand a = desired_state(-500.0, g);
    const GuidanceCommand b = desired_state(-500.0, g);
    CHECK(a.h_des == b.h_des);
    CHECK(a.theta_des == b.theta_des);
    CHECK(a.dh_dx == b.dh_dx);
}

TEST_CASE("geometry validation") {
    CHECK_THROWS_AS(plan_landing(-10.0, 3.0, 100.0), GeometryError);
    CHECK_THROWS_AS(plan_landing(140.0, 0.0, 100.0), GeometryError);
    CHECK_THROWS_AS(plan_landing(140.0, 3.5, 100.0), GeometryError);
    // a 50 ft screen height sits below this airframe's flare altitude
    CHECK_THROWS_AS(plan_landing(140.0, 3.0, 100.0, 50.0 * kFtToMeter), GeometryError);
    // slow enough aircraft can fly the 50 ft screen
    CHECK_NOTHROW(plan_landing(60.0, 3.0, 100.0, 50.0 * kFtToMeter));
}
