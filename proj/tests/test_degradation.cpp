#include <doctest.h>

#include "tbwsim/degradation.hpp"

using namespace tbwsim;

TEST_CASE("fault schedule piecewise branches") {
    const FaultSchedule f = FaultSchedule::standard_fault();
    const double cmd = deg2rad(1.0);

    // 0.5 * 1.0 - 0.5 deg = 0.0 deg
    CHECK(rad2deg(apply_fault(cmd, 5.0, f)) == doctest::Approx(0.0).epsilon(1e-12));
    // 0.4 * 1.0 + 0.6 deg = 1.0 deg
    CHECK(rad2deg(apply_fault(cmd, 10.0, f)) == doctest::Approx(1.0).epsilon(1e-12));
    // 0.3 * 1.0 - 0.7 deg = -0.4 deg
    CHECK(rad2deg(apply_fault(cmd, 13.0, f)) == doctest::Approx(-0.4).epsilon(1e-12));
    // pre-fault passthrough
    CHECK(apply_fault(cmd, 2.0, f) == cmd);
}

TEST_CASE("fault boundary instants use the earlier segment") {
    const FaultSchedule f = FaultSchedule::standard_fault();
    const double cmd = deg2rad(1.0);
    CHECK(apply_fault(cmd, 4.0, f) == cmd);  // (4, 8] starts after 4 s
    CHECK(rad2deg(apply_fault(cmd, 8.0, f)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rad2deg(apply_fault(cmd, 12.0, f)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identity schedule is an exact passthrough") {
    FaultSchedule identity;
    identity.segments = {{0.0, 1.0, 0.0}};
    for (double cmd : {-0.25, -0.017, 0.0, 0.004, 0.23}) {
        CHECK(apply_fault(cmd, 7.3, identity) == cmd);
        CHECK(apply_fault(cmd, 7.3, FaultSchedule::none()) == cmd);
    }
}

TEST_CASE("faulted output is re-saturated") {
    FaultSchedule f;
    f.segments = {{1.0, 1.0, deg2rad(20.0)}};
    CHECK(apply_fault(0.2, 2.0, f) == kElevatorLimit);
}

TEST_CASE("output is continuous within a segment") {
    const FaultSchedule f = FaultSchedule::standard_fault();
    const double cmd = deg2rad(0.8);
    const double a = apply_fault(cmd, 5.0, f);
    const double b = apply_fault(cmd, 7.999, f);
    CHECK(a == b);  // same affine map throughout the segment
}

TEST_CASE("schedule validation") {
    FaultSchedule bad_order;
    bad_order.segments = {{8.0, 0.5, 0.0}, {4.0, 0.5, 0.0}};
    CHECK_THROWS_AS(bad_order.validate(), ConfigError);

    FaultSchedule bad_gain;
    bad_gain.segments = {{4.0, 1.5, 0.0}};
    CHECK_THROWS_AS(bad_gain.validate(), ConfigError);

    FaultSchedule zero_gain;
    zero_gain.segments = {{4.0, 0.0, 0.0}};
    CHECK_THROWS_AS(zero_gain.validate(), ConfigError);

    CHECK_NOTHROW(FaultSchedule::standard_fault().validate());
    CHECK_NOTHROW(FaultSchedule::prose_variant().validate());
}
