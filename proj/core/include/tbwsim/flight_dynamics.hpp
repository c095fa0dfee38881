#pragma once

#include <array>
#include <complex>

#include "tbwsim/aero_model.hpp"
#include "tbwsim/atmosphere.hpp"
#include "tbwsim/types.hpp"

namespace tbwsim {

struct StateRates {
    double du = 0, dv = 0, dw = 0;
    double dp = 0, dq = 0, dr = 0;
    double dphi = 0, dtheta = 0, dpsi = 0;
    double dx = 0, dy = 0, dh = 0;
};

struct AeroForcesMoments {
    Vec3 force;   // body axes, N
    Vec3 moment;  // body axes, N*m
};

// Gravity acceleration in body axes; norm is g for any attitude.
Vec3 gravity_body(double theta, double phi, double g = kGravity);

// Lift/drag/pitch moment from the linear derivative model, evaluated with
// air-relative velocity (state minus gust) and rotated into body axes by the
// angle of attack. The drag build-up uses |alpha| and |delta_E|. Lateral
// force and roll/yaw moments are zero. Throws SimulationDiverged when the
// air-relative speed drops below 1 m/s or the output is non-finite.
AeroForcesMoments aero_forces_moments(const AircraftState& s, const ControlInputs& in,
                                      const AeroModel& m, const WindState& wind,
                                      double alpha_dot);

// Air-relative angle of attack and airspeed for the current state.
double angle_of_attack(const AircraftState& s, const WindState& wind);
double airspeed(const AircraftState& s, const WindState& wind);

// Full 6-DoF derivative: translational dynamics with gust-acceleration
// transport, rotational dynamics with the full inertia matrix, Euler
// kinematics on air-mass-corrected rates, inertial position rates.
// Throws SimulationDiverged within one degree of the Euler singularity.
StateRates state_derivative(const AircraftState& s, const ControlInputs& in,
                            const AeroModel& m, const WindState& wind,
                            double alpha_dot = 0.0);

// Fixed-step fourth-order Runge-Kutta advance; elevator, thrust, gust state
// and alpha_dot are held over the step.
AircraftState integrate_step(const AircraftState& s, const ControlInputs& in,
                             const AeroModel& m, const WindState& wind,
                             double dt, double alpha_dot = 0.0);

struct TrimPoint {
    double delta_E = 0.0;  // rad
    double thrust = 0.0;   // N
    double alpha = 0.0;    // rad
    double V = 0.0;        // m/s
    double h = 0.0;        // m
    double gamma = 0.0;    // flight-path angle, rad (0 = level flight)
};

// Wings-level steady flight at a fixed flight-path angle (level by default):
// Newton iteration on the (u_dot, w_dot, q_dot) residuals over
// (alpha, delta_E, thrust). Throws TrimFailure if V is outside [100, 250]
// m/s or the iteration does not reach 1e-9 within 100 steps.
TrimPoint solve_trim(const AeroModel& m, double V, double h, double gamma = 0.0);

// State realizing a trim point (theta = alpha + gamma).
AircraftState trim_state(const TrimPoint& tp);

struct LongitudinalModes {
    Eigen::Matrix4d A;  // Jacobian of (u, w, q, theta) rates about trim
    // all four roots, conjugates adjacent, sorted by |Im| then Re descending
    std::array<std::complex<double>, 4> eigenvalues;
    std::array<std::complex<double>, 2> short_period_pair;  // faster mode
    std::array<std::complex<double>, 2> phugoid_pair;       // slower mode
    std::complex<double> short_period;  // representative root, Im >= 0
    std::complex<double> phugoid;
    bool short_period_oscillatory = false;
    bool phugoid_oscillatory = false;
};

// Central finite-difference Jacobian of the longitudinal subsystem about the
// trim point. A purely real spectrum is reported, not an error.
LongitudinalModes linearize_longitudinal(const AeroModel& m, const TrimPoint& tp,
                                         double step = 1e-6);

}  // namespace tbwsim
