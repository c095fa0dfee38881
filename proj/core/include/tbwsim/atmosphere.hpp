#pragma once

#include <random>
#include <utility>

#include "tbwsim/types.hpp"

namespace tbwsim {

// Dryden scale lengths and intensities (low-altitude forms). Scale lengths
// are stored in meters; the defining formulas evaluate altitude in feet.
struct DrydenParams {
    double u20 = 0.0;  // reference wind speed at 20 ft, m/s
    double z = 0.0;    // altitude, m
    double u1 = 0.0;   // trim airspeed, m/s
    double L_u = 0.0, L_v = 0.0, L_w = 0.0;           // m
    double sigma_u = 0.0, sigma_v = 0.0, sigma_w = 0.0;  // m/s

    bool operator==(const DrydenParams&) const = default;
};

// Throws ConfigError for z <= 0. L_u = L_v, sigma_u = sigma_v by construction.
DrydenParams dryden_scales(double z_m, double u20, double u1);

// Gust generator state: shaping-filter internals plus the derived quantities
// consumed by the equations of motion. With turbulence disabled every field
// stays identically zero.
struct WindState {
    bool active = false;

    // filter internals: first order for the u gust, second order for v and w
    double xu = 0.0;
    Eigen::Vector2d xv = Eigen::Vector2d::Zero();
    Eigen::Vector2d xw = Eigen::Vector2d::Zero();

    Vec3 W = Vec3::Zero();        // body-axis gust velocity, m/s
    Vec3 W_prev = Vec3::Zero();
    Vec3 dW_dt = Vec3::Zero();    // temporal derivative seen by the aircraft, m/s^2
    Mat3 grad_W = Mat3::Zero();           // spatial gradient in body axes, (i,j) = dW_i/dx_j
    Mat3 grad_W_inertial = Mat3::Zero();  // same tensor in the inertial frame
    Vec3 omega_w = Vec3::Zero();  // equivalent rigid-air angular rates, body axes, rad/s

    // cached zero-order-hold discretization, retuned when params or dt change
    struct Discretization {
        DrydenParams key;
        double dt = 0.0;
        double Adu = 0.0, Bdu = 0.0, Cu = 0.0;
        Eigen::Matrix2d Adv = Eigen::Matrix2d::Zero();
        Eigen::Vector2d Bdv = Eigen::Vector2d::Zero();
        Eigen::RowVector2d Cv = Eigen::RowVector2d::Zero();
        Eigen::Matrix2d Adw = Eigen::Matrix2d::Zero();
        Eigen::Vector2d Bdw = Eigen::Vector2d::Zero();
        Eigen::RowVector2d Cw = Eigen::RowVector2d::Zero();
        bool valid = false;
    } disc;
};

// Advances the three shaping filters by one step of band-limited white noise
// (`noise` holds three unit-variance samples). Output gains are calibrated so
// the stationary standard deviations equal sigma_u, sigma_v, sigma_w exactly.
void dryden_step(WindState& wind, const DrydenParams& params, const Vec3& noise, double dt);

// Temporal derivative by backward difference and frozen-turbulence spatial
// gradients (d/dx from the time derivative, d/dy = d/dz = 0), expressed in
// both frames. `body_to_inertial` is the current attitude DCM.
void wind_gradients(WindState& wind, double u1, const Mat3& body_to_inertial, double dt);

// Half the curl of the wind field, rotated into body axes.
Vec3 wind_angular_rates(const Mat3& grad_W_inertial, const Mat3& body_to_inertial);

// Additive zero-mean Gaussian noise on the pitch and pitch-rate measurements.
// The simulation truth is never touched; only controllers consume these.
std::pair<double, double> add_sensor_noise(double theta, double q,
                                           double sigma_theta, double sigma_q,
                                           std::mt19937_64& rng);

}  // namespace tbwsim
