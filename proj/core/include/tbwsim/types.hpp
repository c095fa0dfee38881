#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tbwsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kGravity = 9.80665;     // m/s^2
inline constexpr double kRhoSeaLevel = 1.225;   // kg/m^3
inline constexpr double kElevatorLimit = 0.25;  // rad, actuator saturation
inline constexpr double kLbfToNewton = 4.448222;
inline constexpr double kFtToMeter = 0.3048;
inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double d) { return d * kPi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

inline double clamp_elevator(double d) {
    if (d < -kElevatorLimit) return -kElevatorLimit;
    if (d > kElevatorLimit) return kElevatorLimit;
    return d;
}

// Rigid-body state. u,v,w are inertial-referenced velocity components
// expressed in body axes; h is altitude above ground, positive up.
// Euler kinematics are singular at |theta| = 90 deg; the simulation aborts
// one degree before that.
struct AircraftState {
    double u = 0.0, v = 0.0, w = 0.0;           // m/s
    double p = 0.0, q = 0.0, r = 0.0;           // rad/s
    double phi = 0.0, theta = 0.0, psi = 0.0;   // rad
    double x = 0.0, y = 0.0;                    // m
    double h = 0.0;                             // m, positive up
    double t = 0.0;                             // s

    bool finite() const {
        return std::isfinite(u) && std::isfinite(v) && std::isfinite(w) &&
               std::isfinite(p) && std::isfinite(q) && std::isfinite(r) &&
               std::isfinite(phi) && std::isfinite(theta) && std::isfinite(psi) &&
               std::isfinite(x) && std::isfinite(y) && std::isfinite(h);
    }
};

struct ControlInputs {
    double delta_E = 0.0;  // elevator deflection, rad; callers clamp to +-0.25
    double thrust = 0.0;   // body-x propulsive force, N (engine moment is zero)
};

// Body-to-inertial direction cosine matrix (ZYX Euler).
Mat3 dcm_body_to_inertial(double phi, double theta, double psi);

struct SimulationDiverged : std::runtime_error {
    explicit SimulationDiverged(const std::string& what) : std::runtime_error(what) {}
};
struct TrimFailure : std::runtime_error {
    explicit TrimFailure(const std::string& what) : std::runtime_error(what) {}
};
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};
struct ControllerFault : std::runtime_error {
    explicit ControllerFault(const std::string& what) : std::runtime_error(what) {}
};
struct LearningDiverged : std::runtime_error {
    explicit LearningDiverged(const std::string& what) : std::runtime_error(what) {}
};
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tbwsim
