#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "tbwsim/aero_model.hpp"
#include "tbwsim/atmosphere.hpp"
#include "tbwsim/degradation.hpp"
#include "tbwsim/flight_dynamics.hpp"
#include "tbwsim/types.hpp"

namespace tbwsim {

struct SimOptions {
    double dt = 0.01;                 // s
    bool turbulence = false;
    double u20 = 7.7;                 // m/s, reference wind at 20 ft
    bool wind_accel_coupling = true;  // feed gust acceleration into translation
    double gust_warmup = 5.0;         // s of pre-rolling before a disturbed run
    double sensor_sigma_theta = 0.0;  // rad
    double sensor_sigma_q = 0.0;      // rad/s
    FaultSchedule faults;             // empty = healthy actuator
    std::uint64_t seed = 1;
};

// One aircraft plus its gust field, fault path and measurement path. Owns its
// state; instances are independent and safe to run in parallel. Thrust is
// held at the trim value for the whole run; only the elevator is commanded.
class Simulator {
public:
    Simulator(AeroModel model, SimOptions options);

    // Trims at (V, h) on the given flight path (level by default), optionally
    // overrides the initial pitch attitude and downrange position, and
    // pre-rolls the gust filters. Thrust is held at the trim value.
    void reset(double V, double h,
               std::optional<double> theta0 = std::nullopt,
               std::optional<double> x0 = std::nullopt,
               double gamma0 = 0.0);

    struct StepOutput {
        double delta_cmd = 0.0;  // clamped command, rad
        double delta_eff = 0.0;  // after the fault path, rad
    };
    // Advances one fixed step. Throws SimulationDiverged on a non-finite
    // state or near the Euler singularity.
    StepOutput step(double delta_E_cmd);

    // Pitch and pitch-rate measurements (noisy when sigmas are set. The
    // truth trajectory is never affected.)
    std::pair<double, double> measure();

    const AircraftState& state() const { return state_; }
    const WindState& wind() const { return wind_; }
    const TrimPoint& trim() const { return trim_; }
    const AeroModel& model() const { return model_; }
    const SimOptions& options() const { return opt_; }
    double alpha() const { return angle_of_attack(state_, wind_); }
    double current_airspeed() const { return airspeed(state_, wind_); }
    double euler_pitch_rate() const;     // theta_dot from the kinematic equation
    Vec3 ground_velocity() const;        // inertial frame
    double elapsed() const { return state_.t; }

private:
    void advance_wind();

    AeroModel model_;
    SimOptions opt_;
    TrimPoint trim_;
    AircraftState state_;
    WindState wind_;
    double prev_alpha_ = 0.0;
    bool has_prev_alpha_ = false;
    std::mt19937_64 gust_rng_;
    std::mt19937_64 sensor_rng_;
};

}  // namespace tbwsim
