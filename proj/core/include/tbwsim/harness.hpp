#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tbwsim/aero_model.hpp"
#include "tbwsim/control_di.hpp"
#include "tbwsim/degradation.hpp"
#include "tbwsim/guidance.hpp"
#include "tbwsim/rl_core.hpp"
#include "tbwsim/simulation.hpp"

namespace tbwsim {

enum class ScenarioKind { Ideal, NoiseDisturbance, ActuatorFault, ModelUncertainty };
enum class ControllerKind { FQL, QL, DI };

std::string to_string(ScenarioKind k);
std::string to_string(ControllerKind c);
ScenarioKind scenario_from_string(const std::string& s);
ControllerKind controller_from_string(const std::string& s);

// Grid, membership, window and reward knobs shared by training and tracking.
struct RLParams {
    double sigma_theta = 0.002;      // rad
    double sigma_thetadot = 0.015;   // rad/s
    bool insert_zero_rate = true;    // zero pitch-rate center anchors the hold
    int window_radius = 2;
    RewardParams reward;
    double theta_des_train = deg2rad(1.0);
    double theta0_min = 0.0;             // training initial pitch range
    double theta0_max = deg2rad(2.0);

    StateGrid make_grid() const;
};

// Everything one run needs. Exactly one scenario kind; turbulence and sensor
// noise act only under NoiseDisturbance, the fault schedule only under
// ActuatorFault, the perturbed dataset only under ModelUncertainty.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Ideal;
    ControllerKind controller = ControllerKind::FQL;
    std::uint64_t seed = 1;
    double duration = 15.0;  // s
    double V0 = 160.0;       // m/s
    double h0 = 100.0;       // m
    double dt = 0.01;        // s

    AeroModel nominal_model = AeroModel::chaka50();
    TypoPolicy typo_policy = TypoPolicy::Corrected;
    double derivative_scale = 1.0;  // plant-side multiplier (robustness sweep)

    // landing geometry
    double V_stall = 140.0;        // m/s; touchdown target 1.15*V_stall
    double theta_a_deg = 3.0;
    double screen_height_m = 50.0;

    // disturbance knobs (non-paper defaults, see config docs); the severe
    // gust setting reproduces the reported controller ordering
    double u20 = 20.0;                                 // m/s
    double sensor_sigma_theta = deg2rad(0.05);         // rad
    double sensor_sigma_q = deg2rad(0.01);             // rad/s
    bool wind_accel_coupling = true;

    FaultSchedule faults = FaultSchedule::standard_fault();
    DIGains di_gains;
    RLParams rl;
    LearningSchedule learning;  // consumed by training runs

    // The plant the equations of motion integrate for this scenario.
    AeroModel plant_model() const;
    SimOptions sim_options() const;
    std::string canonical_text() const;  // serialized knobs, manifest + hash input
};

// Loads run-config keys over the defaults; unknown keys are rejected.
ScenarioConfig load_scenario_config(const std::string& path, ScenarioConfig base = {});

// Trapezoid-rule running time average on the integration grid; a constant
// integrand averages to itself exactly.
class TrapezoidAverage {
public:
    void add(double value, double dt) {
        if (has_prev_) {
            integral_ += 0.5 * (prev_ + value) * dt;
            elapsed_ += dt;
        }
        prev_ = value;
        has_prev_ = true;
    }
    double average() const { return elapsed_ > 0.0 ? integral_ / elapsed_ : 0.0; }
    double elapsed() const { return elapsed_; }

private:
    double integral_ = 0.0, elapsed_ = 0.0, prev_ = 0.0;
    bool has_prev_ = false;
};

struct RunMetrics {
    ScenarioKind kind = ScenarioKind::Ideal;
    ControllerKind controller = ControllerKind::FQL;
    double te_theta_deg = 0.0;   // time-averaged |pitch - desired|
    double te_h_m = 0.0;         // time-averaged |altitude - desired|
    double ce_deg = 0.0;         // time-averaged |elevator command|
    double touchdown_speed = 0.0;  // body-x velocity at episode end, m/s
    double duration = 0.0;       // elapsed simulated time, s
    bool touched_down = false;
    bool diverged = false;
    double derivative_scale = 1.0;
    double V0 = 160.0;
    std::uint64_t seed = 1;
};

struct HistoryRow {
    double t, theta, theta_des, q, h, h_des, delta_cmd, delta_eff, u, alpha, Wz;
};
struct WindRow {
    double t, Wx, Wy, Wz, omega_wx, omega_wy, omega_wz;
};

struct TrainEnv {
    AeroModel model = AeroModel::chaka50();
    double dt = 0.01;
    double V0 = 160.0;
    double h0 = 100.0;
    RLParams rl;
};

struct TrainResult {
    QTable table;
    std::vector<double> episode_returns;  // per-episode reward sums
    int diverged_episodes = 0;            // ended early at the attitude guard
};

TrainEnv train_env(const ScenarioConfig& cfg);

// Tabular or fuzzy Q-learning over fixed-horizon pitch-hold episodes
// (random initial pitch, constant desired pitch), epsilon-greedy with linear
// per-step decays. Deterministic for a fixed seed.
TrainResult train(ControllerKind method, const LearningSchedule& schedule,
                  std::uint64_t seed, const TrainEnv& env);

// One landing run: the planner issues desired pitch and altitude each step,
// the selected controller tracks them, metrics integrate on the simulation
// grid (trapezoid rule). `table` is required for FQL/QL, ignored for DI.
RunMetrics evaluate(const ScenarioConfig& cfg, const QTable* table,
                    std::vector<HistoryRow>* history = nullptr,
                    std::vector<WindRow>* wind_history = nullptr,
                    LandingGeometry* geometry_out = nullptr);

// Derivative-scale x initial-speed grid of landing runs, embarrassingly
// parallel, results sorted by (scale, speed). Diverged cells are recorded
// and the sweep continues.
std::vector<RunMetrics> robustness_sweep(const ScenarioConfig& base, const QTable* table,
                                         const std::vector<double>& scales,
                                         const std::vector<double>& speeds,
                                         int jobs = 0);

std::vector<double> default_sweep_scales();  // 0.70 .. 1.30, 7.5% steps
std::vector<double> default_sweep_speeds();  // 150 .. 220 m/s, 8.75 steps

// Scenario x controller x metric grid in a fixed layout, best controller
// flagged per scenario and metric.
std::string comparison_text(const std::vector<RunMetrics>& runs);
std::string comparison_csv(const std::vector<RunMetrics>& runs);

// CSV round-trip for run metrics ('.' decimal, header row).
void write_metrics_csv(const std::string& path, const std::vector<RunMetrics>& rows);
std::vector<RunMetrics> read_metrics_csv(const std::string& path);

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& rows);
void write_wind_csv(const std::string& path, const std::vector<WindRow>& rows);
void write_learning_curve_csv(const std::string& path,
                              const std::vector<double>& episode_returns,
                              int moving_average_window = 100);

// Reproducibility record: config hash, seed, code version, geometry echo.
void write_manifest(const std::string& path, const ScenarioConfig& cfg,
                    const LandingGeometry* geometry);

std::string code_version();

}  // namespace tbwsim
