#include "tbwsim/simulation.hpp"

#include <cmath>

namespace tbwsim {

namespace {

constexpr double kMinGustAltitude = 10.0 * kFtToMeter;  // scale-length floor

std::uint64_t substream(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 over seed^salt, decorrelates the gust and sensor streams
    std::uint64_t z = seed ^ salt;
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

Simulator::Simulator(AeroModel model, SimOptions options)
    : model_(std::move(model)), opt_(std::move(options)),
      gust_rng_(substream(opt_.seed, 0x67757374ull)),
      sensor_rng_(substream(opt_.seed, 0x73656e73ull)) {
    if (opt_.dt <= 0.0) throw ConfigError("Simulator: dt must be positive");
    model_.validate();
    opt_.faults.validate();
}

void Simulator::reset(double V, double h, std::optional<double> theta0,
                      std::optional<double> x0, double gamma0) {
    trim_ = solve_trim(model_, V, h, gamma0);
    state_ = trim_state(trim_);
    if (theta0) state_.theta = *theta0;
    if (x0) state_.x = *x0;
    wind_ = WindState{};
    prev_alpha_ = 0.0;
    has_prev_alpha_ = false;
    gust_rng_.seed(substream(opt_.seed, 0x67757374ull));
    sensor_rng_.seed(substream(opt_.seed, 0x73656e73ull));

    if (opt_.turbulence && opt_.gust_warmup > 0.0) {
        const int warmup_steps = static_cast<int>(std::round(opt_.gust_warmup / opt_.dt));
        std::normal_distribution<double> unit(0.0, 1.0);
        const DrydenParams params =
            dryden_scales(std::max(state_.h, kMinGustAltitude), opt_.u20, trim_.V);
        for (int i = 0; i < warmup_steps; ++i) {
            const Vec3 noise(unit(gust_rng_), unit(gust_rng_), unit(gust_rng_));
            dryden_step(wind_, params, noise, opt_.dt);
        }
        wind_.W_prev = wind_.W;  // the first backward difference starts clean
    }
}

void Simulator::advance_wind() {
    if (!opt_.turbulence) return;
    const DrydenParams params =
        dryden_scales(std::max(state_.h, kMinGustAltitude), opt_.u20, trim_.V);
    std::normal_distribution<double> unit(0.0, 1.0);
    const Vec3 noise(unit(gust_rng_), unit(gust_rng_), unit(gust_rng_));
    dryden_step(wind_, params, noise, opt_.dt);

    const Mat3 Cb2i = dcm_body_to_inertial(state_.phi, state_.theta, state_.psi);
    wind_gradients(wind_, trim_.V, Cb2i, opt_.dt);
    wind_.omega_w = wind_angular_rates(wind_.grad_W_inertial, Cb2i);
    if (!opt_.wind_accel_coupling) wind_.dW_dt.setZero();
}

Simulator::StepOutput Simulator::step(double delta_E_cmd) {
    StepOutput out;
    out.delta_cmd = clamp_elevator(delta_E_cmd);
    out.delta_eff = apply_fault(out.delta_cmd, state_.t, opt_.faults);

    advance_wind();

    const double alpha_now = angle_of_attack(state_, wind_);
    const double alpha_dot = has_prev_alpha_ ? (alpha_now - prev_alpha_) / opt_.dt : 0.0;

    const ControlInputs inputs{out.delta_eff, trim_.thrust};
    state_ = integrate_step(state_, inputs, model_, wind_, opt_.dt, alpha_dot);

    prev_alpha_ = alpha_now;
    has_prev_alpha_ = true;
    return out;
}

std::pair<double, double> Simulator::measure() {
    return add_sensor_noise(state_.theta, state_.q,
                            opt_.sensor_sigma_theta, opt_.sensor_sigma_q, sensor_rng_);
}

double Simulator::euler_pitch_rate() const {
    const Vec3 omega_air(state_.p - wind_.omega_w(0),
                         state_.q - wind_.omega_w(1),
                         state_.r - wind_.omega_w(2));
    return std::cos(state_.phi) * omega_air(1) - std::sin(state_.phi) * omega_air(2);
}

Vec3 Simulator::ground_velocity() const {
    return dcm_body_to_inertial(state_.phi, state_.theta, state_.psi) *
           Vec3(state_.u, state_.v, state_.w);
}

}  // namespace tbwsim
