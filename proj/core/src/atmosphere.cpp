#include "tbwsim/atmosphere.hpp"

#include <cmath>

namespace tbwsim {

DrydenParams dryden_scales(double z_m, double u20, double u1) {
    if (z_m <= 0.0) throw ConfigError("dryden_scales: altitude must be positive");
    if (u1 <= 0.0) throw ConfigError("dryden_scales: airspeed must be positive");
    DrydenParams p;
    p.u20 = u20;
    p.z = z_m;
    p.u1 = u1;
    const double z_ft = z_m / kFtToMeter;
    const double denom = 0.177 + 0.000823 * z_ft;
    const double L_u_ft = z_ft / std::pow(denom, 1.2);
    p.L_u = p.L_v = L_u_ft * kFtToMeter;
    p.L_w = z_ft * kFtToMeter;  // L_w = z
    p.sigma_w = 0.1 * u20;
    p.sigma_u = p.sigma_v = p.sigma_w / std::pow(denom, 0.4);
    return p;
}

namespace {

// Stationary covariance of x+ = A x + B n, n ~ N(0,1), by doubling:
// P_n = sum_{k<2^n} A^k B B' A'^k.
template <typename MatT, typename VecT>
MatT discrete_stationary_cov(MatT A, const VecT& B) {
    MatT P = B * B.transpose();
    for (int it = 0; it < 64; ++it) {
        P = (A * P * A.transpose() + P).eval();
        A = (A * A).eval();
    }
    return P;
}

// First-order gust filter K/(1 + a s), zero-order hold at dt, output gain
// rescaled so the stationary output standard deviation is exactly sigma.
void tune_first_order(double a, double K, double sigma, double dt,
                      double& Ad, double& Bd, double& C) {
    const double lam = 1.0 / a;
    Ad = std::exp(-lam * dt);
    Bd = (1.0 - Ad) / lam;
    C = K / a;
    const double var_x = Bd * Bd / (1.0 - Ad * Ad);
    const double std_y = std::abs(C) * std::sqrt(var_x);
    if (std_y > 0.0 && sigma > 0.0) C *= sigma / std_y;
}

// Second-order gust filter K (1 + b s)/(1 + a s)^2. The repeated pole makes
// exp(At) closed-form: A = -lam I + N with N nilpotent.
void tune_second_order(double a, double b, double K, double sigma, double dt,
                       Eigen::Matrix2d& Ad, Eigen::Vector2d& Bd, Eigen::RowVector2d& C) {
    const double lam = 1.0 / a;
    Eigen::Matrix2d A;
    A << 0.0, 1.0,
         -lam * lam, -2.0 * lam;
    const Eigen::Matrix2d N = A + lam * Eigen::Matrix2d::Identity();
    const double e = std::exp(-lam * dt);
    Ad = e * (Eigen::Matrix2d::Identity() + N * dt);
    // integral of exp(A tau) B over the step, B = (0,1)'
    const double I0 = (1.0 - e) / lam;
    const double I1 = (1.0 - e * (1.0 + lam * dt)) / (lam * lam);
    Bd << I1, I0 - lam * I1;
    C << K * lam * lam, K * lam * lam * b;
    const Eigen::Matrix2d P = discrete_stationary_cov(Ad, Bd);
    const double var_y = (C * P * C.transpose())(0);
    if (var_y > 0.0 && sigma > 0.0) C *= sigma / std::sqrt(var_y);
}

void retune(WindState::Discretization& d, const DrydenParams& p, double dt) {
    const double K_u = p.sigma_u * std::sqrt(2.0 * p.L_u / (kPi * p.u1));
    const double K_v = p.sigma_v * std::sqrt(p.L_v / (kPi * p.u1));
    const double K_w = p.sigma_w * std::sqrt(2.0 * p.L_w / (kPi * p.u1));
    tune_first_order(p.L_u / p.u1, K_u, p.sigma_u, dt, d.Adu, d.Bdu, d.Cu);
    tune_second_order(2.0 * p.L_v / p.u1, 2.0 * std::sqrt(3.0) * p.L_v / p.u1,
                      K_v, p.sigma_v, dt, d.Adv, d.Bdv, d.Cv);
    tune_second_order(2.0 * p.L_w / p.u1, 2.0 * std::sqrt(3.0) * p.L_w / p.u1,
                      K_w, p.sigma_w, dt, d.Adw, d.Bdw, d.Cw);
    d.key = p;
    d.dt = dt;
    d.valid = true;
}

}  // namespace

void dryden_step(WindState& wind, const DrydenParams& params, const Vec3& noise, double dt) {
    if (dt <= 0.0) throw ConfigError("dryden_step: dt must be positive");
    wind.active = true;
    if (!wind.disc.valid || wind.disc.dt != dt || !(wind.disc.key == params))
        retune(wind.disc, params, dt);
    const auto& d = wind.disc;
    wind.xu = d.Adu * wind.xu + d.Bdu * noise(0);
    wind.xv = d.Adv * wind.xv + d.Bdv * noise(1);
    wind.xw = d.Adw * wind.xw + d.Bdw * noise(2);
    wind.W(0) = d.Cu * wind.xu;
    wind.W(1) = d.Cv * wind.xv;
    wind.W(2) = d.Cw * wind.xw;
}

void wind_gradients(WindState& wind, double u1, const Mat3& body_to_inertial, double dt) {
    if (!wind.active) {
        wind.dW_dt.setZero();
        wind.grad_W.setZero();
        wind.grad_W_inertial.setZero();
        return;
    }
    wind.dW_dt = (wind.W - wind.W_prev) / dt;
    wind.W_prev = wind.W;

    const Vec3 dWdt_inertial = body_to_inertial * wind.dW_dt;
    Mat3 grad_inertial = Mat3::Zero();
    // frozen-field closure: streamwise gradient from the time derivative
    grad_inertial.col(0) = -dWdt_inertial / u1;
    wind.grad_W_inertial = grad_inertial;
    wind.grad_W = body_to_inertial.transpose() * grad_inertial * body_to_inertial;
}

Vec3 wind_angular_rates(const Mat3& grad_W_inertial, const Mat3& body_to_inertial) {
    const Mat3& G = grad_W_inertial;
    const Vec3 omega_inertial(0.5 * (G(2, 1) - G(1, 2)),
                              0.5 * (G(0, 2) - G(2, 0)),
                              0.5 * (G(1, 0) - G(0, 1)));
    return body_to_inertial.transpose() * omega_inertial;
}

std::pair<double, double> add_sensor_noise(double theta, double q,
                                           double sigma_theta, double sigma_q,
                                           std::mt19937_64& rng) {
    if (sigma_theta < 0.0 || sigma_q < 0.0)
        throw ConfigError("sensor noise sigmas must be non-negative");
    if (sigma_theta == 0.0 && sigma_q == 0.0) return {theta, q};
    std::normal_distribution<double> unit(0.0, 1.0);
    const double theta_noisy = theta + sigma_theta * unit(rng);
    const double q_noisy = q + sigma_q * unit(rng);
    return {theta_noisy, q_noisy};
}

}  // namespace tbwsim
