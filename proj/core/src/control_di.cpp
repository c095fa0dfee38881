#include "tbwsim/control_di.hpp"

#include <algorithm>
#include <cmath>

namespace tbwsim {

double di_outer(double h, double h_des, double hdot_des,
                double u, double v, double w, double phi, double k_h) {
    if (u < 1.0) throw ControllerFault("di_outer: forward speed below 1 m/s");
    const double a_h = u;
    const double b_h = v * std::sin(phi) + w * std::cos(phi);
    const double e_h = h - h_des;
    double arg = (hdot_des - k_h * e_h) / std::sqrt(a_h * a_h + b_h * b_h);
    arg = std::clamp(arg, -1.0, 1.0);
    return std::asin(arg) - std::atan2(b_h, a_h);
}

double pitch_command(double h, double h_des, double hdot_des,
                     double u, double v, double w, double phi,
                     double k_h, double alpha_ref) {
    if (u < 1.0) throw ControllerFault("pitch_command: forward speed below 1 m/s");
    const double b_h = v * std::sin(phi) + w * std::cos(phi);
    const double e_h = h - h_des;
    double arg = (hdot_des - k_h * e_h) / std::sqrt(u * u + b_h * b_h);
    arg = std::clamp(arg, -1.0, 1.0);
    // climb-rate inversion with the air-path term frozen at the reference
    // angle of attack: the instantaneous term would feed the short-period
    // motion straight back into the reference
    return std::asin(arg) + alpha_ref;
}

double di_middle(double theta, double theta_des, double thetadot_des,
                 double r, double phi, double k_theta) {
    if (std::abs(phi) >= deg2rad(89.0))
        throw ControllerFault("di_middle: bank angle at sec(phi) singularity");
    const double e_theta = theta - theta_des;
    return (thetadot_des - k_theta * e_theta + r * std::sin(phi)) / std::cos(phi);
}

double di_inner(double q, double q_des, double qdot_des, double p, double r,
                double M_A, double M_deltaE, double Ix, double Iy, double Iz,
                double k_q) {
    if (std::abs(M_deltaE) < 1e-6)
        throw ControllerFault("di_inner: vanishing elevator effectiveness");
    const double e_q = q - q_des;
    const double delta = (Iy * (qdot_des - k_q * e_q) + (Ix - Iz) * r * p - M_A) / M_deltaE;
    return clamp_elevator(delta);
}

DIController::DIController(const AeroModel& model, const DIGains& gains, double dt)
    : model_(model), gains_(gains), dt_(dt) {
    if (!(gains.k_h > 0.0 && gains.k_theta > 0.0 && gains.k_q > 0.0))
        throw ConfigError("DI gains must be strictly positive");
    if (dt <= 0.0) throw ConfigError("DIController: dt must be positive");
}

void DIController::reset() {
    has_prev_ = false;
    prev_theta_des_ = 0.0;
    prev_thetadot_des_ = 0.0;
    prev_alpha_ = 0.0;
}

double DIController::command(const DIInputs& in) {
    // feedforwards difference the smooth geometric reference; differencing
    // the corrective command would feed plant dynamics back through 1/dt^2
    const double thetadot_des = has_prev_ ? (in.theta_des_ref - prev_theta_des_) / dt_ : 0.0;
    const double qdot_des = has_prev_ ? (thetadot_des - prev_thetadot_des_) / dt_ : 0.0;

    const double q_des = di_middle(in.theta, in.theta_des, thetadot_des,
                                   in.r, in.phi, gains_.k_theta);
    const double alpha_dot = has_prev_ ? (in.alpha - prev_alpha_) / dt_ : 0.0;

    // model-based pitch moment, everything except the elevator term
    const double qbar = 0.5 * model_.rho * in.V_air * in.V_air;
    const double scale = model_.moment_scale(qbar);
    const double cm_free = model_.c_m0 + model_.c_m_alpha * in.alpha +
                           model_.c_m_alphadot * alpha_dot * model_.cbar / (2.0 * model_.v_ref) +
                           model_.c_m_u * in.u_air / model_.v_ref +
                           model_.c_m_q * in.q * model_.cbar / (2.0 * model_.v_ref);
    const double M_A = scale * cm_free;
    const double M_deltaE = scale * model_.c_m_deltaE;

    const double delta = di_inner(in.q, q_des, qdot_des, in.p, in.r,
                                  M_A, M_deltaE, model_.Ix, model_.Iy, model_.Iz,
                                  gains_.k_q);
    prev_theta_des_ = in.theta_des_ref;
    prev_thetadot_des_ = thetadot_des;
    prev_alpha_ = in.alpha;
    has_prev_ = true;
    return delta;
}

}  // namespace tbwsim
