#pragma once

#include "tbwsim/aero_model.hpp"
#include "tbwsim/types.hpp"

namespace tbwsim {

// First-order error-dynamics gains for the three inversion loops. All must
// be strictly positive.
struct DIGains {
    double k_h = 1.3;      // altitude loop, 1/s
    double k_theta = 5.0;  // pitch loop, 1/s
    double k_q = 10.0;     // pitch-rate loop, 1/s
};

// Outer loop: altitude error to desired pitch. a_h = u, b_h = v sin(phi) +
// w cos(phi); the arcsin argument is clamped to [-1, 1]. Throws
// ControllerFault when u falls below 1 m/s.
double di_outer(double h, double h_des, double hdot_des,
                double u, double v, double w, double phi, double k_h);

// Altitude loop used as the shared pitch-command law along the landing
// profile: same climb-rate inversion, with the air-path correction frozen at
// the reference angle of attack so the command stays free of short-period
// feedthrough.
double pitch_command(double h, double h_des, double hdot_des,
                     double u, double v, double w, double phi,
                     double k_h, double alpha_ref);

// Middle loop: pitch error to desired pitch rate. Throws ControllerFault
// within one degree of the sec(phi) singularity.
double di_middle(double theta, double theta_des, double thetadot_des,
                 double r, double phi, double k_theta);

// Inner loop: pitch-rate error to elevator. M_A is the aerodynamic pitch
// moment excluding the elevator contribution, M_deltaE the moment per radian
// of deflection; the output is saturated to +-0.25 rad. Throws
// ControllerFault on vanishing control effectiveness.
double di_inner(double q, double q_des, double qdot_des, double p, double r,
                double M_A, double M_deltaE, double Ix, double Iy, double Iz,
                double k_q);

// Everything the inner loops consume in one step. theta and q come from the
// measurement path (noisy in the noise scenario); theta_des is the commanded
// pitch issued by the altitude loop; the rest is taken from the simulation
// state and the air data.
struct DIInputs {
    double theta_des = 0.0;      // corrective command tracked by the pitch loop
    double theta_des_ref = 0.0;  // smooth geometric reference, differenced for feedforwards
    double theta = 0.0, q = 0.0;
    double u = 0.0, v = 0.0, w = 0.0;
    double phi = 0.0, p = 0.0, r = 0.0;
    double V_air = 0.0;   // m/s
    double alpha = 0.0;   // rad
    double u_air = 0.0;   // m/s, body-x air-relative velocity
};

// Pitch and pitch-rate inversion loops under a commanded pitch reference.
// Feedforwards come from backward differences of the smooth reference, not
// of the corrective loop outputs. Holds the differencing memory; one
// instance per simulation.
class DIController {
public:
    DIController(const AeroModel& model, const DIGains& gains, double dt);

    void reset();
    double command(const DIInputs& in);  // elevator deflection, rad

private:
    AeroModel model_;
    DIGains gains_;
    double dt_;
    bool has_prev_ = false;
    double prev_theta_des_ = 0.0;
    double prev_thetadot_des_ = 0.0;
    double prev_alpha_ = 0.0;
};

}  // namespace tbwsim
