#pragma once

#include <string>

#include "tbwsim/types.hpp"

namespace tbwsim {

// Scaling applied to the lift/drag rows of the derivative model. The pitch
// moment is always q_bar*S*cbar. Conventional keeps forces at q_bar*S;
// ChordScaled multiplies the force rows by cbar as well.
enum class ForceScaling { Conventional, ChordScaled };

// How to read the two misprinted entries of the uncertainty dataset
// (c_D_u 0.373 vs 0.0373, c_D_deltaE "01483").
enum class TypoPolicy { Corrected, Literal };

// Longitudinal derivative model (per radian) plus geometry, mass and inertia
// of the airframe. Lateral derivatives are zero: lateral states are simulated
// but unforced.
struct AeroModel {
    // column 0: bias
    double c_D0 = 0.0, c_L0 = 0.0, c_m0 = 0.0;
    // alpha column
    double c_D_alpha = 0.0, c_L_alpha = 0.0, c_m_alpha = 0.0;
    // alpha-dot column (not tabulated for this airframe; configurable)
    double c_D_alphadot = 0.0, c_L_alphadot = 0.0, c_m_alphadot = 0.0;
    // u/V_ref column
    double c_D_u = 0.0, c_L_u = 0.0, c_m_u = 0.0;
    // q*cbar/2V_ref column
    double c_D_q = 0.0, c_L_q = 0.0, c_m_q = 0.0;
    // elevator column
    double c_D_deltaE = 0.0, c_L_deltaE = 0.0, c_m_deltaE = 0.0;

    double S = 0.0;      // wing area, m^2
    double cbar = 0.0;   // mean aerodynamic chord, m
    double b = 0.0;      // span, m
    double mass = 0.0;   // kg
    double Ix = 0.0, Iy = 0.0, Iz = 0.0, Ixz = 0.0;  // kg*m^2
    double v_ref = 0.0;  // reference trim airspeed V_P1, m/s
    double rho = kRhoSeaLevel;  // held constant; landing happens below 100 m
    double g = kGravity;

    ForceScaling force_scaling = ForceScaling::Conventional;

    Mat3 inertia() const;
    double force_scale(double qbar) const;   // q_bar*S or q_bar*S*cbar
    double moment_scale(double qbar) const;  // q_bar*S*cbar

    // Multiplies all tabulated derivatives by `factor` (robustness sweeps).
    AeroModel scaled_derivatives(double factor) const;

    // Throws ConfigError on broken geometry/inertia or a statically unstable
    // dataset (c_m_alpha and c_m_deltaE must be negative).
    void validate() const;

    // Nominal Chaka-50 dataset.
    static AeroModel chaka50();
    // The +-10% perturbed dataset used for the model-uncertainty scenario.
    static AeroModel chaka50_uncertain(TypoPolicy policy = TypoPolicy::Corrected);
};

// Key=value model files; unknown keys are rejected. Values default to the
// nominal dataset, so a file only needs the fields it overrides.
AeroModel load_aero_model(const std::string& path);
void save_aero_model(const AeroModel& m, const std::string& path);

}  // namespace tbwsim
