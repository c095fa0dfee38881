#include "tbwsim/aero_model.hpp"

#include <fstream>

#include "tbwsim/config.hpp"

namespace tbwsim {

Mat3 AeroModel::inertia() const {
    Mat3 I;
    I << Ix, 0.0, Ixz,
         0.0, Iy, 0.0,
         Ixz, 0.0, Iz;
    return I;
}

double AeroModel::force_scale(double qbar) const {
    return force_scaling == ForceScaling::ChordScaled ? qbar * S * cbar : qbar * S;
}

double AeroModel::moment_scale(double qbar) const {
    return qbar * S * cbar;
}

AeroModel AeroModel::scaled_derivatives(double factor) const {
    AeroModel m = *this;
    for (double* d : {&m.c_D0, &m.c_L0, &m.c_m0,
                      &m.c_D_alpha, &m.c_L_alpha, &m.c_m_alpha,
                      &m.c_D_alphadot, &m.c_L_alphadot, &m.c_m_alphadot,
                      &m.c_D_u, &m.c_L_u, &m.c_m_u,
                      &m.c_D_q, &m.c_L_q, &m.c_m_q,
                      &m.c_D_deltaE, &m.c_L_deltaE, &m.c_m_deltaE}) {
        *d *= factor;
    }
    return m;
}

void AeroModel::validate() const {
    if (S <= 0 || cbar <= 0 || b <= 0 || mass <= 0)
        throw ConfigError("aero model geometry/mass must be positive");
    if (Ix <= 0 || Iy <= 0 || Iz <= 0)
        throw ConfigError("aero model inertia must be positive");
    if (Ixz * Ixz >= Ix * Iz)
        throw ConfigError("aero model inertia matrix is not positive definite");
    if (v_ref <= 0) throw ConfigError("aero model v_ref must be positive");
    if (rho <= 0) throw ConfigError("aero model rho must be positive");
    if (!(c_m_alpha < 0.0) || !(c_m_deltaE < 0.0))
        throw ConfigError("static-stability check failed: c_m_alpha and c_m_deltaE must be negative");
}

AeroModel AeroModel::chaka50() {
    AeroModel m;
    m.c_D0 = 0.0338;
    m.c_L0 = 0.3180;
    m.c_m0 = -0.06;
    m.c_D_alpha = 0.8930;
    m.c_L_alpha = 14.88;
    m.c_m_alpha = -11.84;
    m.c_D_u = 0.041;
    m.c_L_u = 0.081;
    m.c_m_u = -0.039;
    m.c_L_q = 12.53;
    m.c_m_q = -40.69;
    m.c_D_deltaE = 0.1570;
    m.c_L_deltaE = 0.78;
    m.c_m_deltaE = -5.98;
    // alpha-dot column and c_D_q are not tabulated for this airframe
    m.S = 43.42;
    m.cbar = 1.216;
    m.b = 28.0;
    m.mass = 18418.27;
    m.Ix = 378056.535;
    m.Iy = 4914073.496;
    m.Iz = 5670084.803;
    m.Ixz = 0.0;
    m.v_ref = 160.0;
    return m;
}

AeroModel AeroModel::chaka50_uncertain(TypoPolicy policy) {
    AeroModel m = chaka50();
    m.c_D0 = 0.0358;
    m.c_L0 = 0.3363;
    m.c_m0 = -0.061;
    m.c_D_alpha = 0.893;
    m.c_L_alpha = 14.52;
    m.c_m_alpha = -11.84;
    m.c_L_u = 0.076;
    m.c_m_u = -0.041;
    m.c_L_q = 12.56;
    m.c_m_q = -37.27;
    m.c_L_deltaE = 0.74;
    m.c_m_deltaE = -5.93;
    m.c_D_deltaE = 0.1483;  // printed without its decimal point
    // printed as 0.373, an order of magnitude off the nominal 0.041
    m.c_D_u = policy == TypoPolicy::Corrected ? 0.0373 : 0.373;
    return m;
}

namespace {

struct FieldDef {
    const char* key;
    double AeroModel::*member;
};

// Keys double as documentation: angles per radian, SI units throughout.
constexpr FieldDef kFields[] = {
    {"c_D0", &AeroModel::c_D0},
    {"c_L0", &AeroModel::c_L0},
    {"c_m0", &AeroModel::c_m0},
    {"c_D_alpha", &AeroModel::c_D_alpha},
    {"c_L_alpha", &AeroModel::c_L_alpha},
    {"c_m_alpha", &AeroModel::c_m_alpha},
    {"c_D_alphadot", &AeroModel::c_D_alphadot},
    {"c_L_alphadot", &AeroModel::c_L_alphadot},
    {"c_m_alphadot", &AeroModel::c_m_alphadot},
    {"c_D_u", &AeroModel::c_D_u},
    {"c_L_u", &AeroModel::c_L_u},
    {"c_m_u", &AeroModel::c_m_u},
    {"c_D_q", &AeroModel::c_D_q},
    {"c_L_q", &AeroModel::c_L_q},
    {"c_m_q", &AeroModel::c_m_q},
    {"c_D_deltaE", &AeroModel::c_D_deltaE},
    {"c_L_deltaE", &AeroModel::c_L_deltaE},
    {"c_m_deltaE", &AeroModel::c_m_deltaE},
    {"wing_area_m2", &AeroModel::S},
    {"mean_chord_m", &AeroModel::cbar},
    {"span_m", &AeroModel::b},
    {"mass_kg", &AeroModel::mass},
    {"Ixx_kgm2", &AeroModel::Ix},
    {"Iyy_kgm2", &AeroModel::Iy},
    {"Izz_kgm2", &AeroModel::Iz},
    {"Ixz_kgm2", &AeroModel::Ixz},
    {"v_ref_mps", &AeroModel::v_ref},
    {"rho_kgm3", &AeroModel::rho},
    {"gravity_mps2", &AeroModel::g},
};

}  // namespace

AeroModel load_aero_model(const std::string& path) {
    const KeyValueFile cfg = KeyValueFile::load(path);
    AeroModel m = AeroModel::chaka50();
    for (const auto& f : kFields) {
        m.*(f.member) = cfg.get_double(f.key, m.*(f.member));
    }
    const std::string scaling = cfg.get_string("force_scaling", "conventional");
    if (scaling == "conventional") {
        m.force_scaling = ForceScaling::Conventional;
    } else if (scaling == "chord_scaled") {
        m.force_scaling = ForceScaling::ChordScaled;
    } else {
        throw ConfigError("force_scaling must be 'conventional' or 'chord_scaled'");
    }
    cfg.reject_unknown();
    m.validate();
    return m;
}

void save_aero_model(const AeroModel& m, const std::string& path) {
    KeyValueFile cfg;
    for (const auto& f : kFields) cfg.set_double(f.key, m.*(f.member));
    cfg.set("force_scaling",
            m.force_scaling == ForceScaling::ChordScaled ? "chord_scaled" : "conventional");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write aero model file: " + path);
    out << "# derivatives per radian; geometry and mass in SI units\n";
    out << cfg.serialize();
}

}  // namespace tbwsim
