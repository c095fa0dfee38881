#include "tbwsim/flight_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace tbwsim {

namespace {

constexpr double kMinAirspeed = 1.0;             // m/s, guard for the aero model
const double kThetaLimit = deg2rad(89.0);        // Euler kinematics singularity guard

std::string describe(const AircraftState& s) {
    std::ostringstream os;
    os << "t=" << s.t << " u=" << s.u << " w=" << s.w << " q=" << s.q
       << " theta=" << s.theta << " h=" << s.h;
    return os.str();
}

}  // namespace

Mat3 dcm_body_to_inertial(double phi, double theta, double psi) {
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    const double cth = std::cos(theta), sth = std::sin(theta);
    const double cpsi = std::cos(psi), spsi = std::sin(psi);
    Mat3 T;
    T << cpsi * cth, cpsi * sth * sphi - spsi * cphi, cpsi * sth * cphi + spsi * sphi,
         spsi * cth, spsi * sth * sphi + cpsi * cphi, spsi * sth * cphi - cpsi * sphi,
         -sth,       cth * sphi,                      cth * cphi;
    return T;
}

Vec3 gravity_body(double theta, double phi, double g) {
    return Vec3(-g * std::sin(theta),
                g * std::cos(theta) * std::sin(phi),
                g * std::cos(theta) * std::cos(phi));
}

double angle_of_attack(const AircraftState& s, const WindState& wind) {
    const double u_air = s.u - wind.W(0);
    const double w_air = s.w - wind.W(2);
    return std::atan2(w_air, u_air);
}

double airspeed(const AircraftState& s, const WindState& wind) {
    const Vec3 v_air(s.u - wind.W(0), s.v - wind.W(1), s.w - wind.W(2));
    return v_air.norm();
}

AeroForcesMoments aero_forces_moments(const AircraftState& s, const ControlInputs& in,
                                      const AeroModel& m, const WindState& wind,
                                      double alpha_dot) {
    const double V = airspeed(s, wind);
    if (V <= kMinAirspeed)
        throw SimulationDiverged("airspeed below 1 m/s guard: " + describe(s));

    const double u_air = s.u - wind.W(0);
    const double q_air = s.q - wind.omega_w(1);
    const double alpha = angle_of_attack(s, wind);
    const double qbar = 0.5 * m.rho * V * V;

    // nondimensional inputs: [1, alpha, alpha_dot*c/2V1, u/V1, q*c/2V1, dE]
    const double n_alphadot = alpha_dot * m.cbar / (2.0 * m.v_ref);
    const double n_u = u_air / m.v_ref;
    const double n_q = q_air * m.cbar / (2.0 * m.v_ref);
    const double dE = in.delta_E;

    const double cL = m.c_L0 + m.c_L_alpha * alpha + m.c_L_alphadot * n_alphadot +
                      m.c_L_u * n_u + m.c_L_q * n_q + m.c_L_deltaE * dE;
    // drag uses the magnitudes of alpha and elevator deflection
    const double cD = m.c_D0 + m.c_D_alpha * std::abs(alpha) + m.c_D_alphadot * n_alphadot +
                      m.c_D_u * n_u + m.c_D_q * n_q + m.c_D_deltaE * std::abs(dE);
    const double cm = m.c_m0 + m.c_m_alpha * alpha + m.c_m_alphadot * n_alphadot +
                      m.c_m_u * n_u + m.c_m_q * n_q + m.c_m_deltaE * dE;

    const double lift = m.force_scale(qbar) * cL;
    const double drag = m.force_scale(qbar) * cD;
    const double pitch_moment = m.moment_scale(qbar) * cm;

    // stability to body axes: rotation by alpha about y
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    AeroForcesMoments out;
    out.force = Vec3(-drag * ca + lift * sa, 0.0, -drag * sa - lift * ca);
    out.moment = Vec3(0.0, pitch_moment, 0.0);
    if (!out.force.allFinite() || !out.moment.allFinite())
        throw SimulationDiverged("non-finite aero forces: " + describe(s));
    return out;
}

StateRates state_derivative(const AircraftState& s, const ControlInputs& in,
                            const AeroModel& m, const WindState& wind,
                            double alpha_dot) {
    if (std::abs(s.theta) > kThetaLimit)
        throw SimulationDiverged("pitch within 1 deg of Euler singularity: " + describe(s));
    if (!s.finite())
        throw SimulationDiverged("non-finite state: " + describe(s));

    const AeroForcesMoments aero = aero_forces_moments(s, in, m, wind, alpha_dot);
    const Vec3 g_body = gravity_body(s.theta, s.phi, m.g);
    const Vec3 v(s.u, s.v, s.w);
    const Vec3 omega(s.p, s.q, s.r);
    const Vec3 thrust(in.thrust, 0.0, 0.0);

    const Vec3 accel = (aero.force + thrust) / m.mass + g_body - omega.cross(v) - wind.dW_dt;

    const Mat3 I = m.inertia();
    const Vec3 omega_dot = I.ldlt().solve(aero.moment - omega.cross(I * omega));

    // Euler kinematics on air-mass-corrected rates
    const Vec3 omega_air = omega - wind.omega_w;
    const double cphi = std::cos(s.phi), sphi = std::sin(s.phi);
    const double tth = std::tan(s.theta), cth = std::cos(s.theta);

    StateRates d;
    d.du = accel(0);
    d.dv = accel(1);
    d.dw = accel(2);
    d.dp = omega_dot(0);
    d.dq = omega_dot(1);
    d.dr = omega_dot(2);
    d.dphi = omega_air(0) + sphi * tth * omega_air(1) + cphi * tth * omega_air(2);
    d.dtheta = cphi * omega_air(1) - sphi * omega_air(2);
    d.dpsi = (sphi * omega_air(1) + cphi * omega_air(2)) / cth;

    const Vec3 pos_rate = dcm_body_to_inertial(s.phi, s.theta, s.psi) * v;
    d.dx = pos_rate(0);
    d.dy = pos_rate(1);
    d.dh = -pos_rate(2);  // inertial z is down; altitude is up
    return d;
}

namespace {

using StateVec = Eigen::Matrix<double, 12, 1>;

StateVec pack(const AircraftState& s) {
    StateVec v;
    v << s.u, s.v, s.w, s.p, s.q, s.r, s.phi, s.theta, s.psi, s.x, s.y, s.h;
    return v;
}

AircraftState unpack(const StateVec& v, double t) {
    AircraftState s;
    s.u = v(0); s.v = v(1); s.w = v(2);
    s.p = v(3); s.q = v(4); s.r = v(5);
    s.phi = v(6); s.theta = v(7); s.psi = v(8);
    s.x = v(9); s.y = v(10); s.h = v(11);
    s.t = t;
    return s;
}

StateVec pack(const StateRates& d) {
    StateVec v;
    v << d.du, d.dv, d.dw, d.dp, d.dq, d.dr, d.dphi, d.dtheta, d.dpsi, d.dx, d.dy, d.dh;
    return v;
}

}  // namespace

AircraftState integrate_step(const AircraftState& s, const ControlInputs& in,
                             const AeroModel& m, const WindState& wind,
                             double dt, double alpha_dot) {
    if (dt <= 0.0) throw ConfigError("integrate_step: dt must be positive");

    const StateVec y0 = pack(s);
    const StateVec k1 = pack(state_derivative(s, in, m, wind, alpha_dot));
    const StateVec k2 = pack(state_derivative(unpack(y0 + 0.5 * dt * k1, s.t + 0.5 * dt),
                                              in, m, wind, alpha_dot));
    const StateVec k3 = pack(state_derivative(unpack(y0 + 0.5 * dt * k2, s.t + 0.5 * dt),
                                              in, m, wind, alpha_dot));
    const StateVec k4 = pack(state_derivative(unpack(y0 + dt * k3, s.t + dt),
                                              in, m, wind, alpha_dot));
    AircraftState out = unpack(y0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), s.t + dt);
    if (!out.finite())
        throw SimulationDiverged("non-finite state after step: " + describe(out));
    return out;
}

AircraftState trim_state(const TrimPoint& tp) {
    AircraftState s;
    s.u = tp.V * std::cos(tp.alpha);
    s.w = tp.V * std::sin(tp.alpha);
    s.theta = tp.alpha + tp.gamma;
    s.h = tp.h;
    return s;
}

namespace {

Vec3 trim_residual(const AeroModel& m, double V, double h, double gamma,
                   double alpha, double delta_E, double thrust) {
    TrimPoint tp{delta_E, thrust, alpha, V, h, gamma};
    const AircraftState s = trim_state(tp);
    const ControlInputs in{delta_E, thrust};
    const WindState still;
    const StateRates d = state_derivative(s, in, m, still, 0.0);
    return Vec3(d.du, d.dw, d.dq);
}

}  // namespace

TrimPoint solve_trim(const AeroModel& m, double V, double h, double gamma) {
    if (V < 100.0 || V > 250.0)
        throw TrimFailure("trim airspeed outside [100, 250] m/s");
    m.validate();

    const double qbar = 0.5 * m.rho * V * V;
    Eigen::Vector3d x(0.0, 0.0, m.force_scale(qbar) * m.c_D0);  // (alpha, dE, thrust)
    const Eigen::Vector3d fd_step(1e-7, 1e-7, 1.0);
    constexpr double kTol = 1e-9;

    Vec3 res = trim_residual(m, V, h, gamma, x(0), x(1), x(2));
    for (int iter = 0; iter < 100; ++iter) {
        if (res.lpNorm<Eigen::Infinity>() < kTol)
            return TrimPoint{x(1), x(2), x(0), V, h, gamma};

        Mat3 J;
        for (int j = 0; j < 3; ++j) {
            Eigen::Vector3d xp = x, xm = x;
            xp(j) += fd_step(j);
            xm(j) -= fd_step(j);
            const Vec3 rp = trim_residual(m, V, h, gamma, xp(0), xp(1), xp(2));
            const Vec3 rm = trim_residual(m, V, h, gamma, xm(0), xm(1), xm(2));
            J.col(j) = (rp - rm) / (2.0 * fd_step(j));
        }
        const Eigen::Vector3d delta = J.fullPivLu().solve(-res);

        // halve the step until the residual actually shrinks
        double scale = 1.0;
        Vec3 next = res;
        for (int cut = 0; cut < 25; ++cut) {
            const Eigen::Vector3d cand = x + scale * delta;
            next = trim_residual(m, V, h, gamma, cand(0), cand(1), cand(2));
            if (next.norm() < res.norm()) {
                x = cand;
                break;
            }
            scale *= 0.5;
            if (cut == 24) x += scale * delta * 2.0;  // accept the smallest step
        }
        res = next;
    }
    std::ostringstream os;
    os << "trim did not converge within 100 iterations, residual " << res.transpose();
    throw TrimFailure(os.str());
}

LongitudinalModes linearize_longitudinal(const AeroModel& m, const TrimPoint& tp,
                                         double step) {
    const AircraftState base = trim_state(tp);
    const ControlInputs in{tp.delta_E, tp.thrust};
    const WindState still;

    auto rates4 = [&](const AircraftState& s) {
        const StateRates d = state_derivative(s, in, m, still, 0.0);
        return Eigen::Vector4d(d.du, d.dw, d.dq, d.dtheta);
    };
    auto perturb = [&](int idx, double eps) {
        AircraftState s = base;
        switch (idx) {
            case 0: s.u += eps; break;
            case 1: s.w += eps; break;
            case 2: s.q += eps; break;
            case 3: s.theta += eps; break;
        }
        return s;
    };

    LongitudinalModes out;
    for (int j = 0; j < 4; ++j) {
        const Eigen::Vector4d fp = rates4(perturb(j, step));
        const Eigen::Vector4d fm = rates4(perturb(j, -step));
        out.A.col(j) = (fp - fm) / (2.0 * step);
    }

    const Eigen::EigenSolver<Eigen::Matrix4d> solver(out.A);
    std::array<std::complex<double>, 4> ev;
    for (int i = 0; i < 4; ++i) ev[i] = solver.eigenvalues()(i);

    // conjugates adjacent, |Im| descending, +Im first within a pair
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        const double ia = std::abs(a.imag()), ib = std::abs(b.imag());
        if (ia != ib) return ia > ib;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    out.eigenvalues = ev;

    // group into two mode pairs: conjugates belong together, leftover real
    // roots pair among themselves by magnitude
    constexpr double kPairTol = 1e-9;
    std::vector<std::complex<double>> oscillatory, real_roots;
    for (const auto& lambda : ev) {
        (std::abs(lambda.imag()) > kPairTol ? oscillatory : real_roots).push_back(lambda);
    }
    std::sort(real_roots.begin(), real_roots.end(), [](const auto& a, const auto& b) {
        return std::abs(a) > std::abs(b);
    });
    std::vector<std::array<std::complex<double>, 2>> pairs;
    for (size_t i = 0; i + 1 < oscillatory.size(); i += 2)
        pairs.push_back({oscillatory[i], oscillatory[i + 1]});
    for (size_t i = 0; i + 1 < real_roots.size(); i += 2)
        pairs.push_back({real_roots[i], real_roots[i + 1]});

    // the faster pair (larger natural frequency) is the short period
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        return std::max(std::abs(a[0]), std::abs(a[1])) >
               std::max(std::abs(b[0]), std::abs(b[1]));
    });
    out.short_period_pair = pairs[0];
    out.phugoid_pair = pairs[1];

    auto representative = [](const std::array<std::complex<double>, 2>& pair) {
        return pair[0].imag() >= 0.0 ? pair[0] : pair[1];
    };
    constexpr double kImTol = 1e-9;
    out.short_period = representative(out.short_period_pair);
    out.phugoid = representative(out.phugoid_pair);
    out.short_period_oscillatory = std::abs(out.short_period.imag()) > kImTol;
    out.phugoid_oscillatory = std::abs(out.phugoid.imag()) > kImTol;
    return out;
}

}  // namespace tbwsim
