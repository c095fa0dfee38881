#include "tbwsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tbwsim/config.hpp"

#ifndef TBWSIM_VERSION
#define TBWSIM_VERSION "dev"
#endif

namespace tbwsim {

std::string to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Ideal: return "ideal";
        case ScenarioKind::NoiseDisturbance: return "noise_disturbance";
        case ScenarioKind::ActuatorFault: return "actuator_fault";
        case ScenarioKind::ModelUncertainty: return "model_uncertainty";
    }
    return "ideal";
}

std::string to_string(ControllerKind c) {
    switch (c) {
        case ControllerKind::FQL: return "fql";
        case ControllerKind::QL: return "ql";
        case ControllerKind::DI: return "di";
    }
    return "fql";
}

ScenarioKind scenario_from_string(const std::string& s) {
    if (s == "ideal") return ScenarioKind::Ideal;
    if (s == "noise_disturbance") return ScenarioKind::NoiseDisturbance;
    if (s == "actuator_fault") return ScenarioKind::ActuatorFault;
    if (s == "model_uncertainty") return ScenarioKind::ModelUncertainty;
    throw ConfigError("unknown scenario: " + s);
}

ControllerKind controller_from_string(const std::string& s) {
    if (s == "fql") return ControllerKind::FQL;
    if (s == "ql") return ControllerKind::QL;
    if (s == "di") return ControllerKind::DI;
    throw ConfigError("unknown controller: " + s);
}

StateGrid RLParams::make_grid() const {
    return StateGrid::standard(sigma_theta, sigma_thetadot, insert_zero_rate);
}

AeroModel ScenarioConfig::plant_model() const {
    AeroModel plant = nominal_model;
    if (kind == ScenarioKind::ModelUncertainty) {
        plant = AeroModel::chaka50_uncertain(typo_policy);
        plant.force_scaling = nominal_model.force_scaling;
        plant.rho = nominal_model.rho;
    }
    if (derivative_scale != 1.0) plant = plant.scaled_derivatives(derivative_scale);
    plant.validate();
    return plant;
}

SimOptions ScenarioConfig::sim_options() const {
    SimOptions opt;
    opt.dt = dt;
    opt.seed = seed;
    opt.turbulence = kind == ScenarioKind::NoiseDisturbance;
    opt.u20 = u20;
    opt.wind_accel_coupling = wind_accel_coupling;
    if (kind == ScenarioKind::NoiseDisturbance) {
        opt.sensor_sigma_theta = sensor_sigma_theta;
        opt.sensor_sigma_q = sensor_sigma_q;
    }
    if (kind == ScenarioKind::ActuatorFault) opt.faults = faults;
    return opt;
}

namespace {

std::string serialize_faults(const FaultSchedule& f) {
    std::string out;
    for (const auto& seg : f.segments) {
        if (!out.empty()) out += ',';
        out += format_double(seg.t_start) + ':' + format_double(seg.gain) + ':' +
               format_double(rad2deg(seg.bias));
    }
    return out;
}

FaultSchedule parse_faults(const std::string& text) {
    FaultSchedule f;
    if (text.empty() || text == "none") return f;
    std::istringstream in(text);
    std::string triple;
    while (std::getline(in, triple, ',')) {
        std::istringstream ts(triple);
        std::string t, gain, bias;
        if (!std::getline(ts, t, ':') || !std::getline(ts, gain, ':') || !std::getline(ts, bias))
            throw ConfigError("fault schedule entries must be t:gain:bias_deg, got " + triple);
        f.segments.push_back({parse_double(t, "fault t_start"),
                              parse_double(gain, "fault gain"),
                              deg2rad(parse_double(bias, "fault bias_deg"))});
    }
    f.validate();
    return f;
}

}  // namespace

std::string ScenarioConfig::canonical_text() const {
    KeyValueFile cfg;
    cfg.set("scenario", to_string(kind));
    cfg.set("controller", to_string(controller));
    cfg.set("seed", std::to_string(seed));
    cfg.set_double("duration_s", duration);
    cfg.set_double("V0_mps", V0);
    cfg.set_double("h0_m", h0);
    cfg.set_double("dt_s", dt);
    cfg.set("typo_policy", typo_policy == TypoPolicy::Corrected ? "corrected" : "literal");
    cfg.set_double("derivative_scale", derivative_scale);
    cfg.set_double("V_stall_mps", V_stall);
    cfg.set_double("approach_angle_deg", theta_a_deg);
    cfg.set_double("screen_height_m", screen_height_m);
    cfg.set_double("u20_mps", u20);
    cfg.set_double("sensor_sigma_theta_deg", rad2deg(sensor_sigma_theta));
    cfg.set_double("sensor_sigma_q_degps", rad2deg(sensor_sigma_q));
    cfg.set("wind_accel_coupling", wind_accel_coupling ? "true" : "false");
    cfg.set("faults", serialize_faults(faults));
    cfg.set_double("di_k_h", di_gains.k_h);
    cfg.set_double("di_k_theta", di_gains.k_theta);
    cfg.set_double("di_k_q", di_gains.k_q);
    cfg.set_double("sigma_theta_rad", rl.sigma_theta);
    cfg.set_double("sigma_thetadot_radps", rl.sigma_thetadot);
    cfg.set("insert_zero_rate", rl.insert_zero_rate ? "true" : "false");
    cfg.set("window_radius", std::to_string(rl.window_radius));
    cfg.set("reward_e_unit", rl.reward.e_thresholds_in_degrees ? "deg" : "rad");
    cfg.set("reward_q_unit", rl.reward.q_thresholds_in_degrees ? "deg" : "rad");
    cfg.set("reward_quadratic_unit", rl.reward.quadratic_in_degrees ? "deg" : "rad");
    cfg.set_double("theta_des_train_deg", rad2deg(rl.theta_des_train));
    cfg.set_double("theta0_min_deg", rad2deg(rl.theta0_min));
    cfg.set_double("theta0_max_deg", rad2deg(rl.theta0_max));
    cfg.set("episodes", std::to_string(learning.episodes));
    cfg.set_double("episode_seconds", learning.episode_seconds);
    cfg.set_double("gamma", learning.gamma);
    cfg.set_double("epsilon0", learning.epsilon0);
    cfg.set_double("epsilon_decay", learning.epsilon_decay);
    cfg.set_double("epsilon_floor", learning.epsilon_floor);
    cfg.set_double("alpha0", learning.alpha0);
    cfg.set_double("alpha_decay", learning.alpha_decay);
    cfg.set_double("alpha_floor", learning.alpha_floor);
    cfg.set("decay_per", learning.decay_per_episode ? "episode" : "step");
    // plant dataset
    cfg.set_double("c_L_alpha", nominal_model.c_L_alpha);
    cfg.set_double("c_m_alpha", nominal_model.c_m_alpha);
    cfg.set_double("c_m_deltaE", nominal_model.c_m_deltaE);
    cfg.set_double("mass_kg", nominal_model.mass);
    cfg.set_double("rho_kgm3", nominal_model.rho);
    cfg.set("force_scaling", nominal_model.force_scaling == ForceScaling::ChordScaled
                                 ? "chord_scaled" : "conventional");
    return cfg.serialize();
}

ScenarioConfig load_scenario_config(const std::string& path, ScenarioConfig base) {
    const KeyValueFile cfg = KeyValueFile::load(path);
    ScenarioConfig out = base;
    if (auto v = cfg.get("scenario")) out.kind = scenario_from_string(*v);
    if (auto v = cfg.get("controller")) out.controller = controller_from_string(*v);
    out.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<int>(out.seed)));
    out.duration = cfg.get_double("duration_s", out.duration);
    out.V0 = cfg.get_double("V0_mps", out.V0);
    out.h0 = cfg.get_double("h0_m", out.h0);
    out.dt = cfg.get_double("dt_s", out.dt);
    if (auto v = cfg.get("aircraft_file")) out.nominal_model = load_aero_model(*v);
    if (auto v = cfg.get("typo_policy")) {
        if (*v == "corrected") out.typo_policy = TypoPolicy::Corrected;
        else if (*v == "literal") out.typo_policy = TypoPolicy::Literal;
        else throw ConfigError("typo_policy must be corrected|literal");
    }
    out.derivative_scale = cfg.get_double("derivative_scale", out.derivative_scale);
    out.V_stall = cfg.get_double("V_stall_mps", out.V_stall);
    out.theta_a_deg = cfg.get_double("approach_angle_deg", out.theta_a_deg);
    double screen = cfg.get_double("screen_height", out.screen_height_m);
    const std::string screen_unit = cfg.get_string("screen_height_unit", "m");
    if (screen_unit == "ft") screen *= kFtToMeter;
    else if (screen_unit != "m") throw ConfigError("screen_height_unit must be m|ft");
    out.screen_height_m = screen;
    out.u20 = cfg.get_double("u20_mps", out.u20);
    out.sensor_sigma_theta = deg2rad(cfg.get_double("sensor_sigma_theta_deg",
                                                    rad2deg(out.sensor_sigma_theta)));
    out.sensor_sigma_q = deg2rad(cfg.get_double("sensor_sigma_q_degps",
                                                rad2deg(out.sensor_sigma_q)));
    out.wind_accel_coupling = cfg.get_bool("wind_accel_coupling", out.wind_accel_coupling);
    if (auto v = cfg.get("faults")) {
        if (*v == "equation") out.faults = FaultSchedule::standard_fault();
        else if (*v == "prose") out.faults = FaultSchedule::prose_variant();
        else out.faults = parse_faults(*v);
    }
    out.di_gains.k_h = cfg.get_double("di_k_h", out.di_gains.k_h);
    out.di_gains.k_theta = cfg.get_double("di_k_theta", out.di_gains.k_theta);
    out.di_gains.k_q = cfg.get_double("di_k_q", out.di_gains.k_q);
    out.rl.sigma_theta = cfg.get_double("sigma_theta_rad", out.rl.sigma_theta);
    out.rl.sigma_thetadot = cfg.get_double("sigma_thetadot_radps", out.rl.sigma_thetadot);
    out.rl.insert_zero_rate = cfg.get_bool("insert_zero_rate", out.rl.insert_zero_rate);
    out.rl.window_radius = cfg.get_int("window_radius", out.rl.window_radius);
    auto unit_flag = [&cfg](const char* key, bool current) {
        const std::string v = cfg.get_string(key, current ? "deg" : "rad");
        if (v == "deg") return true;
        if (v == "rad") return false;
        throw ConfigError(std::string(key) + " must be deg|rad");
    };
    out.rl.reward.e_thresholds_in_degrees =
        unit_flag("reward_e_unit", out.rl.reward.e_thresholds_in_degrees);
    out.rl.reward.q_thresholds_in_degrees =
        unit_flag("reward_q_unit", out.rl.reward.q_thresholds_in_degrees);
    out.rl.reward.quadratic_in_degrees =
        unit_flag("reward_quadratic_unit", out.rl.reward.quadratic_in_degrees);
    out.rl.theta_des_train = deg2rad(cfg.get_double("theta_des_train_deg",
                                                    rad2deg(out.rl.theta_des_train)));
    out.rl.theta0_min = deg2rad(cfg.get_double("theta0_min_deg", rad2deg(out.rl.theta0_min)));
    out.rl.theta0_max = deg2rad(cfg.get_double("theta0_max_deg", rad2deg(out.rl.theta0_max)));
    out.learning.episodes = cfg.get_int("episodes", out.learning.episodes);
    out.learning.episode_seconds = cfg.get_double("episode_seconds", out.learning.episode_seconds);
    out.learning.gamma = cfg.get_double("gamma", out.learning.gamma);
    out.learning.epsilon0 = cfg.get_double("epsilon0", out.learning.epsilon0);
    out.learning.epsilon_decay = cfg.get_double("epsilon_decay", out.learning.epsilon_decay);
    out.learning.epsilon_floor = cfg.get_double("epsilon_floor", out.learning.epsilon_floor);
    out.learning.alpha0 = cfg.get_double("alpha0", out.learning.alpha0);
    out.learning.alpha_decay = cfg.get_double("alpha_decay", out.learning.alpha_decay);
    out.learning.alpha_floor = cfg.get_double("alpha_floor", out.learning.alpha_floor);
    const std::string decay_per = cfg.get_string("decay_per",
        out.learning.decay_per_episode ? "episode" : "step");
    if (decay_per == "episode") out.learning.decay_per_episode = true;
    else if (decay_per == "step") out.learning.decay_per_episode = false;
    else throw ConfigError("decay_per must be episode|step");
    cfg.reject_unknown();
    out.learning.validate();
    return out;
}

TrainEnv train_env(const ScenarioConfig& cfg) {
    TrainEnv env;
    env.model = cfg.nominal_model;
    env.dt = cfg.dt;
    env.V0 = cfg.V0;
    env.h0 = cfg.h0;
    env.rl = cfg.rl;
    return env;
}

TrainResult train(ControllerKind method, const LearningSchedule& schedule,
                  std::uint64_t seed, const TrainEnv& env) {
    if (method == ControllerKind::DI)
        throw ConfigError("train: method must be fql or ql");
    schedule.validate();

    const StateGrid grid = env.rl.make_grid();
    const ActionSet actions = ActionSet::standard();
    TrainResult result;
    result.table = QTable::zeros(grid, actions);
    QTable& Q = result.table;

    SimOptions opt;
    opt.dt = env.dt;
    opt.seed = seed;
    Simulator sim(env.model, opt);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> random_action(0, actions.size() - 1);
    std::uniform_real_distribution<double> theta0_dist(env.rl.theta0_min, env.rl.theta0_max);

    const int steps_per_episode =
        static_cast<int>(std::round(schedule.episode_seconds / env.dt));
    const double theta_des = env.rl.theta_des_train;

    std::int64_t global_step = 0;
    double max_abs_reward = 10000.0;

    for (int episode = 0; episode < schedule.episodes; ++episode) {
        sim.reset(env.V0, env.h0, theta0_dist(rng));
        double delta_prev = sim.trim().delta_E;
        double episode_return = 0.0;

        double e = sim.state().theta - theta_des;
        double rate = sim.euler_pitch_rate();

        try {
            for (int step = 0; step < steps_per_episode; ++step) {
                const std::int64_t tick = schedule.decay_per_episode ? episode : global_step;
                const double epsilon = schedule.epsilon_at(tick);
                const double alpha = schedule.alpha_at(tick);

                int k;
                double delta_cmd;
                bool explored = false;
                if (coin(rng) < epsilon) {
                    explored = true;
                    k = random_action(rng);
                    delta_cmd = actions.values[k];
                } else if (method == ControllerKind::FQL) {
                    const Window w = faa_window(e, rate, grid, env.rl.window_radius);
                    delta_cmd = faa_action(Q, e, rate, grid, actions, w);
                    k = actions.nearest(delta_cmd);
                } else {
                    const auto [i, j] = nearest_cell(e, rate, grid);
                    k = Q.greedy_action(i, j);
                    delta_cmd = actions.values[k];
                }

                sim.step(delta_cmd);
                const double e_next = sim.state().theta - theta_des;
                const double rate_next = sim.euler_pitch_rate();
                const double R = reward(e_next, rate_next, delta_cmd, delta_prev, env.rl.reward);

                if (method == ControllerKind::FQL) {
                    if (explored) {
                        fql_update(Q, {e, rate, k, R, e_next, rate_next},
                                   alpha, schedule.gamma, grid, env.rl.window_radius);
                    } else {
                        // each window cell voted its own greedy action into
                        // the blend and is credited on that column
                        fql_update_faa(Q, e, rate, R, e_next, rate_next,
                                       alpha, schedule.gamma, grid, actions,
                                       env.rl.window_radius);
                    }
                } else {
                    const auto [i, j] = nearest_cell(e, rate, grid);
                    const auto [i2, j2] = nearest_cell(e_next, rate_next, grid);
                    ql_update(Q, i, j, k, R, i2, j2, alpha, schedule.gamma);
                }

                // divergence tripwire: tabular values stay within
                // max|R|/(1-gamma) of zero unless something went wrong
                max_abs_reward = std::max(max_abs_reward, std::abs(R));
                const double bound = max_abs_reward / (1.0 - schedule.gamma) + 1.0;
                const auto [iu, ju] = nearest_cell(e, rate, grid);
                if (std::abs(Q.at(iu, ju, k)) > bound) {
                    throw LearningDiverged(
                        "q-value bound exceeded at episode " + std::to_string(episode) +
                        " step " + std::to_string(step) + ": |Q|=" +
                        std::to_string(std::abs(Q.at(iu, ju, k))) + " > " + std::to_string(bound));
                }

                episode_return += R;
                delta_prev = delta_cmd;
                e = e_next;
                rate = rate_next;
                ++global_step;
            }
        } catch (const SimulationDiverged&) {
            // attitude guard hit: the episode ends early, training continues
            ++result.diverged_episodes;
        }
        result.episode_returns.push_back(episode_return);
    }
    return result;
}

RunMetrics evaluate(const ScenarioConfig& cfg, const QTable* table,
                    std::vector<HistoryRow>* history,
                    std::vector<WindRow>* wind_history,
                    LandingGeometry* geometry_out) {
    const bool uses_table = cfg.controller != ControllerKind::DI;
    if (uses_table && table == nullptr)
        throw ConfigError("evaluate: fql/ql controllers need a trained q-table");

    const LandingGeometry geom =
        plan_landing(cfg.V_stall, cfg.theta_a_deg, cfg.h0, cfg.screen_height_m);
    if (geometry_out) *geometry_out = geom;

    // the approach is already established at the initial altitude: start in
    // descending trim on the glideslope
    Simulator sim(cfg.plant_model(), cfg.sim_options());
    sim.reset(cfg.V0, cfg.h0, std::nullopt, geom.x_start, -geom.theta_a);

    const StateGrid grid = cfg.rl.make_grid();
    const ActionSet actions = ActionSet::standard();
    std::optional<DIController> di;
    if (cfg.controller == ControllerKind::DI)
        di.emplace(cfg.nominal_model, cfg.di_gains, cfg.dt);
    if (uses_table &&
        (table->n_theta != grid.n_theta() || table->n_thetadot != grid.n_thetadot() ||
         table->n_actions != actions.size()))
        throw ConfigError("evaluate: q-table dimensions do not match the configured grid");

    RunMetrics m;
    m.kind = cfg.kind;
    m.controller = cfg.controller;
    m.derivative_scale = cfg.derivative_scale;
    m.V0 = cfg.V0;
    m.seed = cfg.seed;

    const int max_steps = static_cast<int>(std::round(cfg.duration / cfg.dt));
    TrapezoidAverage acc_theta, acc_h, acc_ce;

    for (int k = 0; k <= max_steps; ++k) {
        const AircraftState& s = sim.state();
        const GuidanceCommand cmd = desired_state(s.x, geom);
        if (cmd.phase == LandingPhase::Touchdown) {
            m.touched_down = true;
            break;
        }

        const auto [theta_meas, q_meas] = sim.measure();

        double delta_cmd = 0.0;
        double theta_cmd = cmd.theta_des;
        bool controller_failed = false;
        try {
            // altitude-corrective pitch command along the planned profile,
            // shared by all three controllers
            const double hdot_des = cmd.dh_dx * sim.ground_velocity()(0);
            theta_cmd = pitch_command(s.h, cmd.h_des, hdot_des,
                                      s.u, s.v, s.w, s.phi, cfg.di_gains.k_h,
                                      sim.trim().alpha);
            if (cfg.controller == ControllerKind::DI) {
                DIInputs in;
                in.theta_des = theta_cmd;
                in.theta_des_ref = cmd.theta_des;
                in.theta = theta_meas;
                in.q = q_meas;
                in.u = s.u;
                in.v = s.v;
                in.w = s.w;
                in.phi = s.phi;
                in.p = s.p;
                in.r = s.r;
                in.V_air = sim.current_airspeed();
                in.alpha = sim.alpha();
                in.u_air = s.u - sim.wind().W(0);
                delta_cmd = di->command(in);
            } else {
                const double e = theta_meas - theta_cmd;
                const Window w = faa_window(e, q_meas, grid, cfg.rl.window_radius);
                delta_cmd = faa_action(*table, e, q_meas, grid, actions, w);
            }
        } catch (const ControllerFault&) {
            controller_failed = true;
        }
        if (controller_failed) {
            m.diverged = true;
            break;
        }
        delta_cmd = clamp_elevator(delta_cmd);

        // trapezoid accumulation on the integration grid, true state
        acc_theta.add(std::abs(s.theta - theta_cmd), cfg.dt);
        acc_h.add(std::abs(s.h - cmd.h_des), cfg.dt);
        acc_ce.add(std::abs(delta_cmd), cfg.dt);

        if (k == max_steps) break;  // horizon reached

        HistoryRow row{s.t, s.theta, theta_cmd, s.q, s.h, cmd.h_des,
                       delta_cmd, 0.0, s.u, sim.alpha(), sim.wind().W(2)};
        try {
            const auto so = sim.step(delta_cmd);
            row.delta_eff = so.delta_eff;
        } catch (const SimulationDiverged&) {
            m.diverged = true;
            if (history) history->push_back(row);
            break;
        }
        if (history) history->push_back(row);
        if (wind_history && sim.wind().active) {
            const auto& wd = sim.wind();
            wind_history->push_back({sim.state().t, wd.W(0), wd.W(1), wd.W(2),
                                     wd.omega_w(0), wd.omega_w(1), wd.omega_w(2)});
        }

        const AircraftState& ns = sim.state();
        if (std::abs(ns.theta) > deg2rad(45.0) || ns.h > 2.0 * cfg.h0 + 100.0) {
            m.diverged = true;
            break;
        }
        if (ns.h <= 0.0) {
            m.touched_down = true;
            break;
        }
    }

    m.duration = sim.state().t;
    m.touchdown_speed = sim.state().u;
    m.te_theta_deg = rad2deg(acc_theta.average());
    m.te_h_m = acc_h.average();
    m.ce_deg = rad2deg(acc_ce.average());
    return m;
}

std::vector<double> default_sweep_scales() {
    std::vector<double> s;
    for (int i = 0; i < 9; ++i) s.push_back(0.70 + 0.075 * i);
    return s;
}

std::vector<double> default_sweep_speeds() {
    std::vector<double> v;
    for (int i = 0; i < 9; ++i) v.push_back(150.0 + 8.75 * i);
    return v;
}

std::vector<RunMetrics> robustness_sweep(const ScenarioConfig& base, const QTable* table,
                                         const std::vector<double>& scales,
                                         const std::vector<double>& speeds,
                                         int jobs) {
    if (scales.empty() || speeds.empty())
        throw ConfigError("robustness_sweep: scale and speed lists must be non-empty");
    if (jobs <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        jobs = hw == 0 ? 4 : static_cast<int>(hw);
    }

    std::vector<ScenarioConfig> cells;
    for (double scale : scales) {
        for (double speed : speeds) {
            ScenarioConfig cfg = base;
            cfg.kind = ScenarioKind::Ideal;
            cfg.derivative_scale = scale;
            cfg.V0 = speed;
            cells.push_back(cfg);
        }
    }

    std::vector<RunMetrics> results(cells.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            try {
                results[idx] = evaluate(cells[idx], table);
            } catch (const std::exception&) {
                RunMetrics bad;
                bad.kind = cells[idx].kind;
                bad.controller = cells[idx].controller;
                bad.derivative_scale = cells[idx].derivative_scale;
                bad.V0 = cells[idx].V0;
                bad.seed = cells[idx].seed;
                bad.diverged = true;
                results[idx] = bad;
            }
        }
    };
    std::vector<std::future<void>> pool;
    const int n_workers = std::min<int>(jobs, static_cast<int>(cells.size()));
    for (int i = 0; i < n_workers; ++i)
        pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
    return results;  // already in (scale, speed) order
}

namespace {

constexpr const char* kMetricsHeader =
    "scenario,controller,te_theta_deg,te_h_m,ce_deg,touchdown_speed_mps,duration_s,"
    "touched_down,diverged,derivative_scale,V0_mps,seed";

std::string metrics_row(const RunMetrics& m) {
    std::ostringstream os;
    os << to_string(m.kind) << ',' << to_string(m.controller) << ','
       << format_double(m.te_theta_deg) << ',' << format_double(m.te_h_m) << ','
       << format_double(m.ce_deg) << ',' << format_double(m.touchdown_speed) << ','
       << format_double(m.duration) << ',' << (m.touched_down ? 1 : 0) << ','
       << (m.diverged ? 1 : 0) << ',' << format_double(m.derivative_scale) << ','
       << format_double(m.V0) << ',' << m.seed;
    return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

void write_metrics_csv(const std::string& path, const std::vector<RunMetrics>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write metrics csv: " + path);
    out << kMetricsHeader << '\n';
    for (const auto& m : rows) out << metrics_row(m) << '\n';
}

std::vector<RunMetrics> read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open metrics csv: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("metrics csv is empty: " + path);
    if (line != kMetricsHeader)
        throw ConfigError("metrics csv has an unexpected header: " + path);
    std::vector<RunMetrics> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 12) throw ConfigError("metrics csv row has wrong field count");
        RunMetrics m;
        m.kind = scenario_from_string(f[0]);
        m.controller = controller_from_string(f[1]);
        m.te_theta_deg = parse_double(f[2], "te_theta_deg");
        m.te_h_m = parse_double(f[3], "te_h_m");
        m.ce_deg = parse_double(f[4], "ce_deg");
        m.touchdown_speed = parse_double(f[5], "touchdown_speed_mps");
        m.duration = parse_double(f[6], "duration_s");
        m.touched_down = f[7] == "1";
        m.diverged = f[8] == "1";
        m.derivative_scale = parse_double(f[9], "derivative_scale");
        m.V0 = parse_double(f[10], "V0_mps");
        m.seed = static_cast<std::uint64_t>(std::stoull(f[11]));
        rows.push_back(m);
    }
    return rows;
}

namespace {

struct CellStats {
    double te_theta = 0, te_h = 0, ce = 0;
    int count = 0;
    bool diverged = false;
};

using ComparisonGrid = std::map<ScenarioKind, std::map<ControllerKind, CellStats>>;

ComparisonGrid build_grid(const std::vector<RunMetrics>& runs) {
    ComparisonGrid grid;
    for (const auto& m : runs) {
        auto& cell = grid[m.kind][m.controller];
        cell.te_theta += m.te_theta_deg;
        cell.te_h += m.te_h_m;
        cell.ce += m.ce_deg;
        cell.diverged = cell.diverged || m.diverged;
        ++cell.count;
    }
    for (auto& [k, row] : grid) {
        for (auto& [c, cell] : row) {
            if (cell.count > 1) {
                cell.te_theta /= cell.count;
                cell.te_h /= cell.count;
                cell.ce /= cell.count;
            }
        }
    }
    return grid;
}

const ScenarioKind kScenarioOrder[] = {
    ScenarioKind::Ideal, ScenarioKind::NoiseDisturbance,
    ScenarioKind::ActuatorFault, ScenarioKind::ModelUncertainty};
const ControllerKind kControllerOrder[] = {
    ControllerKind::DI, ControllerKind::QL, ControllerKind::FQL};

}  // namespace

std::string comparison_text(const std::vector<RunMetrics>& runs) {
    const ComparisonGrid grid = build_grid(runs);
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-20s %-12s %14s %14s %14s\n",
                  "scenario", "controller", "TE_theta[deg]", "TE_h[m]", "CE[deg]");
    os << buf;
    for (ScenarioKind k : kScenarioOrder) {
        auto row_it = grid.find(k);
        if (row_it == grid.end()) continue;
        const auto& row = row_it->second;
        double best_te = 0, best_th = 0, best_ce = 0;
        bool first = true;
        for (const auto& [c, cell] : row) {
            if (first || cell.te_theta < best_te) best_te = cell.te_theta;
            if (first || cell.te_h < best_th) best_th = cell.te_h;
            if (first || cell.ce < best_ce) best_ce = cell.ce;
            first = false;
        }
        for (ControllerKind c : kControllerOrder) {
            auto it = row.find(c);
            if (it == row.end()) continue;
            const CellStats& cell = it->second;
            auto mark = [&](double v, double best) {
                char num[48];
                std::snprintf(num, sizeof(num), "%.3f%s", v, v == best ? "*" : " ");
                return std::string(num);
            };
            std::snprintf(buf, sizeof(buf), "%-20s %-12s %14s %14s %14s%s\n",
                          to_string(k).c_str(), to_string(c).c_str(),
                          mark(cell.te_theta, best_te).c_str(),
                          mark(cell.te_h, best_th).c_str(),
                          mark(cell.ce, best_ce).c_str(),
                          cell.diverged ? "  [diverged]" : "");
            os << buf;
        }
    }
    return os.str();
}

std::string comparison_csv(const std::vector<RunMetrics>& runs) {
    const ComparisonGrid grid = build_grid(runs);
    std::ostringstream os;
    os << "scenario,controller,te_theta_deg,te_h_m,ce_deg,best_te_theta,best_te_h,best_ce,diverged\n";
    for (ScenarioKind k : kScenarioOrder) {
        auto row_it = grid.find(k);
        if (row_it == grid.end()) continue;
        const auto& row = row_it->second;
        double best_te = 1e300, best_th = 1e300, best_ce = 1e300;
        for (const auto& [c, cell] : row) {
            best_te = std::min(best_te, cell.te_theta);
            best_th = std::min(best_th, cell.te_h);
            best_ce = std::min(best_ce, cell.ce);
        }
        for (ControllerKind c : kControllerOrder) {
            auto it = row.find(c);
            if (it == row.end()) continue;
            const CellStats& cell = it->second;
            os << to_string(k) << ',' << to_string(c) << ','
               << format_double(cell.te_theta) << ',' << format_double(cell.te_h) << ','
               << format_double(cell.ce) << ',' << (cell.te_theta == best_te ? 1 : 0) << ','
               << (cell.te_h == best_th ? 1 : 0) << ',' << (cell.ce == best_ce ? 1 : 0) << ','
               << (cell.diverged ? 1 : 0) << '\n';
        }
    }
    return os.str();
}

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write history csv: " + path);
    out << "t,theta_rad,theta_des_rad,q_radps,h_m,h_des_m,delta_cmd_rad,delta_eff_rad,"
           "u_mps,alpha_rad,Wz_mps\n";
    for (const auto& r : rows) {
        out << format_double(r.t) << ',' << format_double(r.theta) << ','
            << format_double(r.theta_des) << ',' << format_double(r.q) << ','
            << format_double(r.h) << ',' << format_double(r.h_des) << ','
            << format_double(r.delta_cmd) << ',' << format_double(r.delta_eff) << ','
            << format_double(r.u) << ',' << format_double(r.alpha) << ','
            << format_double(r.Wz) << '\n';
    }
}

void write_wind_csv(const std::string& path, const std::vector<WindRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write wind csv: " + path);
    out << "t,Wx_mps,Wy_mps,Wz_mps,omega_wx_radps,omega_wy_radps,omega_wz_radps\n";
    for (const auto& r : rows) {
        out << format_double(r.t) << ',' << format_double(r.Wx) << ','
            << format_double(r.Wy) << ',' << format_double(r.Wz) << ','
            << format_double(r.omega_wx) << ',' << format_double(r.omega_wy) << ','
            << format_double(r.omega_wz) << '\n';
    }
}

void write_learning_curve_csv(const std::string& path,
                              const std::vector<double>& episode_returns,
                              int moving_average_window) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write learning curve csv: " + path);
    out << "episode,return,return_ma" << moving_average_window << '\n';
    double running = 0.0;
    for (size_t i = 0; i < episode_returns.size(); ++i) {
        running += episode_returns[i];
        if (i >= static_cast<size_t>(moving_average_window))
            running -= episode_returns[i - moving_average_window];
        const double denom = std::min<size_t>(i + 1, moving_average_window);
        out << i << ',' << format_double(episode_returns[i]) << ','
            << format_double(running / static_cast<double>(denom)) << '\n';
    }
}

void write_manifest(const std::string& path, const ScenarioConfig& cfg,
                    const LandingGeometry* geometry) {
    nlohmann::json j;
    j["code_version"] = code_version();
    const std::string canonical = cfg.canonical_text();
    j["config_hash"] = hash_hex(canonical);
    j["seed"] = cfg.seed;
    j["scenario"] = to_string(cfg.kind);
    j["controller"] = to_string(cfg.controller);
    nlohmann::json knobs;
    const KeyValueFile parsed = KeyValueFile::from_string(canonical);
    for (const auto& [key, value] : parsed.entries()) knobs[key] = value;
    j["config"] = knobs;
    if (geometry) {
        j["geometry"] = {
            {"flare_radius_m", geometry->R},
            {"flare_altitude_m", geometry->h_f},
            {"approach_distance_m", geometry->s_a},
            {"flare_distance_m", geometry->s_f},
            {"touchdown_distance_m", geometry->s_td},
            {"profile_start_x_m", geometry->x_start},
        };
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
}

std::string code_version() { return TBWSIM_VERSION; }

}  // namespace tbwsim
