// Command-line front end: trim analysis, Q-table training, landing-scenario
// evaluation, robustness sweeps and result comparison.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tbwsim/harness.hpp"

using namespace tbwsim;

namespace {

namespace fs = std::filesystem;

ScenarioConfig make_config(const std::string& config_path, const std::string& aircraft_path) {
    ScenarioConfig cfg;
    if (!aircraft_path.empty()) cfg.nominal_model = load_aero_model(aircraft_path);
    if (!config_path.empty()) cfg = load_scenario_config(config_path, cfg);
    return cfg;
}

void echo_geometry(const LandingGeometry& g) {
    std::printf("landing geometry: R=%.1f m  h_f=%.2f m  s_a=%.1f m  s_f=%.1f m  "
                "s_td=%.1f m  profile start x=%.1f m\n",
                g.R, g.h_f, g.s_a, g.s_f, g.s_td, g.x_start);
}

int cmd_trim(const ScenarioConfig& cfg, double V, double h) {
    const TrimPoint tp = solve_trim(cfg.nominal_model, V, h);
    std::printf("trim at V=%.1f m/s, h=%.1f m:\n", V, h);
    std::printf("  elevator   %.4f deg\n", rad2deg(tp.delta_E));
    std::printf("  alpha      %.4f deg\n", rad2deg(tp.alpha));
    std::printf("  thrust     %.1f N (%.1f lbf)\n", tp.thrust, tp.thrust / kLbfToNewton);

    const LongitudinalModes modes = linearize_longitudinal(cfg.nominal_model, tp);
    std::printf("longitudinal modes:\n");
    std::printf("  short period  %.4f %+.4fi%s\n", modes.short_period.real(),
                modes.short_period.imag(),
                modes.short_period_oscillatory ? "" : "  (real pair)");
    if (!modes.short_period_oscillatory)
        std::printf("                (%.4f, %.4f)\n", modes.short_period_pair[0].real(),
                    modes.short_period_pair[1].real());
    std::printf("  phugoid       %.5f %+.5fi%s\n", modes.phugoid.real(),
                modes.phugoid.imag(), modes.phugoid_oscillatory ? "" : "  (real pair)");
    return 0;
}

int cmd_train(ScenarioConfig cfg, const std::string& method, int episodes,
              std::uint64_t seed, const std::string& out_path,
              const std::string& curve_path) {
    cfg.controller = controller_from_string(method);
    cfg.seed = seed;
    if (episodes > 0) cfg.learning.episodes = episodes;

    std::printf("training %s: %d episodes of %.1f s, seed %llu\n", method.c_str(),
                cfg.learning.episodes, cfg.learning.episode_seconds,
                static_cast<unsigned long long>(seed));
    const TrainResult result = train(cfg.controller, cfg.learning, seed, train_env(cfg));

    const StateGrid grid = cfg.rl.make_grid();
    save_qtable(result.table, grid, ActionSet::standard(), out_path);
    std::printf("q-table written to %s\n", out_path.c_str());

    const std::string curve = curve_path.empty() ? out_path + ".curve.csv" : curve_path;
    write_learning_curve_csv(curve, result.episode_returns);
    std::printf("learning curve written to %s\n", curve.c_str());
    if (result.diverged_episodes > 0)
        std::printf("note: %d episodes ended early at the attitude guard\n",
                    result.diverged_episodes);
    if (!result.episode_returns.empty()) {
        const size_t n = result.episode_returns.size();
        const size_t tail = std::min<size_t>(500, n);
        double first = 0.0, last = 0.0;
        for (size_t i = 0; i < tail; ++i) {
            first += result.episode_returns[i] / tail;
            last += result.episode_returns[n - 1 - i] / tail;
        }
        std::printf("mean return: first %zu episodes %.0f, last %zu episodes %.0f\n",
                    tail, first, tail, last);
    }
    return 0;
}

int cmd_evaluate(ScenarioConfig cfg, const std::string& scenario,
                 const std::string& controller, const std::string& table_path,
                 std::uint64_t seed, const std::string& outdir) {
    if (!scenario.empty()) cfg.kind = scenario_from_string(scenario);
    if (!controller.empty()) cfg.controller = controller_from_string(controller);
    if (seed != 0) cfg.seed = seed;

    const QTable* table = nullptr;
    QTable loaded;
    if (cfg.controller != ControllerKind::DI) {
        if (table_path.empty())
            throw ConfigError("evaluate: --table is required for fql/ql controllers");
        loaded = load_qtable(table_path, cfg.rl.make_grid(), ActionSet::standard());
        table = &loaded;
    }

    fs::create_directories(outdir);
    std::vector<HistoryRow> history;
    std::vector<WindRow> wind_rows;
    LandingGeometry geom;
    const RunMetrics m = evaluate(cfg, table, &history, &wind_rows, &geom);

    echo_geometry(geom);
    write_metrics_csv((fs::path(outdir) / "metrics.csv").string(), {m});
    write_history_csv((fs::path(outdir) / "history.csv").string(), history);
    if (!wind_rows.empty())
        write_wind_csv((fs::path(outdir) / "wind.csv").string(), wind_rows);
    write_manifest((fs::path(outdir) / "manifest.json").string(), cfg, &geom);

    std::printf("%s / %s: TE_theta=%.4f deg  TE_h=%.3f m  CE=%.4f deg  "
                "touchdown u=%.1f m/s  t=%.2f s%s%s\n",
                to_string(cfg.kind).c_str(), to_string(cfg.controller).c_str(),
                m.te_theta_deg, m.te_h_m, m.ce_deg, m.touchdown_speed, m.duration,
                m.touched_down ? "  [touched down]" : "",
                m.diverged ? "  [DIVERGED]" : "");
    std::printf("outputs in %s\n", outdir.c_str());
    return m.diverged ? 1 : 0;
}

int cmd_sweep(ScenarioConfig cfg, const std::string& controller,
              const std::string& table_path, const std::string& outdir, int jobs) {
    if (!controller.empty()) cfg.controller = controller_from_string(controller);

    const QTable* table = nullptr;
    QTable loaded;
    if (cfg.controller != ControllerKind::DI) {
        if (table_path.empty())
            throw ConfigError("sweep: --table is required for fql/ql controllers");
        loaded = load_qtable(table_path, cfg.rl.make_grid(), ActionSet::standard());
        table = &loaded;
    }

    const auto runs = robustness_sweep(cfg, table, default_sweep_scales(),
                                       default_sweep_speeds(), jobs);
    fs::create_directories(outdir);
    write_metrics_csv((fs::path(outdir) / "metrics.csv").string(), runs);
    write_manifest((fs::path(outdir) / "manifest.json").string(), cfg, nullptr);

    double te_lo = 1e300, te_hi = -1e300, ce_lo = 1e300, ce_hi = -1e300;
    int diverged = 0;
    for (const auto& m : runs) {
        te_lo = std::min(te_lo, m.te_theta_deg);
        te_hi = std::max(te_hi, m.te_theta_deg);
        ce_lo = std::min(ce_lo, m.ce_deg);
        ce_hi = std::max(ce_hi, m.ce_deg);
        diverged += m.diverged ? 1 : 0;
    }
    std::printf("%zu runs: TE_theta [%.4f, %.4f] deg, CE [%.4f, %.4f] deg, "
                "%d diverged\n",
                runs.size(), te_lo, te_hi, ce_lo, ce_hi, diverged);
    std::printf("outputs in %s\n", outdir.c_str());
    return 0;
}

int cmd_compare(const std::vector<std::string>& inputs, const std::string& out_csv) {
    std::vector<RunMetrics> all;
    for (const auto& path : inputs) {
        const auto rows = read_metrics_csv(path);
        all.insert(all.end(), rows.begin(), rows.end());
    }
    std::fputs(comparison_text(all).c_str(), stdout);
    if (!out_csv.empty()) {
        std::ofstream out(out_csv);
        out << comparison_csv(all);
        std::printf("comparison table written to %s\n", out_csv.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flight-dynamics and reinforcement-learning auto-landing workbench"};
    app.require_subcommand(1);

    std::string config_path, aircraft_path;
    app.add_option("--config", config_path, "run config file (key = value)");
    app.add_option("--aircraft", aircraft_path, "aircraft model file (key = value)");

    auto* trim = app.add_subcommand("trim", "solve the wings-level trim and print the modes");
    double trim_V = 160.0, trim_h = 100.0;
    trim->add_option("--speed", trim_V, "airspeed, m/s")->capture_default_str();
    trim->add_option("--alt", trim_h, "altitude, m")->capture_default_str();

    auto* tr = app.add_subcommand("train", "train a q-table controller");
    std::string method = "fql", table_out = "table.qt", curve_out;
    int episodes = 0;
    std::uint64_t train_seed = 1;
    tr->add_option("--method", method, "fql or ql")->capture_default_str();
    tr->add_option("--episodes", episodes, "episode count (default from config)");
    tr->add_option("--seed", train_seed, "training seed")->capture_default_str();
    tr->add_option("--out", table_out, "q-table output path")->capture_default_str();
    tr->add_option("--curve", curve_out, "learning-curve csv path");

    auto* ev = app.add_subcommand("evaluate", "fly one landing scenario");
    std::string scenario = "ideal", controller = "fql", table_in, outdir = "run";
    std::uint64_t eval_seed = 0;
    ev->add_option("--scenario", scenario,
                   "ideal | noise_disturbance | actuator_fault | model_uncertainty")
        ->capture_default_str();
    ev->add_option("--controller", controller, "fql | ql | di")->capture_default_str();
    ev->add_option("--table", table_in, "trained q-table (fql/ql)");
    ev->add_option("--seed", eval_seed, "scenario seed (default from config)");
    ev->add_option("--outdir", outdir, "output directory")->capture_default_str();

    auto* sw = app.add_subcommand("sweep", "derivative-scale x speed robustness sweep");
    std::string sweep_controller = "fql", sweep_table, sweep_outdir = "sweep";
    int jobs = 0;
    sw->add_option("--controller", sweep_controller, "fql | ql | di")->capture_default_str();
    sw->add_option("--table", sweep_table, "trained q-table (fql/ql)");
    sw->add_option("--outdir", sweep_outdir, "output directory")->capture_default_str();
    sw->add_option("--jobs", jobs, "parallel workers (0 = all cores)")->capture_default_str();

    auto* cp = app.add_subcommand("compare", "merge metrics files into the comparison table");
    std::vector<std::string> compare_inputs;
    std::string compare_out;
    cp->add_option("inputs", compare_inputs, "metrics.csv files")->required();
    cp->add_option("--out", compare_out, "also write the table as csv");

    CLI11_PARSE(app, argc, argv);

    try {
        const ScenarioConfig cfg = make_config(config_path, aircraft_path);
        if (*trim) return cmd_trim(cfg, trim_V, trim_h);
        if (*tr) return cmd_train(cfg, method, episodes, train_seed, table_out, curve_out);
        if (*ev) return cmd_evaluate(cfg, scenario, controller, table_in, eval_seed, outdir);
        if (*sw) return cmd_sweep(cfg, sweep_controller, sweep_table, sweep_outdir, jobs);
        if (*cp) return cmd_compare(compare_inputs, compare_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
