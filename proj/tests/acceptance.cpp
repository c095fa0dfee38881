// Acceptance suite: one check per release criterion, printed as PASS/FAIL
// lines. Exit code is the number of failed criteria. Training runs at full
// scale (20000 episodes per method per seed), so the whole suite takes a few
// minutes; pass --quick for a 2000-episode smoke run (non-binding, the
// thresholds are calibrated at full scale).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstring>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tbwsim/harness.hpp"

using namespace tbwsim;

namespace {

int g_failures = 0;

void report(const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
    if (!pass) ++g_failures;
}

void note(const std::string& text) { std::printf("       %s\n", text.c_str()); }

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const int episodes = quick ? 2000 : 20000;
    if (quick)
        std::printf("note: --quick runs 2000 episodes; thresholds are calibrated at 20000\n");

    const AeroModel nominal = AeroModel::chaka50();

    // ----- 1. trim reproduction ------------------------------------------
    {
        Timer t;
        const TrimPoint tp = solve_trim(nominal, 160.0, 100.0);
        const double de_deg = rad2deg(tp.delta_E);
        const double alpha_deg = rad2deg(tp.alpha);
        const double thrust_ref = 21433.02 * kLbfToNewton;
        const bool de_ok = de_deg >= 0.9 * 0.39 && de_deg <= 1.1 * 0.39;
        const bool alpha_ok = alpha_deg <= -0.9 * 2.28 && alpha_deg >= -1.1 * 2.28;
        const bool thrust_ok = tp.thrust >= 0.9 * thrust_ref && tp.thrust <= 1.1 * thrust_ref;
        const bool time_ok = t.seconds() < 1.0;
        report("1 trim reproduction", de_ok && alpha_ok && thrust_ok && time_ok,
               fmt("dE=%.4f deg (ref 0.39+-10%%), alpha=%.4f deg (ref -2.28+-10%%), "
                   "thrust=%.0f N (ref %.0f+-10%%), %.2fs",
                   de_deg, alpha_deg, tp.thrust, thrust_ref, t.seconds()));
        if (!(de_ok && alpha_ok && thrust_ok))
            note("published trim values are not reproducible from the published "
                 "derivative set; see the project notes");
    }

    // ----- 2. longitudinal mode validation --------------------------------
    {
        Timer t;
        const TrimPoint tp = solve_trim(nominal, 160.0, 100.0);
        const LongitudinalModes modes = linearize_longitudinal(nominal, tp);
        auto within = [](double value, double ref, double tol) {
            return std::abs(value - ref) <= tol * std::abs(ref);
        };
        const bool sp_ok = within(modes.short_period.real(), -0.8, 0.15) &&
                           within(modes.short_period.imag(), 0.61, 0.15);
        const bool ph_ok = within(modes.phugoid.real(), -0.0064, 0.15) &&
                           within(modes.phugoid.imag(), 0.05, 0.15);
        report("2 longitudinal modes", sp_ok && ph_ok && t.seconds() < 1.0,
               fmt("short period %.4f%+.4fi (ref -0.8+-0.61i), phugoid %.5f%+.5fi "
                   "(ref -0.0064+-0.05i), %.2fs",
                   modes.short_period.real(), modes.short_period.imag(),
                   modes.phugoid.real(), modes.phugoid.imag(), t.seconds()));
        if (!(sp_ok && ph_ok))
            note("published roots match this derivative set only near cruise density; "
                 "at the configured sea-level density the short period is overdamped");
    }

    // ----- 3. Dryden spectrum ---------------------------------------------
    {
        Timer t;
        const DrydenParams p = dryden_scales(100.0, 7.7, 160.0);
        WindState wind;
        std::mt19937_64 rng(1);
        std::normal_distribution<double> unit(0.0, 1.0);
        const int warmup = 20000, n = 1000000, batches = 100;
        for (int i = 0; i < warmup; ++i)
            dryden_step(wind, p, Vec3(unit(rng), unit(rng), unit(rng)), 0.01);
        Vec3 sum = Vec3::Zero(), sum2 = Vec3::Zero();
        std::vector<Vec3> batch_means(batches, Vec3::Zero());
        for (int i = 0; i < n; ++i) {
            dryden_step(wind, p, Vec3(unit(rng), unit(rng), unit(rng)), 0.01);
            sum += wind.W;
            sum2 += wind.W.cwiseProduct(wind.W);
            batch_means[i / (n / batches)] += wind.W / (n / batches);
        }
        const Vec3 m = sum / n;
        const Vec3 sd = (sum2 / n - m.cwiseProduct(m)).cwiseSqrt();
        // standard error of the mean from batch means (gusts are correlated)
        Vec3 se = Vec3::Zero();
        for (const auto& b : batch_means) se += (b - m).cwiseProduct(b - m);
        se = (se / batches / batches).cwiseSqrt();

        const Vec3 target(p.sigma_u, p.sigma_v, p.sigma_w);
        bool ok = t.seconds() < 10.0;
        for (int k = 0; k < 3; ++k) {
            ok = ok && std::abs(sd(k) - target(k)) <= 0.10 * target(k);
            ok = ok && std::abs(m(k)) <= 3.0 * se(k);
        }
        report("3 dryden spectrum", ok,
               fmt("std (%.3f, %.3f, %.3f) vs sigma (%.3f, %.3f, %.3f), "
                   "|mean|<=3SE, %.1fs",
                   sd(0), sd(1), sd(2), target(0), target(1), target(2), t.seconds()));
    }

    // ----- 4. learner equivalence -----------------------------------------
    {
        Timer t;
        const StateGrid grid = RLParams{}.make_grid();
        const ActionSet actions = ActionSet::standard();
        QTable fuzzy = QTable::zeros(grid, actions);
        QTable plain = QTable::zeros(grid, actions);
        std::mt19937_64 rng(77);
        std::uniform_int_distribution<int> ci(0, grid.n_theta() - 1);
        std::uniform_int_distribution<int> cj(0, grid.n_thetadot() - 1);
        std::uniform_int_distribution<int> ck(0, actions.size() - 1);
        std::uniform_real_distribution<double> cr(-10000.0, 2400.0);
        bool identical = true;
        for (int i = 0; i < 100000; ++i) {
            const int a = ci(rng), b = cj(rng), a2 = ci(rng), b2 = cj(rng), k = ck(rng);
            const double R = cr(rng);
            fql_update(fuzzy,
                       {grid.theta_centers[a], grid.thetadot_centers[b], k, R,
                        grid.theta_centers[a2], grid.thetadot_centers[b2]},
                       0.02, 0.99, grid, 0);
            ql_update(plain, a, b, k, R, a2, b2, 0.02, 0.99);
        }
        identical = fuzzy.values == plain.values;
        report("4 learner equivalence", identical && t.seconds() < 5.0,
               fmt("100000 single-cell transitions bitwise %s, %.1fs",
                   identical ? "identical" : "DIFFERENT", t.seconds()));
    }

    // ----- 5-7, 10 need trained tables ------------------------------------
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    LearningSchedule schedule;
    schedule.episodes = episodes;
    TrainEnv env;  // nominal plant, default grid and reward

    std::map<std::uint64_t, TrainResult> fql_runs, ql_runs;
    {
        Timer t;
        for (auto seed : seeds) {
            fql_runs[seed] = train(ControllerKind::FQL, schedule, seed, env);
            ql_runs[seed] = train(ControllerKind::QL, schedule, seed, env);
        }
        std::printf("       trained %zu seeds x 2 methods x %d episodes in %.0fs\n",
                    seeds.size(), episodes, t.seconds());
    }

    // ----- 5. learning-curve comparison ------------------------------------
    {
        std::vector<double> fql_tail, ql_tail;
        for (auto seed : seeds) {
            const auto& fr = fql_runs[seed].episode_returns;
            const auto& qr = ql_runs[seed].episode_returns;
            const size_t keep = std::min<size_t>(1000, fr.size());
            fql_tail.insert(fql_tail.end(), fr.end() - keep, fr.end());
            ql_tail.insert(ql_tail.end(), qr.end() - keep, qr.end());
        }
        const double mf = mean(fql_tail), mq = mean(ql_tail);
        const double sf = stddev(fql_tail), sq = stddev(ql_tail);
        report("5 learning curves", mf >= mq && sf < sq,
               fmt("final-1000 pooled over %zu seeds: FQL mean %.0f vs QL %.0f "
                   "(need >=), FQL std %.0f vs QL %.0f (need <)",
                   seeds.size(), mf, mq, sf, sq));
    }

    // the scenario criteria run on the default-seed tables, matching the
    // study's single-training protocol; other seeds are printed for context
    const QTable& fql_table = fql_runs[seeds.front()].table;
    const QTable& ql_table = ql_runs[seeds.front()].table;

    auto run_cell = [&](ScenarioKind kind, ControllerKind ctrl,
                        const QTable* table) {
        ScenarioConfig cfg;
        cfg.kind = kind;
        cfg.controller = ctrl;
        return evaluate(cfg, table);
    };

    // ----- 6. ideal landing metrics ----------------------------------------
    {
        const RunMetrics fq = run_cell(ScenarioKind::Ideal, ControllerKind::FQL, &fql_table);
        const RunMetrics di = run_cell(ScenarioKind::Ideal, ControllerKind::DI, nullptr);
        const bool te_ok = fq.te_theta_deg >= 0.013 && fq.te_theta_deg <= 0.12;
        const bool th_ok = fq.te_h_m >= 0.2 && fq.te_h_m <= 2.0;
        const bool ce_ok = fq.ce_deg >= 0.22 && fq.ce_deg <= 2.0;
        const bool di_ok = di.te_theta_deg < 0.2 && di.touched_down;
        report("6 ideal landing metrics", te_ok && th_ok && ce_ok && di_ok,
               fmt("FQL TE_theta=%.4f deg [0.013,0.12], TE_h=%.3f m [0.2,2.0], "
                   "CE=%.4f deg [0.22,2.0]; DI TE_theta=%.4f deg (<0.2)",
                   fq.te_theta_deg, fq.te_h_m, fq.ce_deg, di.te_theta_deg));
        if (!th_ok && fq.te_h_m < 0.2)
            note("altitude tracking is tighter than the published runs; the error "
                 "falls below the band floor");
    }

    // ----- 7. scenario ordering --------------------------------------------
    {
        const RunMetrics nf = run_cell(ScenarioKind::NoiseDisturbance, ControllerKind::FQL, &fql_table);
        const RunMetrics nq = run_cell(ScenarioKind::NoiseDisturbance, ControllerKind::QL, &ql_table);
        const RunMetrics af = run_cell(ScenarioKind::ActuatorFault, ControllerKind::FQL, &fql_table);
        const RunMetrics aq = run_cell(ScenarioKind::ActuatorFault, ControllerKind::QL, &ql_table);
        const RunMetrics ad = run_cell(ScenarioKind::ActuatorFault, ControllerKind::DI, nullptr);
        const RunMetrics uf = run_cell(ScenarioKind::ModelUncertainty, ControllerKind::FQL, &fql_table);
        const RunMetrics uq = run_cell(ScenarioKind::ModelUncertainty, ControllerKind::QL, &ql_table);
        const RunMetrics ud = run_cell(ScenarioKind::ModelUncertainty, ControllerKind::DI, nullptr);

        const bool noise_ok = nq.te_theta_deg >= 2.0 * nf.te_theta_deg && nf.touched_down;
        const bool fault_ok = af.touched_down && aq.touched_down && ad.touched_down &&
                              af.te_theta_deg < aq.te_theta_deg;
        const bool unc_ok = uf.touched_down && uq.touched_down && ud.touched_down &&
                            uf.te_theta_deg < 0.2 && uq.te_theta_deg < 0.2 &&
                            ud.te_theta_deg < 0.2;
        report("7 scenario ordering", noise_ok && fault_ok && unc_ok,
               fmt("noise QL/FQL = %.3f/%.3f (need >=2x, FQL lands=%d); fault "
                   "FQL %.3f < QL %.3f (all land=%d); uncertainty TE (%.3f, %.3f, "
                   "%.3f) all < 0.2",
                   nq.te_theta_deg, nf.te_theta_deg, nf.touched_down,
                   af.te_theta_deg, aq.te_theta_deg,
                   af.touched_down && aq.touched_down && ad.touched_down,
                   ud.te_theta_deg, uq.te_theta_deg, uf.te_theta_deg));
        for (size_t i = 1; i < seeds.size(); ++i) {
            ScenarioConfig cfg;
            cfg.kind = ScenarioKind::NoiseDisturbance;
            cfg.controller = ControllerKind::QL;
            const RunMetrics q2 = evaluate(cfg, &ql_runs[seeds[i]].table);
            cfg.controller = ControllerKind::FQL;
            const RunMetrics f2 = evaluate(cfg, &fql_runs[seeds[i]].table);
            note(fmt("context seed %llu: noise QL/FQL = %.3f/%.3f",
                     static_cast<unsigned long long>(seeds[i]), q2.te_theta_deg,
                     f2.te_theta_deg));
        }
    }

    // ----- 8. fault model --------------------------------------------------
    {
        const FaultSchedule f = FaultSchedule::standard_fault();
        const double cmd = deg2rad(1.0);
        const bool ok = rad2deg(apply_fault(cmd, 5.0, f)) == 0.0 &&
                        std::abs(rad2deg(apply_fault(cmd, 10.0, f)) - 1.0) == 0.0 &&
                        apply_fault(cmd, 2.0, f) == cmd;
        report("8 fault model", ok,
               fmt("branches: t=5s -> %.6f deg (=0), t=10s -> %.6f deg (=1), "
                   "t=2s passthrough",
                   rad2deg(apply_fault(cmd, 5.0, f)), rad2deg(apply_fault(cmd, 10.0, f))));
    }

    // ----- 9. guidance geometry ---------------------------------------------
    {
        const LandingGeometry g = plan_landing(140.0, 3.0, 100.0);
        const double h_slope = g.screen_height + (g.s_td - g.s_f) * std::tan(g.theta_a);
        const double h_arc = g.R - std::sqrt(g.R * g.R - g.s_f * g.s_f);
        const double dh = std::abs(h_slope - h_arc);
        const double theta_td = desired_state(-1e-15, g).theta_des;
        const double tangency = std::abs(desired_state(g.s_f + 1e-12, g).theta_des + g.theta_a);
        const bool ok = dh < 1e-9 && std::abs(theta_td) < 1e-9 && tangency < 1e-9;
        report("9 guidance geometry", ok,
               fmt("flare-entry |dh|=%.2e m, theta_des(x_td)=%.2e rad, "
                   "tangency error=%.2e rad",
                   dh, theta_td, tangency));
    }

    // ----- 10. robustness sweep ---------------------------------------------
    {
        Timer t;
        ScenarioConfig base;
        base.controller = ControllerKind::FQL;
        const auto runs = robustness_sweep(base, &fql_table,
                                           default_sweep_scales(), default_sweep_speeds(), 0);
        double te_lo = 1e9, te_hi = -1e9, ce_lo = 1e9, ce_hi = -1e9;
        int diverged = 0;
        for (const auto& m : runs) {
            te_lo = std::min(te_lo, m.te_theta_deg);
            te_hi = std::max(te_hi, m.te_theta_deg);
            ce_lo = std::min(ce_lo, m.ce_deg);
            ce_hi = std::max(ce_hi, m.ce_deg);
            diverged += m.diverged ? 1 : 0;
        }
        const bool te_ok = te_lo >= 0.02 && te_hi <= 0.14;
        const bool ce_ok = ce_lo >= 0.3 && ce_hi <= 5.2;
        const bool ok = te_ok && ce_ok && diverged == 0 && t.seconds() < 300.0;
        report("10 robustness sweep", ok,
               fmt("81 runs: TE_theta [%.4f, %.4f] deg (band [0.02, 0.14]), CE "
                   "[%.4f, %.4f] deg (band [0.3, 5.2]), diverged=%d, %.1fs",
                   te_lo, te_hi, ce_lo, ce_hi, diverged, t.seconds()));
        if (!ce_ok && ce_lo < 0.3)
            note("control effort falls below the band floor: the trim deflection "
                 "of this derivative set is far smaller than the published one");
    }

    std::printf("%d of 10 criteria failed\n", g_failures);
    return g_failures;
}
