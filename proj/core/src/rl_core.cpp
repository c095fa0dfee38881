#include "tbwsim/rl_core.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

namespace tbwsim {

namespace {

// mirror {negatives..., 0?} into a symmetric ascending axis
std::vector<double> mirror_axis(std::vector<double> negatives, bool include_zero) {
    std::vector<double> axis = negatives;
    if (include_zero) axis.push_back(0.0);
    for (auto it = negatives.rbegin(); it != negatives.rend(); ++it) axis.push_back(-*it);
    return axis;
}

// base width in the fine band, neighbor distance at the coarse outposts
std::vector<double> widths_for(const std::vector<double>& centers, double base) {
    const size_t n = centers.size();
    std::vector<double> sigma(n, base);
    for (size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? centers[i] - centers[i - 1]
                                  : std::numeric_limits<double>::infinity();
        const double right = i + 1 < n ? centers[i + 1] - centers[i]
                                       : std::numeric_limits<double>::infinity();
        const double gap = std::min(left, right);
        if (std::isfinite(gap) && gap > 10.0 * base) sigma[i] = gap;  // outpost
    }
    return sigma;
}

int nearest_index(const std::vector<double>& centers, double value) {
    int best = 0;
    double best_dist = std::abs(value - centers[0]);
    for (int i = 1; i < static_cast<int>(centers.size()); ++i) {
        const double d = std::abs(value - centers[i]);
        if (d < best_dist) {  // strict: ties keep the lower index
            best_dist = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

StateGrid StateGrid::standard(double sigma_theta_base, double sigma_thetadot_base,
                              bool insert_zero_rate) {
    std::vector<double> theta_neg{-10.0};
    for (int k = 0; k < 12; ++k) theta_neg.push_back(-0.024 + 0.002 * k);  // -0.024 .. -0.002
    theta_neg.push_back(-0.001);

    StateGrid g;
    g.theta_centers = mirror_axis(theta_neg, true);
    g.thetadot_centers = mirror_axis({-10.0, -0.04, -0.02, -0.005}, insert_zero_rate);
    g.sigma_theta = widths_for(g.theta_centers, sigma_theta_base);
    g.sigma_thetadot = widths_for(g.thetadot_centers, sigma_thetadot_base);
    g.validate();
    return g;
}

void StateGrid::validate() const {
    auto check_axis = [](const std::vector<double>& c, const char* name) {
        if (c.size() < 2) throw ConfigError(std::string(name) + ": need at least two centers");
        for (size_t i = 1; i < c.size(); ++i)
            if (c[i] <= c[i - 1])
                throw ConfigError(std::string(name) + ": centers must be strictly increasing");
        for (size_t i = 0; i < c.size(); ++i)
            if (std::abs(c[i] + c[c.size() - 1 - i]) > 1e-12)
                throw ConfigError(std::string(name) + ": centers must be symmetric about 0");
    };
    check_axis(theta_centers, "theta grid");
    check_axis(thetadot_centers, "thetadot grid");
    if (sigma_theta.size() != theta_centers.size() ||
        sigma_thetadot.size() != thetadot_centers.size())
        throw ConfigError("grid sigma arrays must match the center arrays");
    for (double s : sigma_theta)
        if (!(s > 0.0)) throw ConfigError("sigma_theta must be positive");
    for (double s : sigma_thetadot)
        if (!(s > 0.0)) throw ConfigError("sigma_thetadot must be positive");
}

std::pair<int, int> nearest_cell(double theta, double thetadot, const StateGrid& grid) {
    if (!std::isfinite(theta) || !std::isfinite(thetadot))
        throw LearningDiverged("nearest_cell: non-finite state");
    return {nearest_index(grid.theta_centers, theta),
            nearest_index(grid.thetadot_centers, thetadot)};
}

ActionSet ActionSet::standard() {
    ActionSet a;
    for (int k = 0; k <= 20; ++k) a.values.push_back(-0.25 + 0.025 * k);
    return a;
}

int ActionSet::nearest(double delta_E) const {
    return nearest_index(values, delta_E);
}

QTable QTable::zeros(const StateGrid& grid, const ActionSet& actions) {
    QTable q;
    q.n_theta = grid.n_theta();
    q.n_thetadot = grid.n_thetadot();
    q.n_actions = actions.size();
    q.values.assign(static_cast<size_t>(q.n_theta) * q.n_thetadot * q.n_actions, 0.0);
    return q;
}

int QTable::greedy_action(int i, int j, int preferred) const {
    int best = 0;
    double best_value = at(i, j, 0);
    for (int k = 1; k < n_actions; ++k) {
        if (at(i, j, k) > best_value) {
            best_value = at(i, j, k);
            best = k;
        }
    }
    if (preferred < 0) return best;
    // prefer the mildest deflection among exact ties
    for (int k = 0; k < n_actions; ++k) {
        if (at(i, j, k) == best_value &&
            std::abs(k - preferred) < std::abs(best - preferred)) {
            best = k;
        }
    }
    return best;
}

double QTable::max_value(int i, int j) const {
    double best = at(i, j, 0);
    for (int k = 1; k < n_actions; ++k) best = std::max(best, at(i, j, k));
    return best;
}

double QTable::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

Window faa_window(double theta, double thetadot, const StateGrid& grid, int radius) {
    const auto [i, j] = nearest_cell(theta, thetadot, grid);
    Window w;
    w.i_lo = std::max(0, i - radius);
    w.i_hi = std::min(grid.n_theta() - 1, i + radius);
    w.j_lo = std::max(0, j - radius);
    w.j_hi = std::min(grid.n_thetadot() - 1, j + radius);
    return w;
}

double membership(double theta, double thetadot, int i, int j, const StateGrid& grid) {
    const double d_theta = (theta - grid.theta_centers[i]) / grid.sigma_theta[i];
    const double d_rate = (thetadot - grid.thetadot_centers[j]) / grid.sigma_thetadot[j];
    return std::exp(-0.5 * d_theta * d_theta) * std::exp(-0.5 * d_rate * d_rate);
}

int select_egreedy(const QTable& Q, int i, int j, double epsilon, std::mt19937_64& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw ConfigError("select_egreedy: epsilon must be in [0, 1]");
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
        std::uniform_int_distribution<int> pick(0, Q.n_actions - 1);
        return pick(rng);
    }
    return Q.greedy_action(i, j);
}

namespace {

constexpr double kDenomGuard = 1e-300;

}  // namespace

double faa_action(const QTable& Q, double theta, double thetadot,
                  const StateGrid& grid, const ActionSet& actions, const Window& w) {
    const int neutral = actions.nearest(0.0);
    double num = 0.0, den = 0.0;
    for (int i = w.i_lo; i <= w.i_hi; ++i) {
        for (int j = w.j_lo; j <= w.j_hi; ++j) {
            const double mf = membership(theta, thetadot, i, j, grid);
            num += mf * actions.values[Q.greedy_action(i, j, neutral)];
            den += mf;
        }
    }
    if (den < kDenomGuard) throw LearningDiverged("faa_action: vanishing membership sum");
    return num / den;
}

double fuzzy_q(const QTable& Q, double theta, double thetadot, int k,
               const StateGrid& grid, const Window& w) {
    double num = 0.0, den = 0.0;
    for (int i = w.i_lo; i <= w.i_hi; ++i) {
        for (int j = w.j_lo; j <= w.j_hi; ++j) {
            const double mf = membership(theta, thetadot, i, j, grid);
            num += mf * Q.at(i, j, k);
            den += mf;
        }
    }
    if (den < kDenomGuard) throw LearningDiverged("fuzzy_q: vanishing membership sum");
    return num / den;
}

double fuzzy_max_future(const QTable& Q, double theta, double thetadot,
                        const StateGrid& grid, const Window& w) {
    double num = 0.0, den = 0.0;
    for (int i = w.i_lo; i <= w.i_hi; ++i) {
        for (int j = w.j_lo; j <= w.j_hi; ++j) {
            const double mf = membership(theta, thetadot, i, j, grid);
            num += mf * Q.max_value(i, j);
            den += mf;
        }
    }
    if (den < kDenomGuard) throw LearningDiverged("fuzzy_max_future: vanishing membership sum at theta=" + std::to_string(theta) + " rate=" + std::to_string(thetadot));
    return num / den;
}

void fql_update(QTable& Q, const Transition& tr, double alpha, double gamma,
                const StateGrid& grid, int window_radius) {
    const Window w_now = faa_window(tr.theta, tr.thetadot, grid, window_radius);
    const Window w_next = faa_window(tr.theta_next, tr.thetadot_next, grid, window_radius);

    const double future = fuzzy_max_future(Q, tr.theta_next, tr.thetadot_next, grid, w_next);
    const double current = fuzzy_q(Q, tr.theta, tr.thetadot, tr.action, grid, w_now);

    const double td = tr.reward + gamma * future - current;
    if (!std::isfinite(td)) throw LearningDiverged("fql_update: non-finite TD");

    // a shared discrete action was imposed on the whole window, so credit is
    // apportioned by normalized membership; a single unit-weight cell
    // reduces this to the plain tabular update bit for bit
    double mf_sum = 0.0;
    for (int i = w_now.i_lo; i <= w_now.i_hi; ++i)
        for (int j = w_now.j_lo; j <= w_now.j_hi; ++j)
            mf_sum += membership(tr.theta, tr.thetadot, i, j, grid);
    if (mf_sum < kDenomGuard) throw LearningDiverged("fql_update: vanishing membership sum");

    for (int i = w_now.i_lo; i <= w_now.i_hi; ++i) {
        for (int j = w_now.j_lo; j <= w_now.j_hi; ++j) {
            const double weight = membership(tr.theta, tr.thetadot, i, j, grid) / mf_sum;
            Q.at(i, j, tr.action) += alpha * (weight * td);
        }
    }
}

void fql_update_faa(QTable& Q, double theta, double thetadot, double r,
                    double theta_next, double thetadot_next,
                    double alpha, double gamma, const StateGrid& grid,
                    const ActionSet& actions, int window_radius) {
    const int kNeutralVote = actions.nearest(0.0);
    const Window w = faa_window(theta, thetadot, grid, window_radius);
    const Window w_next = faa_window(theta_next, thetadot_next, grid, window_radius);
    const int ni = w.i_hi - w.i_lo + 1;
    const int nj = w.j_hi - w.j_lo + 1;

    // snapshot votes and weights before touching the table
    std::vector<int> votes(static_cast<size_t>(ni) * nj);
    std::vector<double> weights(static_cast<size_t>(ni) * nj);
    double mf_sum = 0.0;
    double value_now = 0.0;
    for (int i = w.i_lo; i <= w.i_hi; ++i) {
        for (int j = w.j_lo; j <= w.j_hi; ++j) {
            const size_t idx = static_cast<size_t>(i - w.i_lo) * nj + (j - w.j_lo);
            const double mf = membership(theta, thetadot, i, j, grid);
            votes[idx] = Q.greedy_action(i, j, kNeutralVote);
            weights[idx] = mf;
            value_now += mf * Q.at(i, j, votes[idx]);
            mf_sum += mf;
        }
    }
    if (mf_sum < kDenomGuard) throw LearningDiverged("fql_update_faa: vanishing membership sum");
    value_now /= mf_sum;

    const double future = fuzzy_max_future(Q, theta_next, thetadot_next, grid, w_next);
    const double td = r + gamma * future - value_now;
    if (!std::isfinite(td)) throw LearningDiverged("fql_update_faa: non-finite TD");

    for (int i = w.i_lo; i <= w.i_hi; ++i) {
        for (int j = w.j_lo; j <= w.j_hi; ++j) {
            const size_t idx = static_cast<size_t>(i - w.i_lo) * nj + (j - w.j_lo);
            Q.at(i, j, votes[idx]) += alpha * td;
        }
    }
}

void ql_update(QTable& Q, int i, int j, int k, double r, int i_next, int j_next,
               double alpha, double gamma) {
    const double td = r + gamma * Q.max_value(i_next, j_next) - Q.at(i, j, k);
    if (!std::isfinite(td)) throw LearningDiverged("ql_update: non-finite TD");
    Q.at(i, j, k) += alpha * td;
}

double reward(double e_theta, double thetadot, double delta_E, double delta_E_prev,
              const RewardParams& p) {
    if (std::abs(delta_E) - std::abs(delta_E_prev) > p.jump_threshold)
        return p.jump_penalty;

    const double e = std::abs(e_theta) * (p.e_thresholds_in_degrees ? rad2deg(1.0) : 1.0);
    const double rate = std::abs(thetadot) * (p.q_thresholds_in_degrees ? rad2deg(1.0) : 1.0);

    // proximity bonuses only apply close to the desired angle; the pitch-rate
    // bonuses alone must not reward holding the wrong attitude
    double gate = 0.0;
    for (double t : p.e_thresholds) gate = std::max(gate, t);
    if (e < gate) {
        double bonus = 0.0;
        for (size_t n = 0; n < p.e_thresholds.size(); ++n)
            if (e < p.e_thresholds[n]) bonus += p.e_bonuses[n];
        for (size_t n = 0; n < p.q_thresholds.size(); ++n)
            if (rate < p.q_thresholds[n]) bonus += p.q_bonuses[n];
        return bonus;
    }
    const double qunit = p.quadratic_in_degrees ? rad2deg(1.0) : 1.0;
    const double ew = p.e_weight * std::abs(e_theta) * qunit;
    const double qw = p.q_weight * std::abs(thetadot) * qunit;
    return -(ew * ew) - (qw * qw);
}

void LearningSchedule::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must be in (0, 1)");
    if (episodes < 0) throw ConfigError("episodes must be non-negative");
    if (episode_seconds <= 0.0) throw ConfigError("episode length must be positive");
    if (epsilon0 < epsilon_floor || epsilon_floor < 0.0 || epsilon0 > 1.0)
        throw ConfigError("epsilon schedule out of range");
    if (alpha0 < alpha_floor || alpha_floor <= 0.0 || alpha0 > 1.0)
        throw ConfigError("alpha schedule out of range");
}

}  // namespace tbwsim
