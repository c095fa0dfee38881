#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tbwsim/types.hpp"

namespace tbwsim {

// Pitch and pitch-rate grids with per-center Gaussian validity widths.
// Centers are strictly increasing and symmetric about zero; the +-10 rad
// outposts catch gross excursions and carry widths scaled to their neighbor
// distance so they stay reachable.
struct StateGrid {
    std::vector<double> theta_centers;     // rad
    std::vector<double> thetadot_centers;  // rad/s
    std::vector<double> sigma_theta;       // rad, one per theta center
    std::vector<double> sigma_thetadot;    // rad/s, one per thetadot center

    // theta: {-10, -0.024:0.002:-0.002, -0.001, 0} mirrored (29 centers);
    // thetadot: {-10, -0.04, -0.02, -0.005} mirrored (8 centers as published,
    // 9 with the zero-rate anchor, which is the working default).
    static StateGrid standard(double sigma_theta_base = 0.002,
                              double sigma_thetadot_base = 0.015,
                              bool insert_zero_rate = true);

    void validate() const;
    int n_theta() const { return static_cast<int>(theta_centers.size()); }
    int n_thetadot() const { return static_cast<int>(thetadot_centers.size()); }
};

// Index of the closest center on each axis; ties break toward the lower index.
std::pair<int, int> nearest_cell(double theta, double thetadot, const StateGrid& grid);

// 21 elevator deflections, -0.25 to +0.25 rad in 0.025 steps.
struct ActionSet {
    std::vector<double> values;

    static ActionSet standard();
    int nearest(double delta_E) const;  // low-tie
    int size() const { return static_cast<int>(values.size()); }
};

// Dense value table over (theta cell, thetadot cell, action).
struct QTable {
    int n_theta = 0, n_thetadot = 0, n_actions = 0;
    std::vector<double> values;  // row-major [i][j][k]

    static QTable zeros(const StateGrid& grid, const ActionSet& actions);

    double& at(int i, int j, int k) {
        return values[static_cast<size_t>((i * n_thetadot + j)) * n_actions + k];
    }
    double at(int i, int j, int k) const {
        return values[static_cast<size_t>((i * n_thetadot + j)) * n_actions + k];
    }
    // argmax over k; ties break toward `preferred` when given, else toward
    // the lowest index
    int greedy_action(int i, int j, int preferred = -1) const;
    double max_value(int i, int j) const;
    double max_abs() const;
};

// Inclusive index window [i_lo, i_hi] x [j_lo, j_hi].
struct Window {
    int i_lo = 0, i_hi = 0, j_lo = 0, j_hi = 0;
};

// Adjacent cells around the nearest center, radius 2 by default, clipped to
// the grid bounds.
Window faa_window(double theta, double thetadot, const StateGrid& grid, int radius = 2);

// Product of the two Gaussian validity functions for cell (i, j).
double membership(double theta, double thetadot, int i, int j, const StateGrid& grid);

// Epsilon-greedy over the discrete actions of one cell.
int select_egreedy(const QTable& Q, int i, int j, double epsilon, std::mt19937_64& rng);

// Continuous action: membership-weighted mean of the per-cell greedy actions
// over the window. Always lies inside the convex hull of those actions.
double faa_action(const QTable& Q, double theta, double thetadot,
                  const StateGrid& grid, const ActionSet& actions, const Window& window);

// Membership-weighted mean of Q[i][j][k] over the window.
double fuzzy_q(const QTable& Q, double theta, double thetadot, int k,
               const StateGrid& grid, const Window& window);

// Membership-weighted mean of the per-cell maxima over the window.
double fuzzy_max_future(const QTable& Q, double theta, double thetadot,
                        const StateGrid& grid, const Window& window);

struct Transition {
    double theta = 0.0, thetadot = 0.0;  // state at t (grid coordinates)
    int action = 0;                      // executed discrete action index
    double reward = 0.0;
    double theta_next = 0.0, thetadot_next = 0.0;
};

// Fuzzy TD update for a shared discrete action (exploration steps): the TD
// target blends the fuzzy value at t and the fuzzy optimal future value at
// t+1; every window cell receives its normalized-membership share of
// alpha * TD at the executed action index. Throws LearningDiverged on a
// non-finite TD.
void fql_update(QTable& Q, const Transition& tr, double alpha, double gamma,
                const StateGrid& grid, int window_radius = 2);

// Fuzzy TD update for a blended (FAA) action: each window cell contributed
// its own greedy action to the blend and is credited on that column. The
// fuzzy value of the composite action is the membership-weighted mean of
// each cell's value of its own vote.
void fql_update_faa(QTable& Q, double theta, double thetadot, double r,
                    double theta_next, double thetadot_next,
                    double alpha, double gamma, const StateGrid& grid,
                    const ActionSet& actions, int window_radius = 2);

// Plain Watkins update on a single cell.
void ql_update(QTable& Q, int i, int j, int k, double reward, int i_next, int j_next,
               double alpha, double gamma);

// Shaped reward. An elevator-magnitude jump larger than jump_threshold
// overrides everything; close to the desired angle the proximity bonuses
// accumulate; everywhere else the quadratic shortfall applies. The bonus
// thresholds carry degree marks in their defining conditions and default to
// degrees; the quadratic weights multiply the raw radian states.
struct RewardParams {
    double jump_threshold = 0.1;     // rad
    double jump_penalty = -10000.0;
    std::vector<double> e_thresholds{0.05, 0.02};          // deg (or rad)
    std::vector<double> e_bonuses{300.0, 300.0};
    std::vector<double> q_thresholds{0.04, 0.02, 0.005};   // deg/s (or rad/s)
    std::vector<double> q_bonuses{400.0, 600.0, 800.0};
    double e_weight = 100.0;  // quadratic weights
    double q_weight = 40.0;
    // the pitch-error rings carry degree marks and match the tracking errors
    // the controller reaches; the rate rings only make sense against raw
    // rad/s states; the quadratic multiplies raw radian states
    bool e_thresholds_in_degrees = true;
    bool q_thresholds_in_degrees = false;
    bool quadratic_in_degrees = false;
};

double reward(double e_theta, double thetadot, double delta_E, double delta_E_prev,
              const RewardParams& params);

// Epsilon and learning-rate schedules, decayed linearly and floored. The
// published decay constants land exactly on the floors after 20000 episodes
// (0.1 - 3e-6 * 20000 = 0.04, 0.02 - 9e-7 * 20000 = 0.002), so the decay
// counts episodes; a per-step variant is kept switchable.
struct LearningSchedule {
    double epsilon0 = 0.1, epsilon_decay = 3e-6, epsilon_floor = 0.04;
    double alpha0 = 0.02, alpha_decay = 9e-7, alpha_floor = 0.002;
    double gamma = 0.99;
    int episodes = 20000;
    double episode_seconds = 5.0;
    bool decay_per_episode = true;

    double epsilon_at(std::int64_t tick) const {
        const double e = epsilon0 - epsilon_decay * static_cast<double>(tick);
        return e < epsilon_floor ? epsilon_floor : e;
    }
    double alpha_at(std::int64_t tick) const {
        const double a = alpha0 - alpha_decay * static_cast<double>(tick);
        return a < alpha_floor ? alpha_floor : a;
    }
    void validate() const;
};

// Versioned text persistence with the grid, sigmas and action list in the
// header. Loading validates compatibility and rejects mismatches.
void save_qtable(const QTable& Q, const StateGrid& grid, const ActionSet& actions,
                 const std::string& path);
QTable load_qtable(const std::string& path, const StateGrid& grid, const ActionSet& actions);

}  // namespace tbwsim
