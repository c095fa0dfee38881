#include <cmath>
#include <fstream>
#include <sstream>

#include "tbwsim/config.hpp"
#include "tbwsim/rl_core.hpp"

namespace tbwsim {

namespace {

constexpr const char* kMagic = "tbwsim-qtable";
constexpr int kVersion = 1;

void write_row(std::ostream& out, const std::string& name, const std::vector<double>& v) {
    out << name;
    for (double x : v) out << ' ' << format_double(x);
    out << '\n';
}

std::vector<double> read_row(std::istream& in, const std::string& expected_name) {
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("qtable file truncated, expected row '" + expected_name + "'");
    std::istringstream ls(line);
    std::string name;
    ls >> name;
    if (name != expected_name)
        throw ConfigError("qtable file: expected row '" + expected_name + "', found '" + name + "'");
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    return v;
}

void require_match(const std::vector<double>& file, const std::vector<double>& expected,
                   const std::string& what) {
    if (file.size() != expected.size())
        throw ConfigError("qtable " + what + " size mismatch");
    for (size_t i = 0; i < file.size(); ++i) {
        if (std::abs(file[i] - expected[i]) > 1e-12)
            throw ConfigError("qtable " + what + " mismatch at entry " + std::to_string(i));
    }
}

}  // namespace

void save_qtable(const QTable& Q, const StateGrid& grid, const ActionSet& actions,
                 const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write qtable file: " + path);
    out << kMagic << " v" << kVersion << '\n';
    write_row(out, "theta_centers", grid.theta_centers);
    write_row(out, "thetadot_centers", grid.thetadot_centers);
    write_row(out, "sigma_theta", grid.sigma_theta);
    write_row(out, "sigma_thetadot", grid.sigma_thetadot);
    write_row(out, "actions", actions.values);
    out << "values " << Q.n_theta << ' ' << Q.n_thetadot << ' ' << Q.n_actions << '\n';
    for (int i = 0; i < Q.n_theta; ++i) {
        for (int j = 0; j < Q.n_thetadot; ++j) {
            for (int k = 0; k < Q.n_actions; ++k) {
                out << format_double(Q.at(i, j, k)) << (k + 1 == Q.n_actions ? '\n' : ' ');
            }
        }
    }
    if (!out) throw ConfigError("failed while writing qtable file: " + path);
}

QTable load_qtable(const std::string& path, const StateGrid& grid, const ActionSet& actions) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open qtable file: " + path);
    std::string magic, version;
    in >> magic >> version;
    if (magic != kMagic) throw ConfigError("not a qtable file: " + path);
    if (version != "v1") throw ConfigError("unsupported qtable version: " + version);
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');

    require_match(read_row(in, "theta_centers"), grid.theta_centers, "theta grid");
    require_match(read_row(in, "thetadot_centers"), grid.thetadot_centers, "thetadot grid");
    require_match(read_row(in, "sigma_theta"), grid.sigma_theta, "sigma_theta");
    require_match(read_row(in, "sigma_thetadot"), grid.sigma_thetadot, "sigma_thetadot");
    require_match(read_row(in, "actions"), actions.values, "action set");

    std::string tag;
    int ni = 0, nj = 0, nk = 0;
    in >> tag >> ni >> nj >> nk;
    if (tag != "values") throw ConfigError("qtable file: missing values header");
    if (ni != grid.n_theta() || nj != grid.n_thetadot() || nk != actions.size())
        throw ConfigError("qtable dimensions do not match the configured grid");

    QTable Q = QTable::zeros(grid, actions);
    for (double& v : Q.values) {
        if (!(in >> v)) throw ConfigError("qtable file truncated in values block");
    }
    return Q;
}

}  // namespace tbwsim
