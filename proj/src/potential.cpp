#include "bubble/potential.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"

namespace bubble {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Kress quadrature weights for \int_0^{2pi} log(4 sin^2((s-t)/2)) f(t) dt
// on a uniform grid of N = 2n points; weight depends on the index offset only.
std::vector<double> log_kernel_weights(int n_nodes) {
    int n = n_nodes / 2;
    std::vector<double> R(n_nodes);
    for (int d = 0; d < n_nodes; ++d) {
        double s = kTwoPi * d / n_nodes;
        double acc = 0.0;
        for (int m = 1; m < n; ++m) acc += std::cos(m * s) / m;
        R[d] = -kTwoPi / n * acc - kPi / (n * n) * std::cos(n * s);
    }
    return R;
}

}  // namespace

EquilibriumSolution solve_equilibrium(const BoundaryDiscretization& disc) {
    int N = disc.n_nodes;
    if (N < 4 || N % 2 != 0)
        throw std::invalid_argument("solve_equilibrium: N must be even and >= 4");
    double h = kTwoPi / N;
    std::vector<double> R = log_kernel_weights(N);

    // Unknowns: rho at the N nodes and the Robin constant V.
    // Row i: \oint log|x_i - y| rho ds + V = 0;  row N: \oint rho ds = 1.
    Eigen::MatrixXd A(N + 1, N + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N + 1);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            double smooth;
            if (i == j) {
                smooth = std::log(disc.speed[i]);
            } else {
                double dx = disc.x[i] - disc.x[j];
                double dy = disc.y[i] - disc.y[j];
                double dist = std::hypot(dx, dy);
                double sn = 2.0 * std::abs(std::sin(0.5 * (disc.theta[i] - disc.theta[j])));
                smooth = std::log(dist / sn);
            }
            A(i, j) = (0.5 * R[(i - j + N) % N] + h * smooth) * disc.speed[j];
        }
        A(i, N) = 1.0;
    }
    for (int j = 0; j < N; ++j) A(N, j) = disc.weight[j];
    A(N, N) = 0.0;
    rhs(N) = 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
        throw std::runtime_error(
            "solve_equilibrium: singular system, condition estimate " +
            std::to_string(rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity()));
    }
    Eigen::VectorXd sol = lu.solve(rhs);

    EquilibriumSolution out;
    out.density.resize(N);
    out.neumann_trace.resize(N);
    for (int j = 0; j < N; ++j) {
        out.density[j] = sol(j);
        out.neumann_trace[j] = kTwoPi * sol(j);
        if (!std::isfinite(sol(j)))
            throw std::runtime_error("solve_equilibrium: non-finite density");
    }
    out.robin_constant = sol(N);
    out.condition_estimate = 1.0 / rcond;
    return out;
}

double log_energy(const BoundaryDiscretization& disc) {
    return solve_equilibrium(disc).robin_constant;
}

std::vector<double> eval_stream(const BoundaryDiscretization& disc,
                                const EquilibriumSolution& sol,
                                const std::vector<std::pair<double, double>>& points) {
    std::vector<double> out;
    out.reserve(points.size());
    for (auto [px, py] : points) {
        // exterior test against the nearest node
        int best = 0;
        double bestd = std::numeric_limits<double>::max();
        for (int j = 0; j < disc.n_nodes; ++j) {
            double d2 = (px - disc.x[j]) * (px - disc.x[j]) +
                        (py - disc.y[j]) * (py - disc.y[j]);
            if (d2 < bestd) { bestd = d2; best = j; }
        }
        double side = (px - disc.x[best]) * disc.nx[best] +
                      (py - disc.y[best]) * disc.ny[best];
        if (side <= 0.0)
            throw std::invalid_argument("eval_stream: point not strictly exterior");
        double v = 0.0;
        for (int j = 0; j < disc.n_nodes; ++j) {
            double dist = std::hypot(px - disc.x[j], py - disc.y[j]);
            v += std::log(dist) * sol.density[j] * disc.weight[j];
        }
        out.push_back(v + sol.robin_constant + sol.c0);
    }
    return out;
}

void write_solution_csv(const BoundaryDiscretization& disc,
                        const EquilibriumSolution& sol,
                        const std::string& path,
                        const std::string& header_comment) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    if (!header_comment.empty()) f << "# " << header_comment << "\n";
    f << "theta,density,neumann_trace\n";
    f.precision(16);
    for (int j = 0; j < disc.n_nodes; ++j)
        f << disc.theta[j] << ',' << sol.density[j] << ',' << sol.neumann_trace[j] << '\n';
}

std::string solution_diagnostics_json(const BoundaryDiscretization& disc,
                                      const EquilibriumSolution& sol) {
    double flux = 0.0;
    for (int j = 0; j < disc.n_nodes; ++j)
        flux += sol.neumann_trace[j] * disc.weight[j];
    nlohmann::json j;
    j["robin_constant"] = sol.robin_constant;
    j["flux"] = flux;
    j["condition_number"] = sol.condition_estimate;
    return j.dump(2);
}

}  // namespace bubble
