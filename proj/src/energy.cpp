#include "bubble/energy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace bubble {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double integrate(const BoundaryDiscretization& disc,
                 const std::vector<double>& f) {
    double s = 0.0;
    for (int j = 0; j < disc.n_nodes; ++j) s += f[j] * disc.weight[j];
    return s;
}
}  // namespace

double weber_number(double rho, double alpha, double sigma, double R) {
    if (sigma <= 0.0 || R <= 0.0)
        throw std::invalid_argument("weber_number: sigma and R must be positive");
    return rho * alpha * alpha / (sigma * R);
}

double functional(const BoundaryDiscretization& disc, double we) {
    if (we < 0.0) throw std::invalid_argument("functional: We must be >= 0");
    return we * kPi * log_energy(disc) + perimeter(disc);
}

std::vector<double> jump_residual(const BoundaryDiscretization& disc,
                                  const EquilibriumSolution& sol,
                                  double we, double lambda) {
    std::vector<double> r(disc.n_nodes);
    for (int j = 0; j < disc.n_nodes; ++j) {
        double q = sol.neumann_trace[j];
        r[j] = -0.5 * we * q * q + disc.curvature[j] - lambda;
    }
    return r;
}

double lambda_fit(const BoundaryDiscretization& disc,
                  const EquilibriumSolution& sol, double we) {
    double s2 = 0.0;
    for (int j = 0; j < disc.n_nodes; ++j)
        s2 += sol.neumann_trace[j] * sol.neumann_trace[j] * disc.weight[j];
    return (kTwoPi - 0.5 * we * s2) / perimeter(disc);
}

std::vector<double> shape_gradient(const BoundaryDiscretization& disc,
                                   const EquilibriumSolution& sol, double we) {
    std::vector<double> g(disc.n_nodes);
    for (int j = 0; j < disc.n_nodes; ++j) {
        double q = sol.neumann_trace[j];
        g[j] = -0.5 * we * q * q + disc.curvature[j];
    }
    return g;
}

EnergyReport identity_report(const BoundaryDiscretization& disc,
                             const EquilibriumSolution& sol, double we) {
    EnergyReport r;
    r.we = we;
    r.perimeter = perimeter(disc);
    r.area = area(disc);
    r.log_energy = sol.robin_constant;
    r.functional = we * kPi * r.log_energy + r.perimeter;
    r.lambda_best = lambda_fit(disc, sol, we);

    std::vector<double> xn = position_dot_normal(disc);
    double flux = 0.0, poh = 0.0, mink1 = 0.0, mink2 = 0.0, s2 = 0.0;
    for (int j = 0; j < disc.n_nodes; ++j) {
        double q = sol.neumann_trace[j];
        double w = disc.weight[j];
        flux += q * w;
        poh += xn[j] * q * q * w;
        mink1 += xn[j] * w;
        mink2 += disc.curvature[j] * xn[j] * w;
        s2 += q * q * w;
    }
    r.residuals.flux = flux - kTwoPi;
    r.residuals.pohozaev = poh - kTwoPi;
    r.residuals.minkowski_1 = mink1 - 2.0 * r.area;
    r.residuals.minkowski_2 = mink2 - r.perimeter;
    r.residuals.jump_gb = -0.5 * we * s2 + kTwoPi - r.lambda_best * r.perimeter;
    if (we > 0.0) {
        double target = r.perimeter - r.perimeter * r.perimeter / (kPi * we) + 4.0 * kPi / we;
        r.residuals.flux_l2 = s2 - target;
    }
    r.residuals.cauchy_schwarz_slack = s2 - 4.0 * kPi * kPi / r.perimeter;

    std::vector<double> jr = jump_residual(disc, sol, we, r.lambda_best);
    double n2 = 0.0;
    for (int j = 0; j < disc.n_nodes; ++j) n2 += jr[j] * jr[j] * disc.weight[j];
    r.jump_residual_norm = std::sqrt(n2);
    return r;
}

double perimeter_lower_envelope(double s, double we) {
    if (s < kTwoPi - 1e-12)
        throw std::invalid_argument("perimeter_lower_envelope: s must be >= 2 pi");
    return s - we * kPi * std::log(s / kTwoPi);
}

std::string report_to_json(const EnergyReport& r) {
    nlohmann::json j;
    j["we"] = r.we;
    j["perimeter"] = r.perimeter;
    j["area"] = r.area;
    j["log_energy"] = r.log_energy;
    j["functional"] = r.functional;
    j["lambda_best"] = r.lambda_best;
    j["jump_residual_norm"] = r.jump_residual_norm;
    nlohmann::json res;
    res["flux"] = r.residuals.flux;
    res["pohozaev"] = r.residuals.pohozaev;
    res["minkowski_1"] = r.residuals.minkowski_1;
    res["minkowski_2"] = r.residuals.minkowski_2;
    res["jump_gb"] = r.residuals.jump_gb;
    if (r.residuals.flux_l2)
        res["flux_l2"] = *r.residuals.flux_l2;
    else
        res["flux_l2"] = nullptr;
    res["cauchy_schwarz_slack"] = r.residuals.cauchy_schwarz_slack;
    j["identity_residuals"] = res;
    return j.dump(2);
}

}  // namespace bubble
