#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bubble/geometry.hpp"

namespace bubble {

// Equilibrium measure of the boundary curve. density is d(mu)/ds at the
// nodes, robin_constant is V = I(E), and the Neumann trace of the exterior
// stream function is 2*pi*density.
struct EquilibriumSolution {
    std::vector<double> density;
    double robin_constant = 0.0;
    std::vector<double> neumann_trace;
    double c0 = 0.0;                 // free Dirichlet constant, kept at 0
    double condition_estimate = 0.0; // 1-norm condition estimate of the system
};

// Solves the first-kind equation  \oint log|x - y| rho(y) ds(y) = -V  on the
// curve, augmented with \oint rho ds = 1, for (rho, V). The periodic log
// kernel is split into log(4 sin^2((s-t)/2)) with exact trigonometric
// quadrature weights plus a smooth remainder handled by the trapezoid rule.
EquilibriumSolution solve_equilibrium(const BoundaryDiscretization& disc);

// Robin constant I(E) of the curve (= robin_constant of solve_equilibrium).
double log_energy(const BoundaryDiscretization& disc);

// Stream function psi(p) = \oint log|p-y| dmu(y) + V + C0 at exterior points.
std::vector<double> eval_stream(const BoundaryDiscretization& disc,
                                const EquilibriumSolution& sol,
                                const std::vector<std::pair<double, double>>& points);

void write_solution_csv(const BoundaryDiscretization& disc,
                        const EquilibriumSolution& sol,
                        const std::string& path,
                        const std::string& header_comment = "");
std::string solution_diagnostics_json(const BoundaryDiscretization& disc,
                                      const EquilibriumSolution& sol);

}  // namespace bubble
