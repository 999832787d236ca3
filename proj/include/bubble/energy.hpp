#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bubble/geometry.hpp"
#include "bubble/potential.hpp"

namespace bubble {

// Certification record for a shape at a given Weber number.
struct EnergyReport {
    double we = 0.0;
    double perimeter = 0.0;
    double area = 0.0;
    double log_energy = 0.0;
    double functional = 0.0;      // We*pi*I(E) + P(E)
    double lambda_best = 0.0;     // Gauss-Bonnet lambda fit
    double jump_residual_norm = 0.0;  // L2 over arclength, with lambda_best

    struct Residuals {
        double flux = 0.0;
        double pohozaev = 0.0;
        double minkowski_1 = 0.0;
        double minkowski_2 = 0.0;
        double jump_gb = 0.0;
        std::optional<double> flux_l2;  // absent at We = 0
        double cauchy_schwarz_slack = 0.0;
    } residuals;
};

double weber_number(double rho, double alpha, double sigma, double R);

double functional(const BoundaryDiscretization& disc, double we);

// Pointwise jump residual -(We/2)(d_n psi)^2 + H - lambda.
std::vector<double> jump_residual(const BoundaryDiscretization& disc,
                                  const EquilibriumSolution& sol,
                                  double we, double lambda);

// lambda from integrating the jump equation with Gauss-Bonnet:
// lambda = (2 pi - (We/2) \oint (d_n psi)^2 ds) / P.
double lambda_fit(const BoundaryDiscretization& disc,
                  const EquilibriumSolution& sol, double we);

// L2(arclength) shape-gradient density G = -(We/2)(d_n psi)^2 + H;
// dF under a normal velocity field V_n is \oint G V_n ds.
std::vector<double> shape_gradient(const BoundaryDiscretization& disc,
                                   const EquilibriumSolution& sol, double we);

EnergyReport identity_report(const BoundaryDiscretization& disc,
                             const EquilibriumSolution& sol, double we);

// Psi(s) = s - We*pi*log(s/(2pi)) for s >= 2pi.
double perimeter_lower_envelope(double s, double we);

std::string report_to_json(const EnergyReport& r);

}  // namespace bubble
