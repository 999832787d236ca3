#pragma once

#include <string>
#include <vector>

namespace bubble {

// Eigenvalue of the linearized jump operator around the disk on mode k.
struct ModeEigen {
    int k = 0;
    double we = 0.0;
    double eigenvalue = 0.0;  // (|k|-1)((|k|+1) - We)
};

struct BifurcationPoint {
    int we = 0;           // integer Weber number m >= 3
    int kernel_mode = 0;  // +-(m-1)
};

// Exterior Dirichlet-to-Neumann symbol on the unit circle: |k|.
double dtn_symbol(int k);

ModeEigen dispersion(int k, double we);

// Integer Weber numbers m >= 3 in [we_min, we_max] with nontrivial kernel.
std::vector<BifurcationPoint> bifurcation_points(double we_min, double we_max);

// Finite-difference second variation of F_We along eta = eps*cos(k theta)
// with the zero mode adjusted so that the area stays exactly pi. Returns the
// quadratic coefficient normalized to match dispersion(k, we); throws if
// step halving detects cubic contamination.
double second_variation_fd(double we, int k, double eps = 1e-3, int n_nodes = 0);

// The raw-FD-to-dispersion normalization, fixed by the k=2, We=0 run.
double second_variation_calibration();

struct QuarticFit {
    double c2 = 0.0;       // fitted t^2 coefficient of F_We(E_t) - 2 pi
    double c4 = 0.0;       // fitted t^4 coefficient
    double max_resid = 0.0;  // remainder of the (t^2, t^4, t^6) fit
};

// Compares F_We on the ellipse family (closed forms) against its expansion.
QuarticFit ellipse_quartic_check(double we, const std::vector<double>& t_values);

}  // namespace bubble
