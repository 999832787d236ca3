#pragma once

#include <array>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bubble/energy.hpp"
#include "bubble/geometry.hpp"

namespace bubble {

struct SolverConfig {
    int max_mode = 16;            // K
    int n_nodes = 128;            // N >= 4K
    double newton_tol = 1e-10;    // residual inf-norm
    int max_newton_iters = 25;
    double fd_jacobian_step = 1e-6;
    double continuation_step = 0.05;
    double min_step = 1e-4;
    double max_step = 0.25;
    int symmetry = 0;             // 0 = none; s >= 2 restricts eta to cos(j*s*theta)

    void validate() const;
};

struct BranchPoint {
    double we = 0.0;
    double lambda = 0.0;
    FourierShape shape;
    double jump_residual_norm = 0.0;
    EnergyReport report;
    double arclength_param = 0.0;
    int symmetry = 0;
};

// Square residual of the overdetermined problem in Fourier coefficients:
// projections of -(We/2)(d_n psi)^2 + H - lambda onto the retained modes
// (k = 0 and 2..K; cos-only under symmetry) plus the area constraint.
// Shapes with a nonzero k=1 mode are rejected (translation gauge).
std::vector<double> residual_system(const FourierShape& shape, double lambda,
                                    double we, const SolverConfig& config);

// Thrown when Newton hits a singular Jacobian (bifurcation point).
struct SingularJacobianError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Thrown on non-convergence; carries the last residual norm.
struct DivergenceError : std::runtime_error {
    double last_residual;
    DivergenceError(const std::string& msg, double r)
        : std::runtime_error(msg), last_residual(r) {}
};

BranchPoint newton_solve(const FourierShape& initial, double lambda0,
                         double we, const SolverConfig& config);

// Pseudo-arclength continuation in (shape, lambda, We) from a converged
// point until We reaches we_target. Folds are traversed.
std::vector<BranchPoint> continue_branch(const BranchPoint& start,
                                         double we_target,
                                         const SolverConfig& config);

// Lands on the non-circular branch emanating at integer We = m >= 3 by
// pinning the kernel-mode amplitude and solving for We; symmetry m-1 is
// imposed on the result.
BranchPoint branch_switch(int m, double amplitude, const SolverConfig& config);

struct MinimizeOptions {
    double grad_tol = 1e-7;   // on the area-projected gradient L2 norm
    int max_iters = 5000;
    double initial_step = 0.2;
};

struct MinimizeResult {
    bool is_fourier = true;
    FourierShape shape;
    SupportShape support;
    EnergyReport report;
    bool converged = false;
    int iterations = 0;
    // per accepted iterate: (iter, F_We, projected gradient norm)
    std::vector<std::array<double, 3>> history;
};

// Projected gradient descent on F_We at fixed area pi (unconstrained class).
MinimizeResult minimize_energy(double we, const FourierShape& initial,
                               const SolverConfig& config,
                               const MinimizeOptions& opts = {});
// Convex-constrained variant in the support function.
MinimizeResult minimize_energy(double we, const SupportShape& initial,
                               const SolverConfig& config,
                               const MinimizeOptions& opts = {});

// Random star-shaped perturbation with sum of |coefficients| = amplitude.
FourierShape random_fourier_shape(int max_mode, double amplitude,
                                  std::mt19937& rng);

}  // namespace bubble
