#include "bubble/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace bubble {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRadiusFloor = 0.05;
constexpr double kGaugeTol = 1e-10;

// Retained Fourier modes of eta: k = 0 and k = 2..K (cos and sin), or the
// cosine harmonics of the imposed symmetry only.
struct Basis {
    struct Mode { int k; bool is_cos; };
    std::vector<Mode> modes;
};

Basis make_basis(int K, int symmetry) {
    Basis b;
    b.modes.push_back({0, true});
    if (symmetry == 0) {
        for (int k = 2; k <= K; ++k) b.modes.push_back({k, true});
        for (int k = 2; k <= K; ++k) b.modes.push_back({k, false});
    } else {
        for (int k = symmetry; k <= K; k += symmetry) b.modes.push_back({k, true});
    }
    return b;
}

Eigen::VectorXd pack(const FourierShape& s, const Basis& b) {
    Eigen::VectorXd u(b.modes.size());
    for (size_t i = 0; i < b.modes.size(); ++i) {
        auto [k, c] = b.modes[i];
        u(i) = c ? s.coeff_cos(k) : s.coeff_sin(k);
    }
    return u;
}

FourierShape unpack(const Eigen::VectorXd& u, const Basis& b, int K) {
    FourierShape s(K);
    for (size_t i = 0; i < b.modes.size(); ++i) {
        auto [k, c] = b.modes[i];
        if (c) s.set_cos(k, u(i)); else s.set_sin(k, u(i));
    }
    return s;
}

double min_radius(const FourierShape& s) {
    int m = std::max(256, 8 * s.max_mode);
    double r = std::numeric_limits<double>::max();
    for (int j = 0; j < m; ++j)
        r = std::min(r, 1.0 + s.eta(kTwoPi * j / m));
    return r;
}

bool noncircular(const FourierShape& s, double tol = 1e-6) {
    for (int k = 2; k <= s.max_mode; ++k)
        if (std::abs(s.coeff_cos(k)) > tol || std::abs(s.coeff_sin(k)) > tol)
            return true;
    return false;
}

Eigen::VectorXd residual_vec(const FourierShape& shape, double lambda,
                             double we, const SolverConfig& cfg,
                             const Basis& basis) {
    BoundaryDiscretization disc = discretize(shape, cfg.n_nodes);
    EquilibriumSolution sol = solve_equilibrium(disc);
    std::vector<double> r = jump_residual(disc, sol, we, lambda);

    int N = disc.n_nodes;
    double h = kTwoPi / N;
    Eigen::VectorXd out(basis.modes.size() + 1);
    for (size_t i = 0; i < basis.modes.size(); ++i) {
        auto [k, c] = basis.modes[i];
        double acc = 0.0;
        for (int j = 0; j < N; ++j) {
            double w = c ? std::cos(k * disc.theta[j]) : std::sin(k * disc.theta[j]);
            acc += r[j] * w;
        }
        out(i) = acc * h / (k == 0 ? kTwoPi : kPi);
    }
    out(basis.modes.size()) = area(disc) - kPi;
    return out;
}

BranchPoint make_branch_point(const FourierShape& shape, double lambda,
                              double we, const SolverConfig& cfg,
                              int symmetry) {
    BranchPoint bp;
    bp.shape = shape;
    bp.lambda = lambda;
    bp.we = we;
    bp.symmetry = symmetry;
    BoundaryDiscretization disc = discretize(shape, cfg.n_nodes);
    EquilibriumSolution sol = solve_equilibrium(disc);
    bp.report = identity_report(disc, sol, we);
    std::vector<double> r = jump_residual(disc, sol, we, lambda);
    double n2 = 0.0;
    for (int j = 0; j < disc.n_nodes; ++j) n2 += r[j] * r[j] * disc.weight[j];
    bp.jump_residual_norm = std::sqrt(n2);

    // a certified non-circular solution at We <= 2 contradicts global
    // rigidity and indicates a solver bug
    if (noncircular(shape) && we <= 2.0 && bp.jump_residual_norm < 1e-6)
        throw std::logic_error(
            "rigidity violation: non-circular solution certified at We <= 2");
    return bp;
}

}  // namespace

void SolverConfig::validate() const {
    if (max_mode < 2) throw std::invalid_argument("SolverConfig: max_mode >= 2 required");
    if (n_nodes < 4 * max_mode)
        throw std::invalid_argument("SolverConfig: n_nodes >= 4*max_mode required");
    if (newton_tol <= 0 || fd_jacobian_step <= 0 || continuation_step <= 0)
        throw std::invalid_argument("SolverConfig: tolerances must be positive");
    if (symmetry == 1 || symmetry < 0)
        throw std::invalid_argument("SolverConfig: symmetry must be 0 or >= 2");
}

std::vector<double> residual_system(const FourierShape& shape, double lambda,
                                    double we, const SolverConfig& config) {
    config.validate();
    if (std::abs(shape.coeff_cos(1)) > kGaugeTol ||
        std::abs(shape.coeff_sin(1)) > kGaugeTol)
        throw std::invalid_argument("residual_system: k=1 modes must vanish (translation gauge)");
    Basis basis = make_basis(shape.max_mode, config.symmetry);
    Eigen::VectorXd v = residual_vec(shape, lambda, we, config, basis);
    return std::vector<double>(v.data(), v.data() + v.size());
}

BranchPoint newton_solve(const FourierShape& initial, double lambda0,
                         double we, const SolverConfig& config) {
    config.validate();
    if (std::abs(initial.coeff_cos(1)) > kGaugeTol ||
        std::abs(initial.coeff_sin(1)) > kGaugeTol)
        throw std::invalid_argument("newton_solve: k=1 modes must vanish (translation gauge)");
    int K = config.max_mode;
    Basis basis = make_basis(K, config.symmetry);
    int nb = (int)basis.modes.size();

    FourierShape cur(K);
    for (int k = 0; k <= std::min(K, initial.max_mode); ++k) {
        cur.set_cos(k, initial.coeff_cos(k));
        if (k >= 1) cur.set_sin(k, initial.coeff_sin(k));
    }
    Eigen::VectorXd v(nb + 1);
    v.head(nb) = pack(cur, basis);
    v(nb) = lambda0;

    auto eval = [&](const Eigen::VectorXd& w) {
        FourierShape s = unpack(w.head(nb), basis, K);
        if (min_radius(s) < kRadiusFloor)
            throw std::invalid_argument("radius floor");
        return residual_vec(s, w(nb), we, config, basis);
    };

    Eigen::VectorXd F = eval(v);
    double fnorm = F.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < config.max_newton_iters; ++it) {
        if (fnorm < config.newton_tol) {
            FourierShape s = unpack(v.head(nb), basis, K);
            return make_branch_point(s, v(nb), we, config, config.symmetry);
        }
        // forward-difference Jacobian
        Eigen::MatrixXd J(nb + 1, nb + 1);
        double hs = config.fd_jacobian_step;
        for (int c = 0; c <= nb; ++c) {
            Eigen::VectorXd vp = v;
            vp(c) += hs;
            J.col(c) = (eval(vp) - F) / hs;
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        if (!(lu.rcond() > 1e-12))
            throw SingularJacobianError(
                "newton_solve: singular Jacobian (bifurcation point?)");
        Eigen::VectorXd dv = lu.solve(-F);

        double t = 1.0;
        bool ok = false;
        for (int half = 0; half < 12; ++half) {
            Eigen::VectorXd vt = v + t * dv;
            try {
                Eigen::VectorXd Ft = eval(vt);
                double fn = Ft.lpNorm<Eigen::Infinity>();
                if (fn < fnorm || fn < config.newton_tol) {
                    v = vt; F = Ft; fnorm = fn; ok = true;
                    break;
                }
            } catch (const std::invalid_argument&) {
                // radius floor or invalid shape: damp further
            }
            t *= 0.5;
        }
        if (!ok)
            throw DivergenceError("newton_solve: line search failed", fnorm);
    }
    if (fnorm < config.newton_tol) {
        FourierShape s = unpack(v.head(nb), basis, K);
        return make_branch_point(s, v(nb), we, config, config.symmetry);
    }
    throw DivergenceError("newton_solve: no convergence after max iterations", fnorm);
}

std::vector<BranchPoint> continue_branch(const BranchPoint& start,
                                         double we_target,
                                         const SolverConfig& config) {
    SolverConfig cfg = config;
    if (start.symmetry != 0) cfg.symmetry = start.symmetry;
    cfg.validate();
    int K = cfg.max_mode;
    Basis basis = make_basis(K, cfg.symmetry);
    int nb = (int)basis.modes.size();
    int nz = nb + 2;  // coefficients, lambda, We

    auto evalz = [&](const Eigen::VectorXd& z) {
        FourierShape s = unpack(z.head(nb), basis, K);
        if (min_radius(s) < kRadiusFloor)
            throw std::invalid_argument("radius floor");
        return residual_vec(s, z(nb), z(nb + 1), cfg, basis);
    };
    auto jacz = [&](const Eigen::VectorXd& z, const Eigen::VectorXd& F) {
        Eigen::MatrixXd J(nb + 1, nz);
        for (int c = 0; c < nz; ++c) {
            Eigen::VectorXd zp = z;
            zp(c) += cfg.fd_jacobian_step;
            J.col(c) = (evalz(zp) - F) / cfg.fd_jacobian_step;
        }
        return J;
    };

    Eigen::VectorXd z(nz);
    {
        FourierShape s0(K);
        for (int k = 0; k <= std::min(K, start.shape.max_mode); ++k) {
            s0.set_cos(k, start.shape.coeff_cos(k));
            if (k >= 1) s0.set_sin(k, start.shape.coeff_sin(k));
        }
        z.head(nb) = pack(s0, basis);
    }
    z(nb) = start.lambda;
    z(nb + 1) = start.we;

    std::vector<BranchPoint> points;
    points.push_back(start);
    points.back().arclength_param = 0.0;

    // tangent: nullspace direction of the extended Jacobian, oriented by the
    // previous tangent (initially by the We direction toward the target)
    Eigen::VectorXd tan = Eigen::VectorXd::Zero(nz);
    tan(nz - 1) = (we_target >= start.we) ? 1.0 : -1.0;
    auto tangent_at = [&](const Eigen::VectorXd& zz, const Eigen::VectorXd& prev) {
        Eigen::VectorXd F = evalz(zz);
        Eigen::MatrixXd J = jacz(zz, F);
        Eigen::MatrixXd M(nz, nz);
        M.topRows(nb + 1) = J;
        M.row(nz - 1) = prev.transpose();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nz);
        rhs(nz - 1) = 1.0;
        Eigen::VectorXd t = M.partialPivLu().solve(rhs);
        t.normalize();
        if (t.dot(prev) < 0.0) t = -t;
        return t;
    };
    tan = tangent_at(z, tan);

    double ds = cfg.continuation_step;
    double arc = 0.0;
    const int max_points = 2000;
    while ((int)points.size() < max_points) {
        double we_prev = z(nz - 1);
        if (std::abs(we_prev - we_target) < 1e-12) break;

        bool accepted = false;
        Eigen::VectorXd znew;
        int used_iters = 0;
        while (!accepted) {
            Eigen::VectorXd zp = z + ds * tan;
            Eigen::VectorXd zc = zp;
            bool converged = false;
            try {
                for (int it = 0; it < cfg.max_newton_iters; ++it) {
                    Eigen::VectorXd F = evalz(zc);
                    double orth = tan.dot(zc - zp);
                    double fn = std::max(F.lpNorm<Eigen::Infinity>(), std::abs(orth));
                    if (fn < cfg.newton_tol) { converged = true; used_iters = it; break; }
                    Eigen::MatrixXd J = jacz(zc, F);
                    Eigen::MatrixXd M(nz, nz);
                    M.topRows(nb + 1) = J;
                    M.row(nz - 1) = tan.transpose();
                    Eigen::VectorXd G(nz);
                    G.head(nb + 1) = F;
                    G(nz - 1) = orth;
                    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
                    if (!(lu.rcond() > 1e-13)) break;
                    zc += lu.solve(-G);
                }
            } catch (const std::invalid_argument&) {
                converged = false;
            }
            if (converged) {
                znew = zc;
                accepted = true;
            } else {
                ds *= 0.5;
                if (ds < cfg.min_step)
                    return points;  // branch end: step underflow
            }
        }

        // do not overshoot the target We: land exactly with a fixed-We solve
        double we_new = znew(nz - 1);
        if ((we_prev - we_target) * (we_new - we_target) < 0.0 ||
            std::abs(we_new - we_target) < 1e-12) {
            double span = we_new - we_prev;
            double frac = (std::abs(span) > 1e-15) ? (we_target - we_prev) / span : 1.0;
            Eigen::VectorXd zi = z + frac * (znew - z);
            FourierShape si = unpack(zi.head(nb), basis, K);
            BranchPoint end = newton_solve(si, zi(nb), we_target, cfg);
            arc += frac * ds;
            end.arclength_param = arc;
            points.push_back(end);
            return points;
        }

        arc += ds;
        z = znew;
        FourierShape s = unpack(z.head(nb), basis, K);
        BranchPoint bp = make_branch_point(s, z(nb), z(nz - 1), cfg, cfg.symmetry);
        bp.arclength_param = arc;
        points.push_back(bp);

        tan = tangent_at(z, tan);
        if (used_iters <= 4) ds = std::min(ds * 1.3, cfg.max_step);
    }
    return points;
}

BranchPoint branch_switch(int m, double amplitude, const SolverConfig& config) {
    if (m < 3)
        throw std::invalid_argument("branch_switch: m must be >= 3");
    SolverConfig cfg = config;
    cfg.symmetry = m - 1;
    if (cfg.max_mode < 2 * cfg.symmetry) cfg.max_mode = 2 * cfg.symmetry;
    if (cfg.n_nodes < 4 * cfg.max_mode) cfg.n_nodes = 4 * cfg.max_mode;
    cfg.validate();
    int K = cfg.max_mode;
    int s = cfg.symmetry;
    Basis basis = make_basis(K, s);
    int nb = (int)basis.modes.size();

    // pin the kernel-mode amplitude, solve for (other coefficients, lambda, We)
    int pin = -1;
    for (int i = 0; i < nb; ++i)
        if (basis.modes[i].k == s) { pin = i; break; }

    FourierShape init(K);
    init.set_cos(s, amplitude);
    init.normalize_area();

    Eigen::VectorXd v(nb + 1);  // free coefficients (pinned slot repurposed
                                // for We), then lambda
    v.head(nb) = pack(init, basis);
    v(pin) = (double)m;                       // We unknown
    v(nb) = 1.0 - 0.5 * m;                    // lambda of the nearby disk

    auto eval = [&](const Eigen::VectorXd& w) {
        Eigen::VectorXd u = w.head(nb);
        double we = u(pin);
        u(pin) = amplitude;
        FourierShape sh = unpack(u, basis, K);
        if (min_radius(sh) < kRadiusFloor)
            throw std::invalid_argument("radius floor");
        return residual_vec(sh, w(nb), we, cfg, basis);
    };

    Eigen::VectorXd F = eval(v);
    double fnorm = F.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < cfg.max_newton_iters && fnorm >= cfg.newton_tol; ++it) {
        Eigen::MatrixXd J(nb + 1, nb + 1);
        for (int c = 0; c <= nb; ++c) {
            Eigen::VectorXd vp = v;
            vp(c) += cfg.fd_jacobian_step;
            J.col(c) = (eval(vp) - F) / cfg.fd_jacobian_step;
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        if (!(lu.rcond() > 1e-13))
            throw SingularJacobianError("branch_switch: singular pinned system");
        Eigen::VectorXd dv = lu.solve(-F);
        double t = 1.0;
        bool ok = false;
        for (int half = 0; half < 12; ++half) {
            try {
                Eigen::VectorXd Ft = eval(v + t * dv);
                double fn = Ft.lpNorm<Eigen::Infinity>();
                if (fn < fnorm || fn < cfg.newton_tol) {
                    v += t * dv; F = Ft; fnorm = fn; ok = true;
                    break;
                }
            } catch (const std::invalid_argument&) {
            }
            t *= 0.5;
        }
        if (!ok) throw DivergenceError("branch_switch: line search failed", fnorm);
    }
    if (fnorm >= cfg.newton_tol)
        throw DivergenceError("branch_switch: no convergence", fnorm);

    Eigen::VectorXd u = v.head(nb);
    double we = u(pin);
    u(pin) = amplitude;
    FourierShape sh = unpack(u, basis, K);
    return make_branch_point(sh, v(nb), we, cfg, s);
}

FourierShape random_fourier_shape(int max_mode, double amplitude,
                                  std::mt19937& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    FourierShape s(max_mode);
    double total = 0.0;
    for (int k = 1; k <= max_mode; ++k) {
        s.ak[k - 1] = uni(rng);
        s.bk[k - 1] = uni(rng);
        total += std::abs(s.ak[k - 1]) + std::abs(s.bk[k - 1]);
    }
    double scale = amplitude / total;
    for (int k = 1; k <= max_mode; ++k) {
        s.ak[k - 1] *= scale;
        s.bk[k - 1] *= scale;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Gradient descent under the area constraint
// ---------------------------------------------------------------------------

namespace {

// Projects nodal samples (uniform theta) onto Fourier coefficients <= K.
void project_modes(const std::vector<double>& values, int K,
                   double& c0, std::vector<double>& ccos,
                   std::vector<double>& csin) {
    int N = (int)values.size();
    double h = kTwoPi / N;
    c0 = 0.0;
    ccos.assign(K, 0.0);
    csin.assign(K, 0.0);
    for (int j = 0; j < N; ++j) c0 += values[j];
    c0 *= h / kTwoPi;
    for (int k = 1; k <= K; ++k) {
        double ac = 0.0, as = 0.0;
        for (int j = 0; j < N; ++j) {
            double t = kTwoPi * j / N;
            ac += values[j] * std::cos(k * t);
            as += values[j] * std::sin(k * t);
        }
        ccos[k - 1] = ac * h / kPi;
        csin[k - 1] = as * h / kPi;
    }
}

FourierShape rescale_to_unit_area(const FourierShape& in) {
    FourierShape s = in;
    BoundaryDiscretization d = discretize(s, std::max(64, 4 * s.max_mode));
    double sc = std::sqrt(kPi / area(d));
    s.a0 = sc * (1.0 + s.a0) - 1.0;
    for (int k = 1; k <= s.max_mode; ++k) {
        s.ak[k - 1] *= sc;
        s.bk[k - 1] *= sc;
    }
    return s;
}

// Clips the curvature radius h''+h at the nodes and rebuilds the support
// function (the k=1 content of h is a translation and is dropped).
SupportShape project_convex(const SupportShape& in) {
    SupportShape s = in;
    int M = std::max(64, 8 * s.max_mode);
    std::vector<double> c(M);
    bool touched = false;
    for (int j = 0; j < M; ++j) {
        double t = kTwoPi * j / M;
        c[j] = s.value_dd(t) + s.value(t);
        if (c[j] < 1e-9) { c[j] = 1e-9; touched = true; }
    }
    if (!touched) {
        s.sk[0] = 0.0;
        s.ck[0] = 0.0;
        return s;
    }
    double c0;
    std::vector<double> cc, cs;
    project_modes(c, s.max_mode, c0, cc, cs);
    SupportShape out(s.max_mode);
    out.c0 = c0;
    for (int k = 2; k <= s.max_mode; ++k) {
        out.ck[k - 1] = cc[k - 1] / (1.0 - k * k);
        out.sk[k - 1] = cs[k - 1] / (1.0 - k * k);
    }
    return out;
}

SupportShape rescale_to_unit_area(const SupportShape& in) {
    SupportShape s = in;
    BoundaryDiscretization d = discretize(s, std::max(64, 4 * s.max_mode));
    double sc = std::sqrt(kPi / area(d));
    s.c0 *= sc;
    for (int k = 1; k <= s.max_mode; ++k) {
        s.ck[k - 1] *= sc;
        s.sk[k - 1] *= sc;
    }
    return s;
}

}  // namespace

MinimizeResult minimize_energy(double we, const FourierShape& initial,
                               const SolverConfig& config,
                               const MinimizeOptions& opts) {
    if (we < 0.0) throw std::invalid_argument("minimize_energy: We must be >= 0");
    int K = std::max(config.max_mode, initial.max_mode);
    int N = std::max(config.n_nodes, 4 * K);

    FourierShape shape(K);
    shape.a0 = initial.a0;
    for (int k = 1; k <= initial.max_mode; ++k) {
        shape.ak[k - 1] = initial.ak[k - 1];
        shape.bk[k - 1] = initial.bk[k - 1];
    }
    shape.ak[0] = shape.bk[0] = 0.0;  // translation gauge
    shape = rescale_to_unit_area(shape);

    MinimizeResult res;
    res.is_fourier = true;
    double tau = opts.initial_step;

    BoundaryDiscretization disc = discretize(shape, N);
    EquilibriumSolution sol = solve_equilibrium(disc);
    double F = we * kPi * sol.robin_constant + perimeter(disc);

    for (int it = 0; it < opts.max_iters; ++it) {
        std::vector<double> G = shape_gradient(disc, sol, we);
        double P = perimeter(disc);
        double lam = 0.0;
        for (int j = 0; j < N; ++j) lam += G[j] * disc.weight[j];
        lam /= P;
        double gn2 = 0.0;
        for (int j = 0; j < N; ++j)
            gn2 += (G[j] - lam) * (G[j] - lam) * disc.weight[j];
        double gnorm = std::sqrt(gn2);
        res.history.push_back({(double)it, F, gnorm});
        res.iterations = it;
        if (gnorm < opts.grad_tol) {
            res.converged = true;
            break;
        }

        // radial representation of the area-projected negative gradient
        std::vector<double> dr(N);
        for (int j = 0; j < N; ++j) {
            double r = std::hypot(disc.x[j], disc.y[j]);
            dr[j] = -(G[j] - lam) * disc.speed[j] / r;
        }
        double d0;
        std::vector<double> dc, dsn;
        project_modes(dr, K, d0, dc, dsn);
        dc[0] = dsn[0] = 0.0;
        for (int k = 2; k <= K; ++k) {
            double pre = std::max(1.0, (double)k * k - 1.0);
            dc[k - 1] /= pre;
            dsn[k - 1] /= pre;
        }

        // predicted decrease: \oint G V_n ds of the preconditioned direction
        double slope = 0.0;
        for (int j = 0; j < N; ++j) {
            double t = disc.theta[j];
            double v = d0;
            for (int k = 1; k <= K; ++k)
                v += dc[k - 1] * std::cos(k * t) + dsn[k - 1] * std::sin(k * t);
            double r = std::hypot(disc.x[j], disc.y[j]);
            slope += (G[j] - lam) * v * (r / disc.speed[j]) * disc.weight[j];
        }
        if (slope >= 0.0) {
            res.converged = false;
            break;  // stall: direction is not a descent direction
        }

        bool accepted = false;
        tau = std::min(tau * 2.0, opts.initial_step);
        while (tau > 1e-13) {
            FourierShape trial = shape;
            trial.a0 += tau * d0;
            for (int k = 2; k <= K; ++k) {
                trial.ak[k - 1] += tau * dc[k - 1];
                trial.bk[k - 1] += tau * dsn[k - 1];
            }
            if (min_radius(trial) < kRadiusFloor) { tau *= 0.5; continue; }
            trial = rescale_to_unit_area(trial);
            BoundaryDiscretization dt = discretize(trial, N);
            EquilibriumSolution st = solve_equilibrium(dt);
            double Ft = we * kPi * st.robin_constant + perimeter(dt);
            if (Ft <= F + 1e-4 * tau * slope) {
                shape = trial;
                disc = std::move(dt);
                sol = std::move(st);
                F = Ft;
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) {
            res.converged = false;
            break;  // line-search stall
        }
    }

    res.shape = shape;
    res.report = identity_report(disc, sol, we);
    return res;
}

MinimizeResult minimize_energy(double we, const SupportShape& initial,
                               const SolverConfig& config,
                               const MinimizeOptions& opts) {
    if (we < 0.0) throw std::invalid_argument("minimize_energy: We must be >= 0");
    int K = std::max(config.max_mode, initial.max_mode);
    int N = std::max(config.n_nodes, 4 * K);

    SupportShape shape(K);
    shape.c0 = initial.c0;
    for (int k = 1; k <= initial.max_mode; ++k) {
        shape.ck[k - 1] = initial.ck[k - 1];
        shape.sk[k - 1] = initial.sk[k - 1];
    }
    shape.ck[0] = shape.sk[0] = 0.0;
    shape = project_convex(shape);
    shape = rescale_to_unit_area(shape);

    MinimizeResult res;
    res.is_fourier = false;
    double tau = opts.initial_step;

    BoundaryDiscretization disc = discretize(shape, N);
    EquilibriumSolution sol = solve_equilibrium(disc);
    double F = we * kPi * sol.robin_constant + perimeter(disc);

    for (int it = 0; it < opts.max_iters; ++it) {
        std::vector<double> G = shape_gradient(disc, sol, we);
        double P = perimeter(disc);
        double lam = 0.0;
        for (int j = 0; j < N; ++j) lam += G[j] * disc.weight[j];
        lam /= P;
        double gn2 = 0.0;
        for (int j = 0; j < N; ++j)
            gn2 += (G[j] - lam) * (G[j] - lam) * disc.weight[j];
        double gnorm = std::sqrt(gn2);
        res.history.push_back({(double)it, F, gnorm});
        res.iterations = it;
        if (gnorm < opts.grad_tol) {
            res.converged = true;
            break;
        }

        // a support-function increment moves the boundary with V_n = dh
        std::vector<double> dh(N);
        for (int j = 0; j < N; ++j) dh[j] = -(G[j] - lam);
        double d0;
        std::vector<double> dc, dsn;
        project_modes(dh, K, d0, dc, dsn);
        dc[0] = dsn[0] = 0.0;
        for (int k = 2; k <= K; ++k) {
            double pre = std::max(1.0, (double)k * k - 1.0);
            dc[k - 1] /= pre;
            dsn[k - 1] /= pre;
        }
        double slope = 0.0;
        for (int j = 0; j < N; ++j) {
            double t = disc.theta[j];
            double v = d0;
            for (int k = 1; k <= K; ++k)
                v += dc[k - 1] * std::cos(k * t) + dsn[k - 1] * std::sin(k * t);
            slope += (G[j] - lam) * v * disc.weight[j];
        }
        if (slope >= 0.0) {
            res.converged = false;
            break;
        }

        bool accepted = false;
        tau = std::min(tau * 2.0, opts.initial_step);
        while (tau > 1e-13) {
            SupportShape trial = shape;
            trial.c0 += tau * d0;
            for (int k = 2; k <= K; ++k) {
                trial.ck[k - 1] += tau * dc[k - 1];
                trial.sk[k - 1] += tau * dsn[k - 1];
            }
            try {
                trial = project_convex(trial);
                trial = rescale_to_unit_area(trial);
                BoundaryDiscretization dt = discretize(trial, N);
                EquilibriumSolution st = solve_equilibrium(dt);
                double Ft = we * kPi * st.robin_constant + perimeter(dt);
                if (Ft <= F + 1e-4 * tau * slope) {
                    shape = trial;
                    disc = std::move(dt);
                    sol = std::move(st);
                    F = Ft;
                    accepted = true;
                    break;
                }
            } catch (const std::invalid_argument&) {
            }
            tau *= 0.5;
        }
        if (!accepted) {
            res.converged = false;
            break;
        }
    }

    res.support = shape;
    res.report = identity_report(disc, sol, we);
    return res;
}

}  // namespace bubble
