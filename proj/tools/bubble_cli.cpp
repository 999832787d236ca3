// Command-line front end: every capability as a scriptable experiment with
// CSV/JSON outputs. Exit codes: 0 success, 1 criteria failed, 2 usage error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bubble/energy.hpp"
#include "bubble/geometry.hpp"
#include "bubble/potential.hpp"
#include "bubble/solve.hpp"
#include "bubble/spectrum.hpp"

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct GlobalOpts {
    int nodes = 256;
    int modes = 16;
    double tol = 1e-3;
    std::string out_dir;
    std::string format = "csv";
};

std::string resolve_out_dir(const GlobalOpts& g) {
    if (!g.out_dir.empty()) return g.out_dir;
    if (const char* env = std::getenv("BUBBLE_OUT_DIR")) return env;
    return ".";
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

// "a:b" or "a:b:step" or a single value
std::vector<double> parse_range(const std::string& s, double default_step) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
    std::vector<double> out;
    if (parts.size() == 1) {
        out.push_back(parts[0]);
    } else {
        double a = parts[0], b = parts[1];
        double step = parts.size() >= 3 ? parts[2] : default_step;
        if (step <= 0) throw std::invalid_argument("range step must be positive");
        for (double t = a; t <= b + 1e-12; t += step) out.push_back(t);
    }
    return out;
}

// init spec grammar: disk | cosK:AMP | random:seed=N
bubble::FourierShape parse_init(const std::string& spec, int modes) {
    using bubble::FourierShape;
    if (spec == "disk") return FourierShape::disk(std::max(2, modes));
    if (spec.rfind("cos", 0) == 0) {
        auto colon = spec.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("init spec: expected cosK:AMP");
        int k = std::stoi(spec.substr(3, colon - 3));
        double amp = std::stod(spec.substr(colon + 1));
        if (k < 2) throw std::invalid_argument("init spec: mode must be >= 2");
        FourierShape s(std::max(k, std::max(2, modes)));
        s.set_cos(k, amp);
        s.normalize_area();
        return s;
    }
    if (spec.rfind("random:seed=", 0) == 0) {
        unsigned seed = (unsigned)std::stoul(spec.substr(12));
        std::mt19937 rng(seed);
        FourierShape s = bubble::random_fourier_shape(std::max(2, modes), 0.15, rng);
        s.ak[0] = s.bk[0] = 0.0;
        s.normalize_area();
        return s;
    }
    throw std::invalid_argument("init spec: unknown form '" + spec + "'");
}

std::string config_header(const std::string& cmd, const GlobalOpts& g,
                          const std::string& extra) {
    std::ostringstream os;
    os << "command=" << cmd << " nodes=" << g.nodes << " modes=" << g.modes
       << " tol=" << g.tol << " format=" << g.format;
    if (!extra.empty()) os << ' ' << extra;
    return os.str();
}

std::ofstream open_out(const GlobalOpts& g, const std::string& name) {
    std::filesystem::path dir = resolve_out_dir(g);
    std::filesystem::create_directories(dir);
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot open output file " + name);
    f.precision(16);
    return f;
}

bubble::ParsedShape load_shape(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open shape file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return bubble::shape_from_json(ss.str());
}

int cmd_spectrum(const GlobalOpts& g, int kmax, const std::string& we_list) {
    auto wes = parse_list(we_list);
    auto out = open_out(g, "spectrum.csv");
    out << "# " << config_header("spectrum", g, "kmax=" + std::to_string(kmax)) << "\n";
    out << "k,we,eigenvalue_formula,eigenvalue_fd,abs_err,tag\n";
    bool ok = true;
    std::vector<std::string> failures;
    for (int k = 1; k <= kmax; ++k) {
        for (double we : wes) {
            double formula = bubble::dispersion(k, we).eigenvalue;
            std::string tag;
            if (k == 1) tag = "translation";
            else if (std::abs(formula) < 1e-12) tag = "bifurcation";
            double fd = formula, err = 0.0;
            if (k >= 2) {
                fd = bubble::second_variation_fd(we, k);
                err = std::abs(formula - fd);
                double scale = std::max(1.0, std::abs(formula));
                if (err > g.tol * scale) {
                    ok = false;
                    failures.push_back("k=" + std::to_string(k) +
                                       " we=" + std::to_string(we));
                }
            }
            out << k << ',' << we << ',' << formula << ',' << fd << ',' << err
                << ',' << tag << '\n';
        }
    }
    if (!ok) {
        std::cerr << "spectrum: tolerance breach at:\n";
        for (const auto& f : failures) std::cerr << "  " << f << "\n";
        return 1;
    }
    std::cout << "spectrum: all finite-difference eigenvalues within " << g.tol
              << " of the formula\n";
    return 0;
}

int cmd_validate(const GlobalOpts& g, const std::string& shape_file, double we) {
    bubble::ParsedShape p = load_shape(shape_file);
    bubble::BoundaryDiscretization disc =
        p.is_fourier ? bubble::discretize(p.fourier, g.nodes)
                     : bubble::discretize(p.support, g.nodes);
    bubble::EquilibriumSolution sol = bubble::solve_equilibrium(disc);
    bubble::EnergyReport r = bubble::identity_report(disc, sol, we);
    std::cout << bubble::report_to_json(r) << "\n";
    bool ok = std::abs(r.residuals.flux) < 1e-9 &&
              std::abs(r.residuals.pohozaev) < 1e-7 &&
              std::abs(r.residuals.minkowski_1) < 1e-9 &&
              std::abs(r.residuals.minkowski_2) < 1e-9 &&
              r.residuals.cauchy_schwarz_slack >= -1e-9;
    return ok ? 0 : 1;
}

int cmd_minimize(const GlobalOpts& g, double we, const std::string& init,
                 bool convex) {
    bubble::SolverConfig cfg;
    cfg.max_mode = g.modes;
    cfg.n_nodes = std::max(g.nodes, 4 * g.modes);
    bubble::MinimizeResult res;
    if (convex) {
        // convex-constrained runs live in the support-function cone; the
        // init spec seeds the matching cosine perturbation
        bubble::FourierShape f = parse_init(init, g.modes);
        bubble::SupportShape h(f.max_mode);
        for (int k = 2; k <= f.max_mode; ++k) {
            h.ck[k - 1] = f.coeff_cos(k);
            h.sk[k - 1] = f.coeff_sin(k);
        }
        res = bubble::minimize_energy(we, h, cfg);
    } else {
        res = bubble::minimize_energy(we, parse_init(init, g.modes), cfg);
    }

    auto shape_out = open_out(g, "minimize_shape.json");
    shape_out << (res.is_fourier ? bubble::shape_to_json(res.shape)
                                 : bubble::shape_to_json(res.support))
              << "\n";
    auto report_out = open_out(g, "minimize_report.json");
    report_out << bubble::report_to_json(res.report) << "\n";
    auto hist = open_out(g, "minimize_history.csv");
    hist << "# " << config_header("minimize", g, "we=" + std::to_string(we) +
                                  " init=" + init) << "\n";
    hist << "iter,functional,grad_norm\n";
    for (const auto& row : res.history)
        hist << (int)row[0] << ',' << row[1] << ',' << row[2] << '\n';

    std::cout << "minimize: We=" << we << " F=" << res.report.functional
              << " P=" << res.report.perimeter
              << " iterations=" << res.iterations
              << (res.converged ? "" : " (stalled)") << "\n";
    return 0;
}

void write_branch_csv(const GlobalOpts& g, const std::string& name,
                      const std::vector<bubble::BranchPoint>& branch,
                      const std::string& extra) {
    auto out = open_out(g, name);
    out << "# " << config_header("branch", g, extra) << "\n";
    out << "arclength_param,we,lambda,perimeter,log_energy,functional,"
           "max_mode_amplitude,jump_residual_norm,flux,pohozaev,minkowski_1,"
           "minkowski_2,flux_l2\n";
    int idx = 0;
    for (const auto& bp : branch) {
        double amp = 0.0;
        for (int k = 2; k <= bp.shape.max_mode; ++k)
            amp = std::max({amp, std::abs(bp.shape.coeff_cos(k)),
                            std::abs(bp.shape.coeff_sin(k))});
        out << bp.arclength_param << ',' << bp.we << ',' << bp.lambda << ','
            << bp.report.perimeter << ',' << bp.report.log_energy << ','
            << bp.report.functional << ',' << amp << ','
            << bp.jump_residual_norm << ',' << bp.report.residuals.flux << ','
            << bp.report.residuals.pohozaev << ','
            << bp.report.residuals.minkowski_1 << ','
            << bp.report.residuals.minkowski_2 << ','
            << (bp.report.residuals.flux_l2 ? *bp.report.residuals.flux_l2 : 0.0)
            << '\n';
        auto sj = open_out(g, "branch_point_" + std::to_string(idx++) + ".json");
        sj << bubble::shape_to_json(bp.shape) << "\n";
    }
}

int cmd_branch(const GlobalOpts& g, int m, double to, bool trivial,
               const std::string& we_range) {
    bubble::SolverConfig cfg;
    cfg.max_mode = g.modes;
    cfg.n_nodes = std::max(64, 4 * cfg.max_mode);

    std::vector<bubble::BranchPoint> branch;
    std::string extra;
    if (trivial) {
        auto range = parse_range(we_range.empty() ? "0:2.9" : we_range, 0.1);
        double a = range.front(), b = range.back();
        bubble::BranchPoint start =
            bubble::newton_solve(bubble::FourierShape::disk(cfg.max_mode),
                                 1.0 - 0.5 * a, a, cfg);
        branch = bubble::continue_branch(start, b, cfg);
        extra = "trivial we=" + we_range;
    } else {
        bubble::BranchPoint onset = bubble::branch_switch(m, 0.05, cfg);
        branch = bubble::continue_branch(onset, to, cfg);
        extra = "m=" + std::to_string(m) + " to=" + std::to_string(to);
    }
    write_branch_csv(g, "branch.csv", branch, extra);

    bool ok = true;
    for (const auto& bp : branch) {
        if (std::abs(bp.report.residuals.flux) > 1e-6 ||
            std::abs(bp.report.residuals.pohozaev) > 1e-6 ||
            std::abs(bp.report.residuals.minkowski_1) > 1e-6 ||
            std::abs(bp.report.residuals.minkowski_2) > 1e-6)
            ok = false;
        if (bp.report.residuals.flux_l2 &&
            std::abs(*bp.report.residuals.flux_l2) > 1e-6)
            ok = false;
    }
    std::cout << "branch: " << branch.size() << " points, We in ["
              << branch.front().we << ", " << branch.back().we << "]"
              << (ok ? "" : " (identity residuals above 1e-6)") << "\n";
    return ok ? 0 : 1;
}

int cmd_ellipse_scan(const GlobalOpts& g, double we, const std::string& trange) {
    auto ts = parse_range(trange, 0.02);
    auto out = open_out(g, "ellipse_scan.csv");
    out << "# " << config_header("ellipse-scan", g, "we=" + std::to_string(we)) << "\n";
    out << "t,perimeter,log_energy,functional\n";
    std::vector<double> fit_ts;
    for (double t : ts) {
        if (t == 0.0) continue;
        double P = bubble::ellipse_perimeter(t);
        double I = bubble::ellipse_log_energy(t);
        out << t << ',' << P << ',' << I << ',' << P + we * kPi * I << '\n';
        if (t > 0.0 && t <= 0.3) fit_ts.push_back(t);
    }
    if (fit_ts.size() >= 4) {
        bubble::QuarticFit fit = bubble::ellipse_quartic_check(we, fit_ts);
        double c2_target = 0.5 * kPi * (3.0 - we);
        double c4_target = kPi * (8.0 * we + 3.0) / 96.0;
        std::cout << "ellipse-scan: c2=" << fit.c2 << " (expansion "
                  << c2_target << "), c4=" << fit.c4 << " (expansion "
                  << c4_target << ")\n";
    } else {
        std::cout << "ellipse-scan: " << ts.size()
                  << " point(s) written (too few for a coefficient fit)\n";
    }
    return 0;
}

int cmd_energy(const GlobalOpts& g, const std::string& shape_file, double we) {
    bubble::ParsedShape p = load_shape(shape_file);
    bubble::BoundaryDiscretization disc =
        p.is_fourier ? bubble::discretize(p.fourier, g.nodes)
                     : bubble::discretize(p.support, g.nodes);
    bubble::EquilibriumSolution sol = bubble::solve_equilibrium(disc);
    std::cout << bubble::report_to_json(bubble::identity_report(disc, sol, we))
              << "\n";
    return 0;
}

int cmd_capacity(const GlobalOpts& g, const std::string& shape_file) {
    bubble::ParsedShape p = load_shape(shape_file);
    bubble::BoundaryDiscretization disc =
        p.is_fourier ? bubble::discretize(p.fourier, g.nodes)
                     : bubble::discretize(p.support, g.nodes);
    std::cout.precision(16);
    std::cout << bubble::log_energy(disc) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hollow-bubble shape energetics toolkit"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--nodes", g.nodes, "collocation nodes");
    app.add_option("--modes", g.modes, "Fourier modes");
    app.add_option("--tol", g.tol, "verification tolerance");
    app.add_option("--out", g.out_dir, "output directory (env BUBBLE_OUT_DIR)");
    app.add_option("--format", g.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    int kmax = 8;
    std::string we_list = "0,1,2,3,4";
    auto* sp = app.add_subcommand("spectrum", "formula vs FD eigenvalues");
    sp->add_option("--kmax", kmax, "largest mode");
    sp->add_option("--we", we_list, "comma-separated Weber numbers");

    std::string shape_file;
    double we = 1.0;
    auto* val = app.add_subcommand("validate", "identity battery on a shape file");
    val->add_option("shape", shape_file, "shape JSON file")->required();
    val->add_option("--we", we, "Weber number");

    double min_we = 1.0;
    std::string init = "disk";
    bool convex = false;
    auto* mi = app.add_subcommand("minimize", "energy descent under area constraint");
    mi->add_option("--we", min_we, "Weber number")->required();
    mi->add_option("--init", init, "disk | cosK:AMP | random:seed=N");
    mi->add_flag("--convex", convex, "support-function cone (convex bodies)");

    int m = 3;
    double to = 3.2;
    bool trivial = false;
    std::string branch_we;
    auto* br = app.add_subcommand("branch", "continuation in the Weber number");
    br->add_option("--m", m, "bifurcation index (integer >= 3)");
    br->add_option("--to", to, "target Weber number");
    br->add_flag("--trivial", trivial, "follow the disk family");
    br->add_option("--we", branch_we, "We range a:b for --trivial");

    double scan_we = 3.0;
    std::string trange = "0.02:0.25:0.02";
    auto* es = app.add_subcommand("ellipse-scan", "closed-form ellipse energies");
    es->add_option("--we", scan_we, "Weber number");
    es->add_option("--t", trange, "t grid a:b:step or single value");

    std::string en_shape;
    double en_we = 1.0;
    auto* en = app.add_subcommand("energy", "single-shape report");
    en->add_option("shape", en_shape, "shape JSON file")->required();
    en->add_option("--we", en_we, "Weber number");

    std::string cap_shape;
    auto* cap = app.add_subcommand("capacity", "logarithmic energy I(E)");
    cap->add_option("shape", cap_shape, "shape JSON file")->required();

    // accept global flags after the subcommand too
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sp->parsed()) return cmd_spectrum(g, kmax, we_list);
        if (val->parsed()) return cmd_validate(g, shape_file, we);
        if (mi->parsed()) return cmd_minimize(g, min_we, init, convex);
        if (br->parsed()) {
            if (!trivial && m < 3) {
                std::cerr << "branch: --m must be >= 3\n";
                return 2;
            }
            return cmd_branch(g, m, to, trivial, branch_we);
        }
        if (es->parsed()) return cmd_ellipse_scan(g, scan_we, trange);
        if (en->parsed()) return cmd_energy(g, en_shape, en_we);
        if (cap->parsed()) return cmd_capacity(g, cap_shape);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
