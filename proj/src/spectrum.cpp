#include "bubble/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "bubble/energy.hpp"
#include "bubble/geometry.hpp"

namespace bubble {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int default_nodes(int k) {
    int n = std::max(64, 16 * std::abs(k));
    if (n % 2) ++n;
    return n;
}

double functional_of_probe(double we, int k, double eps, int n_nodes) {
    FourierShape s(std::max(2, std::abs(k)));
    if (std::abs(k) >= 2) s.set_cos(std::abs(k), eps);
    s.normalize_area();
    return functional(discretize(s, n_nodes), we);
}

// Raw quadratic coefficient [F(+e) + F(-e) - 2 F(0)] / e^2, Richardson
// extrapolated over one step halving.
double raw_second_variation(double we, int k, double eps, int n_nodes) {
    if (std::abs(k) < 2)
        throw std::invalid_argument("second_variation_fd: |k| must be >= 2");
    if (!(eps > 0.0) || eps > 0.1)
        throw std::invalid_argument("second_variation_fd: eps must be in (0, 0.1]");
    if (n_nodes == 0) n_nodes = default_nodes(k);
    if (n_nodes < 16 * std::abs(k))
        throw std::invalid_argument("second_variation_fd: n_nodes must be >= 16|k|");

    double f0 = functional_of_probe(we, k, 0.0, n_nodes);
    auto quad = [&](double e) {
        double fp = functional_of_probe(we, k, e, n_nodes);
        double fm = functional_of_probe(we, k, -e, n_nodes);
        return (fp + fm - 2.0 * f0) / (e * e);
    };
    double q = quad(eps);
    double qh = quad(0.5 * eps);
    if (std::abs(q - qh) > 0.02 * std::max(1.0, std::abs(qh)))
        throw std::runtime_error(
            "second_variation_fd: step-halving inconsistency, eps too large");
    return (4.0 * qh - q) / 3.0;
}
}  // namespace

double dtn_symbol(int k) { return std::abs(k); }

ModeEigen dispersion(int k, double we) {
    double ak = std::abs(k);
    return ModeEigen{k, we, (ak - 1.0) * ((ak + 1.0) - we)};
}

std::vector<BifurcationPoint> bifurcation_points(double we_min, double we_max) {
    if (we_min > we_max)
        throw std::invalid_argument("bifurcation_points: we_min > we_max");
    std::vector<BifurcationPoint> out;
    int lo = std::max(3, (int)std::ceil(we_min - 1e-12));
    int hi = (int)std::floor(we_max + 1e-12);
    for (int m = lo; m <= hi; ++m) out.push_back(BifurcationPoint{m, m - 1});
    return out;
}

double second_variation_calibration() {
    // One-time calibration: the raw quadratic coefficient at k=2, We=0
    // divided by the dispersion value 3. Comes out as pi for the real
    // cosine basis used here.
    static const double c = raw_second_variation(0.0, 2, 1e-3, 64) / 3.0;
    return c;
}

double second_variation_fd(double we, int k, double eps, int n_nodes) {
    return raw_second_variation(we, k, eps, n_nodes) / second_variation_calibration();
}

QuarticFit ellipse_quartic_check(double we, const std::vector<double>& t_values) {
    if (t_values.size() < 3)
        throw std::invalid_argument("ellipse_quartic_check: need at least 3 t values");
    for (double t : t_values)
        if (!(t > 0.0 && t <= 0.3))
            throw std::invalid_argument("ellipse_quartic_check: t must be in (0, 0.3]");

    int n = (int)t_values.size();
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        double t = t_values[i];
        double t2 = t * t;
        A(i, 0) = t2;
        A(i, 1) = t2 * t2;
        A(i, 2) = t2 * t2 * t2;
        y(i) = ellipse_perimeter(t) + we * kPi * ellipse_log_energy(t) - kTwoPi;
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    QuarticFit fit;
    fit.c2 = c(0);
    fit.c4 = c(1);
    fit.max_resid = (A * c - y).cwiseAbs().maxCoeff();
    return fit;
}

}  // namespace bubble
