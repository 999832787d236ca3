#include "bubble/geometry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace bubble {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double FourierShape::eta(double theta) const {
    double v = a0;
    for (int k = 1; k <= max_mode; ++k)
        v += ak[k - 1] * std::cos(k * theta) + bk[k - 1] * std::sin(k * theta);
    return v;
}

double FourierShape::eta_d(double theta) const {
    double v = 0.0;
    for (int k = 1; k <= max_mode; ++k)
        v += k * (-ak[k - 1] * std::sin(k * theta) + bk[k - 1] * std::cos(k * theta));
    return v;
}

double FourierShape::eta_dd(double theta) const {
    double v = 0.0;
    for (int k = 1; k <= max_mode; ++k)
        v -= k * k * (ak[k - 1] * std::cos(k * theta) + bk[k - 1] * std::sin(k * theta));
    return v;
}

void FourierShape::normalize_area() {
    // area = pi (1+a0)^2 + (pi/2) sum (ak^2 + bk^2); solve for a0.
    double s = 0.0;
    for (int k = 1; k <= max_mode; ++k)
        s += ak[k - 1] * ak[k - 1] + bk[k - 1] * bk[k - 1];
    double arg = 1.0 - 0.5 * s;
    if (arg <= 0.0)
        throw std::invalid_argument("normalize_area: perturbation too large for unit area");
    a0 = std::sqrt(arg) - 1.0;
}

double SupportShape::value(double theta) const {
    double v = c0;
    for (int k = 1; k <= max_mode; ++k)
        v += ck[k - 1] * std::cos(k * theta) + sk[k - 1] * std::sin(k * theta);
    return v;
}

double SupportShape::value_dd(double theta) const {
    double v = 0.0;
    for (int k = 1; k <= max_mode; ++k)
        v -= k * k * (ck[k - 1] * std::cos(k * theta) + sk[k - 1] * std::sin(k * theta));
    return v;
}

void BoundaryDiscretization::resize(int n) {
    n_nodes = n;
    theta.assign(n, 0.0);
    x.assign(n, 0.0); y.assign(n, 0.0);
    tx.assign(n, 0.0); ty.assign(n, 0.0);
    nx.assign(n, 0.0); ny.assign(n, 0.0);
    curvature.assign(n, 0.0);
    speed.assign(n, 0.0);
    weight.assign(n, 0.0);
}

double curvature_normal_graph(double eta, double eta_d, double eta_dd) {
    double r = 1.0 + eta;
    if (r <= 0.0)
        throw std::invalid_argument("curvature_normal_graph: radius 1+eta must be positive");
    double num = r * r + 2.0 * eta_d * eta_d - r * eta_dd;
    double den = r * r + eta_d * eta_d;
    return num / (den * std::sqrt(den));
}

static void check_nodes(int n_nodes, int max_mode) {
    if (n_nodes < 4 || n_nodes % 2 != 0)
        throw std::invalid_argument("discretize: n_nodes must be even and >= 4");
    if (n_nodes < 4 * max_mode)
        throw std::invalid_argument("discretize: n_nodes must be >= 4 * max_mode");
}

BoundaryDiscretization discretize(const FourierShape& shape, int n_nodes) {
    check_nodes(n_nodes, shape.max_mode);
    // Positive-radius check on a finer grid than the collocation one.
    int m = 4 * n_nodes;
    for (int j = 0; j < m; ++j) {
        if (1.0 + shape.eta(kTwoPi * j / m) <= 0.0)
            throw std::invalid_argument("discretize: radius 1+eta is not positive");
    }

    BoundaryDiscretization d;
    d.resize(n_nodes);
    double h = kTwoPi / n_nodes;
    for (int j = 0; j < n_nodes; ++j) {
        double t = h * j;
        double e = shape.eta(t), ed = shape.eta_d(t), edd = shape.eta_dd(t);
        double r = 1.0 + e;
        double ct = std::cos(t), st = std::sin(t);
        d.theta[j] = t;
        d.x[j] = r * ct;
        d.y[j] = r * st;
        double xd = ed * ct - r * st;
        double yd = ed * st + r * ct;
        double sp = std::hypot(xd, yd);
        d.speed[j] = sp;
        d.tx[j] = xd / sp;
        d.ty[j] = yd / sp;
        d.nx[j] = d.ty[j];
        d.ny[j] = -d.tx[j];
        d.curvature[j] = curvature_normal_graph(e, ed, edd);
        d.weight[j] = sp * h;
    }
    return d;
}

BoundaryDiscretization discretize(const SupportShape& shape, int n_nodes) {
    check_nodes(n_nodes, shape.max_mode);
    int m = 4 * n_nodes;
    for (int j = 0; j < m; ++j) {
        double t = kTwoPi * j / m;
        if (shape.value(t) <= 0.0)
            throw std::invalid_argument("discretize: support function must be positive");
        if (shape.value_dd(t) + shape.value(t) < 0.0)
            throw std::invalid_argument("discretize: convexity h''+h >= 0 violated");
    }

    BoundaryDiscretization d;
    d.resize(n_nodes);
    double h = kTwoPi / n_nodes;
    for (int j = 0; j < n_nodes; ++j) {
        double t = h * j;
        double hv = shape.value(t);
        double hd = 0.0;
        for (int k = 1; k <= shape.max_mode; ++k)
            hd += k * (-shape.ck[k - 1] * std::sin(k * t) + shape.sk[k - 1] * std::cos(k * t));
        double rc = shape.value_dd(t) + hv;  // radius of curvature
        double ct = std::cos(t), st = std::sin(t);
        d.theta[j] = t;
        // x(theta) = h n + h' n^perp with n = (cos, sin) the outer normal.
        d.x[j] = hv * ct - hd * st;
        d.y[j] = hv * st + hd * ct;
        d.nx[j] = ct;
        d.ny[j] = st;
        d.tx[j] = -st;
        d.ty[j] = ct;
        d.speed[j] = rc;
        if (rc <= 0.0)
            throw std::invalid_argument("discretize: flat segment (h''+h = 0) at a node");
        d.curvature[j] = 1.0 / rc;
        d.weight[j] = rc * h;
    }
    return d;
}

double perimeter(const BoundaryDiscretization& disc) {
    double p = 0.0;
    for (double w : disc.weight) p += w;
    return p;
}

double area(const BoundaryDiscretization& disc) {
    // divergence form: |E| = 1/2 \oint x.n ds
    double a = 0.0;
    for (int j = 0; j < disc.n_nodes; ++j)
        a += (disc.x[j] * disc.nx[j] + disc.y[j] * disc.ny[j]) * disc.weight[j];
    return 0.5 * a;
}

std::vector<double> position_dot_normal(const BoundaryDiscretization& disc) {
    std::vector<double> v(disc.n_nodes);
    for (int j = 0; j < disc.n_nodes; ++j)
        v[j] = disc.x[j] * disc.nx[j] + disc.y[j] * disc.ny[j];
    return v;
}

BoundaryDiscretization translate(const BoundaryDiscretization& disc,
                                 double cx, double cy) {
    BoundaryDiscretization d = disc;
    for (int j = 0; j < d.n_nodes; ++j) {
        d.x[j] += cx;
        d.y[j] += cy;
    }
    return d;
}

EllipsePoint ellipse_family(double t) {
    if (std::abs(t) >= 5.0)
        throw std::invalid_argument("ellipse_family: |t| must be < 5");
    return EllipsePoint{t, std::exp(t), std::exp(-t)};
}

BoundaryDiscretization ellipse_discretization(double t, int n_nodes) {
    EllipsePoint e = ellipse_family(t);
    if (n_nodes < 4 || n_nodes % 2 != 0)
        throw std::invalid_argument("ellipse_discretization: n_nodes must be even and >= 4");
    BoundaryDiscretization d;
    d.resize(n_nodes);
    double h = kTwoPi / n_nodes;
    for (int j = 0; j < n_nodes; ++j) {
        double th = h * j;
        double ct = std::cos(th), st = std::sin(th);
        double xd = -e.a * st, yd = e.b * ct;
        double sp = std::hypot(xd, yd);
        d.theta[j] = th;
        d.x[j] = e.a * ct;
        d.y[j] = e.b * st;
        d.speed[j] = sp;
        d.tx[j] = xd / sp;
        d.ty[j] = yd / sp;
        d.nx[j] = d.ty[j];
        d.ny[j] = -d.tx[j];
        d.curvature[j] = e.a * e.b / (sp * sp * sp);
        d.weight[j] = sp * h;
    }
    return d;
}

double ellipse_perimeter(double t) {
    if (std::abs(t) >= 5.0)
        throw std::invalid_argument("ellipse_perimeter: |t| must be < 5");
    // Periodic trapezoid on an analytic integrand converges geometrically;
    // refine until two consecutive levels agree to 1e-13.
    auto trap = [t](int n) {
        double s = 0.0;
        double e2t = std::exp(2.0 * t), em2t = std::exp(-2.0 * t);
        for (int j = 0; j < n; ++j) {
            double th = kTwoPi * j / n;
            double st = std::sin(th), ct = std::cos(th);
            s += std::sqrt(e2t * st * st + em2t * ct * ct);
        }
        return s * kTwoPi / n;
    };
    double prev = trap(64);
    for (int n = 128; n <= 1 << 16; n *= 2) {
        double cur = trap(n);
        if (std::abs(cur - prev) < 1e-13) return cur;
        prev = cur;
    }
    return prev;
}

double ellipse_log_energy(double t) {
    if (!std::isfinite(t))
        throw std::invalid_argument("ellipse_log_energy: t must be finite");
    // cap = (a+b)/2 = cosh t
    return -std::log(std::cosh(t));
}

std::string shape_to_json(const FourierShape& shape) {
    nlohmann::json j;
    j["kind"] = "fourier";
    j["max_mode"] = shape.max_mode;
    j["a0"] = shape.a0;
    j["ak"] = shape.ak;
    j["bk"] = shape.bk;
    return j.dump(2);
}

std::string shape_to_json(const SupportShape& shape) {
    nlohmann::json j;
    j["kind"] = "support";
    j["max_mode"] = shape.max_mode;
    j["c0"] = shape.c0;
    j["ck"] = shape.ck;
    j["sk"] = shape.sk;
    return j.dump(2);
}

ParsedShape shape_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("shape_from_json: ") + e.what());
    }
    ParsedShape out;
    std::string kind = j.at("kind").get<std::string>();
    int K = j.at("max_mode").get<int>();
    if (K < 2) throw std::invalid_argument("shape_from_json: max_mode must be >= 2");
    if (kind == "fourier") {
        out.is_fourier = true;
        out.fourier = FourierShape(K);
        out.fourier.a0 = j.at("a0").get<double>();
        out.fourier.ak = j.at("ak").get<std::vector<double>>();
        out.fourier.bk = j.at("bk").get<std::vector<double>>();
        if ((int)out.fourier.ak.size() != K || (int)out.fourier.bk.size() != K)
            throw std::invalid_argument("shape_from_json: coefficient length != max_mode");
        for (double c : out.fourier.ak)
            if (!std::isfinite(c)) throw std::invalid_argument("shape_from_json: non-finite coefficient");
        for (double c : out.fourier.bk)
            if (!std::isfinite(c)) throw std::invalid_argument("shape_from_json: non-finite coefficient");
    } else if (kind == "support") {
        out.is_fourier = false;
        out.support = SupportShape(K);
        out.support.c0 = j.at("c0").get<double>();
        out.support.ck = j.at("ck").get<std::vector<double>>();
        out.support.sk = j.at("sk").get<std::vector<double>>();
        if ((int)out.support.ck.size() != K || (int)out.support.sk.size() != K)
            throw std::invalid_argument("shape_from_json: coefficient length != max_mode");
    } else {
        throw std::invalid_argument("shape_from_json: unknown kind '" + kind + "'");
    }
    return out;
}

void write_discretization_csv(const BoundaryDiscretization& disc,
                              const std::string& path,
                              const std::string& header_comment) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    if (!header_comment.empty()) f << "# " << header_comment << "\n";
    f << "theta,x,y,nx,ny,H,speed\n";
    f.precision(16);
    for (int j = 0; j < disc.n_nodes; ++j)
        f << disc.theta[j] << ',' << disc.x[j] << ',' << disc.y[j] << ','
          << disc.nx[j] << ',' << disc.ny[j] << ','
          << disc.curvature[j] << ',' << disc.speed[j] << '\n';
}

}  // namespace bubble
