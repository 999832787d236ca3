#pragma once

#include <string>
#include <vector>

namespace bubble {

// Star-shaped closed curve r(theta) = 1 + eta(theta) with
// eta = a0 + sum_k ak[k-1] cos(k theta) + bk[k-1] sin(k theta).
struct FourierShape {
    int max_mode = 2;           // K >= 2
    double a0 = 0.0;
    std::vector<double> ak;     // cos coefficients, k = 1..K
    std::vector<double> bk;     // sin coefficients, k = 1..K

    FourierShape() : ak(2, 0.0), bk(2, 0.0) {}
    explicit FourierShape(int K) : max_mode(K), ak(K, 0.0), bk(K, 0.0) {}

    static FourierShape disk(int K = 2) { return FourierShape(K); }

    double eta(double theta) const;
    double eta_d(double theta) const;
    double eta_dd(double theta) const;

    double coeff_cos(int k) const { return k == 0 ? a0 : ak.at(k - 1); }
    double coeff_sin(int k) const { return bk.at(k - 1); }
    void set_cos(int k, double v) { if (k == 0) a0 = v; else ak.at(k - 1) = v; }
    void set_sin(int k, double v) { bk.at(k - 1) = v; }

    // Shifts a0 so that the enclosed area is exactly pi.
    void normalize_area();
};

// Convex body described by its support function
// h(theta) = c0 + sum_k ck[k-1] cos(k theta) + sk[k-1] sin(k theta),
// theta being the outer normal angle. Convexity reads h'' + h >= 0.
struct SupportShape {
    int max_mode = 2;
    double c0 = 1.0;
    std::vector<double> ck;
    std::vector<double> sk;

    SupportShape() : ck(2, 0.0), sk(2, 0.0) {}
    explicit SupportShape(int K) : max_mode(K), ck(K, 0.0), sk(K, 0.0) {}

    static SupportShape disk(int K = 2) { return SupportShape(K); }

    double value(double theta) const;
    double value_dd(double theta) const;
};

// Collocation nodes of a closed curve at uniform parameter values.
// Orientation is counterclockwise, the normal points into the exterior,
// weight[j] is the arclength quadrature weight (speed * 2pi/N).
struct BoundaryDiscretization {
    int n_nodes = 0;
    std::vector<double> theta;
    std::vector<double> x, y;
    std::vector<double> tx, ty;     // unit tangent
    std::vector<double> nx, ny;     // unit outward normal
    std::vector<double> curvature;  // H, = 1 on the unit circle
    std::vector<double> speed;      // |dx/dtheta|
    std::vector<double> weight;     // arclength weights

    void resize(int n);
};

// Point on the area-pi ellipse family with semiaxes a = e^t, b = e^-t.
struct EllipsePoint {
    double t = 0.0;
    double a = 1.0;
    double b = 1.0;
};

// Curvature of a normal graph r = 1 + eta from pointwise (eta, eta', eta'').
double curvature_normal_graph(double eta, double eta_d, double eta_dd);

BoundaryDiscretization discretize(const FourierShape& shape, int n_nodes);
BoundaryDiscretization discretize(const SupportShape& shape, int n_nodes);

double perimeter(const BoundaryDiscretization& disc);
double area(const BoundaryDiscretization& disc);

// x . n at each node, x measured from the coordinate origin.
std::vector<double> position_dot_normal(const BoundaryDiscretization& disc);

// Rigid translation of the node coordinates (normals etc. unchanged).
BoundaryDiscretization translate(const BoundaryDiscretization& disc,
                                 double cx, double cy);

EllipsePoint ellipse_family(double t);
BoundaryDiscretization ellipse_discretization(double t, int n_nodes);
double ellipse_perimeter(double t);
double ellipse_log_energy(double t);

// JSON (de)serialization of shapes and CSV export of discretizations.
std::string shape_to_json(const FourierShape& shape);
std::string shape_to_json(const SupportShape& shape);
// Parses either kind; exactly one of the outputs is filled, flag tells which.
struct ParsedShape {
    bool is_fourier = true;
    FourierShape fourier;
    SupportShape support;
};
ParsedShape shape_from_json(const std::string& text);
void write_discretization_csv(const BoundaryDiscretization& disc,
                              const std::string& path,
                              const std::string& header_comment = "");

}  // namespace bubble
