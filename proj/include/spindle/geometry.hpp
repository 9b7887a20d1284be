#pragma once

#include <functional>
#include <vector>

#include "spindle/types.hpp"

namespace spindle {

// Spindle torus in the 7-D family: squared radius s, tube-center distance t,
// center x0, axis direction given by angles (alpha, beta), and the surface
// component (apple = exterior, lemon = interior).
struct TorusParams {
    double s = 4.0;
    double t = 1.0;
    Vec3 x0 = Vec3::Zero();
    double alpha = 0.0;
    double beta = 0.0;
    SurfaceKind kind = SurfaceKind::Apple;

    void validate() const;  // throws InvalidParamsError unless s > t^2 > 0
};

// Rotation R = Rz(alpha) * Rx(beta), the rows r_i of R^T, their angle
// derivatives, and the rank-2 projector A = r1^T r1 + r2^T r2 onto the
// plane normal to the torus axis.
struct LocalFrame {
    Mat3 R;
    Vec3 r1, r2, r3;        // rows of R^T (columns of R)
    Vec3 r1a, r2a;          // d/dalpha of r1, r2
    Vec3 r1b, r2b;          // d/dbeta of r1, r2
    Mat3 A;

    Vec3 to_local(const Vec3& xT) const { return R.transpose() * xT; }
};

LocalFrame rotation_matrix(double alpha, double beta);

// g = sqrt(x'^2 + y'^2) (cylindrical radius about the axis), h = |x - x0|^2 + t^2.
struct ScalarFields {
    double g;
    double h;
};
ScalarFields scalar_fields(const TorusParams& p, const Vec3& x);

// Defining function of the surface: (g + (-1)^j t)^2 + z'^2 - s,
// j = 1 apple, j = 2 lemon.  Throws DegeneratePointError when g = 0.
double psi(const TorusParams& p, const Vec3& x);

// Closed-form gradient 2 (I -+ (t/g) A) x_T (- apple, + lemon).
Vec3 grad_psi(const TorusParams& p, const Vec3& x);

// The two self-intersection points x0 +- sqrt(s - t^2) R e3.
std::pair<Vec3, Vec3> singular_points(const TorusParams& p);

// True iff s > t^2 and both singular points lie strictly outside the closed
// unit ball.
bool in_parameter_set_Y(const TorusParams& p);

struct QuadratureSpec {
    int nPsi = 128;
    int nTheta = 128;
};

struct SurfacePoint {
    Vec3 x;       // ambient point
    Vec3 xT;      // x - x0
    Vec3 xPrime;  // R^T (x - x0)
    double theta;
    double psi;
    double weight;  // area weight, zero where clipped
};

struct SurfaceQuadrature {
    std::vector<SurfacePoint> points;
    double total_weight() const;
};

using RegionPredicate = std::function<bool(const Vec3&)>;

inline RegionPredicate clip_none() {
    return [](const Vec3&) { return true; };
}
inline RegionPredicate clip_unit_ball() {
    return [](const Vec3& x) { return x.squaredNorm() < 1.0; };
}

// Quadrature over the surface of revolution: trapezoid in the generator angle
// psi, midpoint in the revolution angle theta.  Weights sum to the surface
// area as the rule refines; clipped points keep zero weight.
SurfaceQuadrature parametrize_surface(const TorusParams& p, const QuadratureSpec& quad,
                                      const RegionPredicate& clip);

// Analytic surface areas of the full apple / lemon.
double analytic_area(SurfaceKind kind, double s, double t);

}  // namespace spindle
