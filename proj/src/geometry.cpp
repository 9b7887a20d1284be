#include "spindle/geometry.hpp"

#include <cmath>

namespace spindle {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void TorusParams::validate() const {
    if (!(t > 0.0)) throw InvalidParamsError("tube-center distance t must be positive");
    if (!(s > t * t)) throw InvalidParamsError("need s > t^2 (spindle torus)");
}

LocalFrame rotation_matrix(double alpha, double beta) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    LocalFrame f;
    f.R << ca, -sa * cb, sa * sb,
           sa,  ca * cb, -ca * sb,
           0.0,      sb,       cb;
    f.r1 = Vec3(ca, sa, 0.0);
    f.r2 = Vec3(-sa * cb, ca * cb, sb);
    f.r3 = Vec3(sa * sb, -ca * sb, cb);
    f.r1a = Vec3(-sa, ca, 0.0);
    f.r2a = Vec3(-ca * cb, -sa * cb, 0.0);
    f.r1b = Vec3(0.0, 0.0, 0.0);
    f.r2b = Vec3(sa * sb, -ca * sb, cb);  // = r3
    f.A = f.r1 * f.r1.transpose() + f.r2 * f.r2.transpose();
    return f;
}

ScalarFields scalar_fields(const TorusParams& p, const Vec3& x) {
    const LocalFrame f = rotation_matrix(p.alpha, p.beta);
    const Vec3 xT = x - p.x0;
    const Vec3 xp = f.to_local(xT);
    return {std::hypot(xp.x(), xp.y()), xT.squaredNorm() + p.t * p.t};
}

double psi(const TorusParams& p, const Vec3& x) {
    const auto [g, h] = scalar_fields(p, x);
    if (g == 0.0) throw DegeneratePointError("point on the directional axis (g = 0)");
    const double sgn = (p.kind == SurfaceKind::Apple) ? -1.0 : 1.0;
    return h + 2.0 * p.t * sgn * g - p.s;
}

Vec3 grad_psi(const TorusParams& p, const Vec3& x) {
    const LocalFrame f = rotation_matrix(p.alpha, p.beta);
    const Vec3 xT = x - p.x0;
    const Vec3 AxT = f.A * xT;
    const double g = std::sqrt(AxT.dot(xT));
    if (g == 0.0) throw DegeneratePointError("point on the directional axis (g = 0)");
    const double sgn = (p.kind == SurfaceKind::Apple) ? -1.0 : 1.0;
    return 2.0 * (xT + sgn * (p.t / g) * AxT);
}

std::pair<Vec3, Vec3> singular_points(const TorusParams& p) {
    p.validate();
    const LocalFrame f = rotation_matrix(p.alpha, p.beta);
    const Vec3 offset = std::sqrt(p.s - p.t * p.t) * f.r3;
    return {p.x0 + offset, p.x0 - offset};
}

bool in_parameter_set_Y(const TorusParams& p) {
    if (!(p.t > 0.0 && p.s > p.t * p.t)) return false;
    const auto [sp1, sp2] = singular_points(p);
    return sp1.norm() > 1.0 && sp2.norm() > 1.0;
}

double SurfaceQuadrature::total_weight() const {
    double sum = 0.0;
    for (const auto& pt : points) sum += pt.weight;
    return sum;
}

SurfaceQuadrature parametrize_surface(const TorusParams& p, const QuadratureSpec& quad,
                                      const RegionPredicate& clip) {
    p.validate();
    if (quad.nPsi < 2 || quad.nTheta < 2)
        throw InvalidParamsError("quadrature spec needs nPsi, nTheta >= 2");

    const double sqrtS = std::sqrt(p.s);
    const bool apple = (p.kind == SurfaceKind::Apple);
    // Generator endpoints: rho vanishes there; for the lemon these are the
    // singular points, for the apple they are the same two points approached
    // from outside.
    const double psiMax = apple ? std::acos(-p.t / sqrtS) : std::acos(p.t / sqrtS);
    const double dPsi = 2.0 * psiMax / quad.nPsi;
    const double dTheta = kTwoPi / quad.nTheta;
    const LocalFrame f = rotation_matrix(p.alpha, p.beta);

    SurfaceQuadrature out;
    out.points.reserve(static_cast<size_t>(quad.nPsi + 1) * quad.nTheta);
    for (int i = 0; i <= quad.nPsi; ++i) {
        const double ps = -psiMax + i * dPsi;
        const double rho = apple ? p.t + sqrtS * std::cos(ps)
                                 : sqrtS * std::cos(ps) - p.t;
        const double zp = sqrtS * std::sin(ps);
        const double trap = (i == 0 || i == quad.nPsi) ? 0.5 : 1.0;
        const double wPsi = sqrtS * rho * dPsi * trap;
        for (int k = 0; k < quad.nTheta; ++k) {
            const double th = (k + 0.5) * dTheta;
            SurfacePoint sp;
            sp.theta = th;
            sp.psi = ps;
            sp.xPrime = Vec3(rho * std::cos(th), rho * std::sin(th), zp);
            sp.xT = f.R * sp.xPrime;
            sp.x = p.x0 + sp.xT;
            sp.weight = (wPsi != 0.0 && clip(sp.x)) ? wPsi * dTheta : 0.0;
            out.points.push_back(sp);
        }
    }
    return out;
}

double analytic_area(SurfaceKind kind, double s, double t) {
    const double sqrtS = std::sqrt(s);
    const double w = std::sqrt(s - t * t);
    if (kind == SurfaceKind::Apple)
        return 4.0 * M_PI * sqrtS * (t * std::acos(-t / sqrtS) + w);
    return 4.0 * M_PI * sqrtS * (w - t * std::acos(t / sqrtS));
}

}  // namespace spindle
