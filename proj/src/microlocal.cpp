#include "spindle/microlocal.hpp"

#include <cmath>
#include <random>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spindle {

namespace {

struct FullContext {
    LocalFrame f;
    Vec3 xT;
    Vec3 AxT;
    double g;
    double h;
    double Qa;  // x_T^T (r1a^T, r2a^T)(r1; r2) x_T
    double Qb;
};

FullContext full_context(double t, const Vec3& x0, double alpha, double beta, const Vec3& x) {
    FullContext c;
    c.f = rotation_matrix(alpha, beta);
    c.xT = x - x0;
    c.AxT = c.f.A * c.xT;
    c.g = std::sqrt(c.AxT.dot(c.xT));
    if (c.g == 0.0) throw DegeneratePointError("canonical sample on the directional axis");
    c.h = c.xT.squaredNorm() + t * t;
    c.Qa = (c.f.r1a.dot(c.xT)) * (c.f.r1.dot(c.xT)) + (c.f.r2a.dot(c.xT)) * (c.f.r2.dot(c.xT));
    c.Qb = (c.f.r1b.dot(c.xT)) * (c.f.r1.dot(c.xT)) + (c.f.r2b.dot(c.xT)) * (c.f.r2.dot(c.xT));
    return c;
}

}  // namespace

double surface_s(SurfaceKind kind, const CanonicalSampleFull& c) {
    const auto ctx = full_context(c.t, c.x0, c.alpha, c.beta, c.x);
    const double sgn = (kind == SurfaceKind::Apple) ? -1.0 : 1.0;
    return ctx.h + 2.0 * c.t * sgn * ctx.g;
}

PhaseDerivatives phase_derivatives_full(SurfaceKind kind, const CanonicalSampleFull& c) {
    if (c.sigma == 0.0) throw InvalidSampleError("sigma must be nonzero");
    const auto ctx = full_context(c.t, c.x0, c.alpha, c.beta, c.x);
    const double sgn = (kind == SurfaceKind::Apple) ? -1.0 : 1.0;  // sign of the g term in Psi
    PhaseDerivatives d;
    d.dS = -c.sigma;
    d.dT = 2.0 * c.sigma * (c.t + sgn * ctx.g);
    // d/dalpha Psi_j = 2 t (-1)^j Q_alpha / g, so the apple carries the minus.
    d.dAlpha = sgn * (2.0 * c.sigma * c.t / ctx.g) * ctx.Qa;
    d.dBeta = sgn * (2.0 * c.sigma * c.t / ctx.g) * ctx.Qb;
    d.gradX0 = -2.0 * c.sigma * (ctx.xT + sgn * (c.t / ctx.g) * ctx.AxT);
    d.gradX = -d.gradX0;
    return d;
}

Vec14 left_projection_full(SurfaceKind kind, const CanonicalSampleFull& c) {
    const PhaseDerivatives d = phase_derivatives_full(kind, c);
    Vec14 out;
    out << d.dS, c.t, c.alpha, c.beta, c.x0, d.gradX0, d.dT, d.dAlpha, d.dBeta,
        surface_s(kind, c);
    return out;
}

Mat3 gradx0_block(SurfaceKind kind, const CanonicalSampleFull& c) {
    const auto ctx = full_context(c.t, c.x0, c.alpha, c.beta, c.x);
    const double sgn = (kind == SurfaceKind::Apple) ? -1.0 : 1.0;
    const Mat3 inner = ctx.f.A / ctx.g - (ctx.AxT * ctx.AxT.transpose()) / (ctx.g * ctx.g * ctx.g);
    return -2.0 * c.sigma * (Mat3::Identity() + sgn * c.t * inner);
}

double det_gradx0_block(SurfaceKind kind, const CanonicalSampleFull& c) {
    const auto ctx = full_context(c.t, c.x0, c.alpha, c.beta, c.x);
    const double sgn = (kind == SurfaceKind::Apple) ? -1.0 : 1.0;
    const double s2 = 2.0 * c.sigma;
    return -s2 * s2 * s2 * (1.0 + sgn * c.t / ctx.g);
}

CylinderCaseResult det_M_cylinder(const CanonicalSampleFull& base, const CylinderPoint& cyl,
                                  double tol) {
    if (std::abs(cyl.t - base.t) > tol)
        throw InvalidSampleError("cylinder radius must equal t");
    const LocalFrame f = rotation_matrix(base.alpha, base.beta);
    const Vec3 xC(cyl.t * std::cos(cyl.theta), cyl.t * std::sin(cyl.theta), cyl.z);
    const Vec3 x = base.x0 + f.R * xC;

    const auto ctx = full_context(base.t, base.x0, base.alpha, base.beta, x);
    if (std::abs(ctx.g - base.t) > std::max(tol, 1e-12 * base.t))
        throw InvalidSampleError("point not on the cylinder {g = t}");
    const double g = ctx.g, t = base.t, sigma = base.sigma;

    const Vec3 BxT = f.r1a * f.r1.dot(ctx.xT) + f.r2a * f.r2.dot(ctx.xT);
    CylinderCaseResult r;
    r.M.row(0) = (-2.0 * sigma / g) * ctx.AxT.transpose();
    r.M.row(1) =
        2.0 * sigma * ((2.0 * t / g) * BxT - (t / (g * g * g)) * ctx.Qa * ctx.AxT).transpose();
    r.M.row(2) = 2.0 * (ctx.xT - (t / g) * ctx.AxT).transpose();
    r.det = r.M.determinant();
    r.alphaScalar = ctx.Qa;
    return r;
}

Vec6 restricted_projection(const CanonicalSampleRestricted& c) {
    if (c.sigma == 0.0) throw InvalidSampleError("sigma must be nonzero");
    const auto rf = restricted_fields(c.x0, c.y0, c.x);
    if (rf.g == 0.0) throw DegeneratePointError("sample on the torus axis (g = 0)");
    const double u2 = rf.u - 2.0;
    Vec6 out;
    out << c.sigma, c.x0, c.y0, rf.u * rf.h,
        -2.0 * c.sigma * rf.u * u2 * (c.x.x() - c.x0),
        -2.0 * c.sigma * rf.u * u2 * (c.x.y() - c.y0);
    return out;
}

double det_restricted_jacobian(const CanonicalSampleRestricted& c) {
    const auto rf = restricted_fields(c.x0, c.y0, c.x);
    if (rf.g == 0.0) throw DegeneratePointError("sample on the torus axis (g = 0)");
    const double u = rf.u;
    return -16.0 * c.x.z() * c.sigma * c.sigma * u * u * u * u * (u - 2.0);
}

Mat3 restricted_M3(const CanonicalSampleRestricted& c) {
    const auto rf = restricted_fields(c.x0, c.y0, c.x);
    if (rf.g == 0.0) throw DegeneratePointError("sample on the torus axis (g = 0)");
    const double dx = c.x.x() - c.x0, dy = c.x.y() - c.y0;
    const double u1 = rf.u - 1.0, u2 = rf.u - 2.0, h = rf.h;
    Mat3 M;
    M << -dx * u2, -dy * u2, 1.0,
        4.0 * dx * dx * u1 * u1 - h * u2, 4.0 * dx * dy * u1 * u1, -2.0 * dx * u1,
        4.0 * dx * dy * u1 * u1, 4.0 * dy * dy * u1 * u1 - h * u2, -2.0 * dy * u1;
    return M;
}

double det_restricted_M3_closed(const CanonicalSampleRestricted& c) {
    const auto rf = restricted_fields(c.x0, c.y0, c.x);
    return -rf.h * rf.h * rf.u * (rf.u - 2.0);
}

double amplitude(const TorusParams& params, const Vec3& x) {
    return grad_psi(params, x).norm();
}

double amplitude_restricted(const RestrictedParams& rp, const Vec3& x) {
    const auto rf = restricted_fields(rp.x0, rp.y0, x);
    if (rf.g == 0.0) throw DegeneratePointError("point on the torus axis (g = 0)");
    const double u2 = rf.u - 2.0;
    return 2.0 * std::abs(rf.u) * std::sqrt(rf.g * u2 * u2 + 4.0 * x.z() * x.z());
}

std::pair<double, double> sylvester_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const auto m = A.rows(), n = A.cols();
    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(m, m) + A * B;
    const Eigen::MatrixXd rhs = Eigen::MatrixXd::Identity(n, n) + B * A;
    return {lhs.determinant(), rhs.determinant()};
}

double cone_beam_angle_deg(double epsilon) {
    const double e1 = 1.0 + epsilon;
    const double g = 2.0 * std::atan(std::sqrt(e1 * e1 - 1.0) / (2.0 + epsilon));
    return std::min(g * 180.0 / M_PI, 90.0);
}

// ---------------------------------------------------------------------------
// Bolker scan

namespace {

constexpr double kFdStep = 1e-6;

// 14x10 finite-difference Jacobian of the full left projection with respect
// to (sigma, t, alpha, beta, x0, x).
Eigen::Matrix<double, 14, 10> fd_jacobian_full(SurfaceKind kind, const CanonicalSampleFull& c) {
    Eigen::Matrix<double, 14, 10> J;
    auto eval = [&](const Eigen::Matrix<double, 10, 1>& v) {
        CanonicalSampleFull s;
        s.sigma = v[0];
        s.t = v[1];
        s.alpha = v[2];
        s.beta = v[3];
        s.x0 = v.segment<3>(4);
        s.x = v.segment<3>(7);
        return left_projection_full(kind, s);
    };
    Eigen::Matrix<double, 10, 1> v;
    v << c.sigma, c.t, c.alpha, c.beta, c.x0, c.x;
    for (int k = 0; k < 10; ++k) {
        const double step = kFdStep * std::max(1.0, std::abs(v[k]));
        Eigen::Matrix<double, 10, 1> vp = v, vm = v;
        vp[k] += step;
        vm[k] -= step;
        J.col(k) = (eval(vp) - eval(vm)) / (2.0 * step);
    }
    return J;
}

// 6x6 finite-difference Jacobian of the restricted left projection with
// respect to (sigma, x0, y0, x).
Eigen::Matrix<double, 6, 6> fd_jacobian_restricted(const CanonicalSampleRestricted& c) {
    Eigen::Matrix<double, 6, 6> J;
    auto eval = [&](const Vec6& v) {
        CanonicalSampleRestricted s;
        s.sigma = v[0];
        s.x0 = v[1];
        s.y0 = v[2];
        s.x = v.segment<3>(3);
        return restricted_projection(s);
    };
    Vec6 v;
    v << c.sigma, c.x0, c.y0, c.x;
    for (int k = 0; k < 6; ++k) {
        const double step = kFdStep * std::max(1.0, std::abs(v[k]));
        Vec6 vp = v, vm = v;
        vp[k] += step;
        vm[k] -= step;
        J.col(k) = (eval(vp) - eval(vm)) / (2.0 * step);
    }
    return J;
}

struct QuantKey {
    std::array<int64_t, 14> q{};
    int n = 0;
    bool operator==(const QuantKey& o) const { return n == o.n && q == o.q; }
};

struct QuantKeyHash {
    size_t operator()(const QuantKey& k) const {
        size_t h = 1469598103934665603ull;
        for (int i = 0; i < k.n; ++i) {
            h ^= static_cast<size_t>(k.q[i]);
            h *= 1099511628211ull;
        }
        return h;
    }
};

template <typename VecT>
QuantKey quantize(const VecT& v, double tol) {
    QuantKey k;
    k.n = static_cast<int>(v.size());
    for (int i = 0; i < k.n; ++i) k.q[i] = std::llround(v[i] / tol);
    return k;
}

bool is_z_reflection(const Vec3& a, const Vec3& b) {
    return (Vec3(a.x(), a.y(), -a.z()) - b).norm() <= 1e-6;
}

}  // namespace

BolkerReport bolker_scan(Family family, const BolkerRegion& region, int64_t nSamples,
                         uint64_t seed) {
    BolkerReport rep;
    rep.family = family;
    rep.nSamples = nSamples;
    rep.minAbsDet = std::numeric_limits<double>::infinity();
    rep.minAbsDetClosed = std::numeric_limits<double>::infinity();
    rep.minSingularRatio = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto signed_sigma = [&] {
        const double s = 0.5 + 1.5 * uni(rng);
        return uni(rng) < 0.5 ? -s : s;
    };
    const double quantTol = 1e-7;

    const bool restricted =
        family == Family::Restricted_Apple || family == Family::Restricted_Lemon;
    const bool apple = family == Family::Full7D_Apple || family == Family::Restricted_Apple;

    if (restricted) {
        const int nBases = 8;
        const int64_t perBase = std::max<int64_t>(1, nSamples / nBases);
        for (int b = 0; b < nBases; ++b) {
            CanonicalSampleRestricted base;
            base.sigma = signed_sigma();
            base.x0 = -0.3 + 0.6 * uni(rng);
            base.y0 = -0.3 + 0.6 * uni(rng);
            std::unordered_map<QuantKey, Vec3, QuantKeyHash> seen;
            seen.reserve(static_cast<size_t>(perBase) * 4);
            auto probe = [&](const CanonicalSampleRestricted& s) {
                try {
                    const double det = fd_jacobian_restricted(s).determinant();
                    const auto rf = restricted_fields(s.x0, s.y0, s.x);
                    const double scale = 16.0 * s.sigma * s.sigma * std::abs(s.x.z()) *
                                         std::pow(rf.u, 4) * (std::abs(rf.u) + 2.0);
                    rep.minAbsDet = std::min(rep.minAbsDet, std::abs(det) / scale);
                    rep.minAbsDetClosed = std::min(
                        rep.minAbsDetClosed, std::abs(det_restricted_jacobian(s)) / scale);

                    const Vec6 out = restricted_projection(s);
                    auto [it, inserted] = seen.emplace(quantize(out, quantTol), s.x);
                    if (!inserted && (it->second - s.x).norm() > 1e-6) {
                        CollisionPair cp{it->second, s.x, is_z_reflection(it->second, s.x)};
                        rep.collisions.push_back(cp);
                    }
                } catch (const std::exception&) {
                    ++rep.nFailures;
                }
            };
            for (int64_t i = 0; i < perBase; ++i) {
                CanonicalSampleRestricted s = base;
                bool placed = false;
                for (int tries = 0; tries < 64 && !placed; ++tries) {
                    const double z = region.zMin + (region.zMax - region.zMin) * uni(rng);
                    double rad;
                    if (region.onHyperboloid) {
                        if (z * z <= 1.0) continue;  // hyperboloid needs |z| > 1
                        rad = std::sqrt(z * z - 1.0);
                    } else {
                        rad = 0.05 + 0.9 * uni(rng);
                    }
                    const double th = 2.0 * M_PI * uni(rng);
                    s.x = Vec3(base.x0 + rad * std::cos(th), base.y0 + rad * std::sin(th), z);
                    if (region.uMin > 0.0 &&
                        restricted_fields(s.x0, s.y0, s.x).u < region.uMin)
                        continue;
                    placed = true;
                }
                if (!placed) {
                    ++rep.nFailures;
                    continue;
                }
                probe(s);
                if (region.zMin < 0.0 && s.x.z() != 0.0) {
                    // symmetric band: probe the mirrored point too, so the
                    // z-reflection collisions are actually exercised
                    CanonicalSampleRestricted m = s;
                    m.x.z() = -m.x.z();
                    probe(m);
                }
            }
        }
        rep.minSingularRatio = 0.0;  // not applicable
        return rep;
    }

    // Full 7-D families.
    const int nBases = 8;
    const int64_t perBase = std::max<int64_t>(1, nSamples / nBases);
    for (int b = 0; b < nBases; ++b) {
        CanonicalSampleFull base;
        base.sigma = signed_sigma();
        base.t = 0.5 + uni(rng);
        base.alpha = 2.0 * M_PI * uni(rng);
        base.beta = 0.15 + 1.25 * uni(rng);
        const double d = 2.5 + 1.5 * uni(rng);
        const double phi = 2.0 * M_PI * uni(rng);
        const double cz = -1.0 + 2.0 * uni(rng);
        const double rr = std::sqrt(std::max(0.0, 1.0 - cz * cz));
        base.x0 = d * Vec3(rr * std::cos(phi), rr * std::sin(phi), cz);
        std::unordered_map<QuantKey, Vec3, QuantKeyHash> seen;
        seen.reserve(static_cast<size_t>(perBase) * 2);
        const SurfaceKind kind = apple ? SurfaceKind::Apple : SurfaceKind::Lemon;
        for (int64_t i = 0; i < perBase; ++i) {
            CanonicalSampleFull s = base;
            // x in the unit ball, away from the axis; apples also need the
            // horn-torus exterior so that s = h - 2tg stays above t^2.
            Vec3 x;
            bool ok = false;
            for (int tries = 0; tries < 64 && !ok; ++tries) {
                x = Vec3(2.0 * uni(rng) - 1.0, 2.0 * uni(rng) - 1.0, 2.0 * uni(rng) - 1.0);
                if (x.squaredNorm() >= 1.0) continue;
                s.x = x;
                try {
                    const auto ctx = full_context(s.t, s.x0, s.alpha, s.beta, s.x);
                    if (ctx.g < 1e-3) continue;
                    if (apple && ctx.h - 2.0 * s.t * ctx.g <= s.t * s.t) continue;
                    ok = true;
                } catch (const std::exception&) {
                }
            }
            if (!ok) {
                ++rep.nFailures;
                continue;
            }
            try {
                const auto J = fd_jacobian_full(kind, s);
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
                const auto& sv = svd.singularValues();
                rep.minSingularRatio =
                    std::min(rep.minSingularRatio, sv(sv.size() - 1) / sv(0));

                const Vec14 out = left_projection_full(kind, s);
                auto [it, inserted] = seen.emplace(quantize(out, quantTol), s.x);
                if (!inserted && (it->second - s.x).norm() > 1e-6) {
                    CollisionPair cp{it->second, s.x, is_z_reflection(it->second, s.x)};
                    rep.collisions.push_back(cp);
                }
            } catch (const std::exception&) {
                ++rep.nFailures;
            }
        }
    }
    rep.minAbsDet = rep.minAbsDetClosed = 0.0;  // not applicable
    return rep;
}

// ---------------------------------------------------------------------------
// Artifact prediction

std::vector<Vec3> ArtifactSet::ring_points(int nTheta) const {
    std::vector<Vec3> pts;
    for (const auto& ring : rings) {
        // orthonormal basis of the ring plane
        Vec3 e1 = ring.axis.unitOrthogonal();
        Vec3 e2 = ring.axis.cross(e1);
        for (int k = 0; k < nTheta; ++k) {
            const double th = 2.0 * M_PI * k / nTheta;
            pts.push_back(ring.center + ring.radius * (std::cos(th) * e1 + std::sin(th) * e2));
        }
    }
    return pts;
}

VoxelGrid ArtifactSet::mask(const VoxelGrid& gridSpec, int dilate) const {
    VoxelGrid m = VoxelGrid::zeros(gridSpec.nx, gridSpec.ny, gridSpec.nz, gridSpec.spacing,
                                   gridSpec.origin);
    const double tol = dilate * gridSpec.spacing.maxCoeff();
    for (int k = 0; k < m.nz; ++k)
        for (int j = 0; j < m.ny; ++j)
            for (int i = 0; i < m.nx; ++i) {
                const Vec3 c = m.voxel_center(i, j, k);
                for (const auto& ring : rings) {
                    const Vec3 d = c - ring.center;
                    const double along = d.dot(ring.axis);
                    const double radial = (d - along * ring.axis).norm();
                    const double dist = std::hypot(radial - ring.radius, along);
                    if (dist <= tol) {
                        m.at(i, j, k) = 1.0;
                        break;
                    }
                }
            }
    return m;
}

ArtifactSet predict_artifacts(const TorusParams& params) {
    ArtifactSet out;
    if (params.kind == SurfaceKind::Lemon) {
        out.kind = ArtifactSet::Kind::None;
        out.description = "translated lemon transform satisfies Bolker; no predicted artifact set";
        return out;
    }
    params.validate();
    const LocalFrame f = rotation_matrix(params.alpha, params.beta);
    const double sqrtS = std::sqrt(params.s);
    out.kind = ArtifactSet::Kind::CylinderRings;
    out.description = "apple/cylinder {g = t} intersection rings";
    for (const double sgn : {1.0, -1.0}) {
        ArtifactRing ring;
        ring.center = params.x0 + sgn * sqrtS * f.r3;
        ring.axis = f.r3;
        ring.radius = params.t;
        ring.height = sgn * sqrtS;
        out.rings.push_back(ring);
    }
    return out;
}

ArtifactSet predict_artifacts(const RestrictedParams& rp) {
    rp.validate();
    ArtifactSet out;
    out.kind = ArtifactSet::Kind::Hyperboloid;
    out.description =
        "apple/hyperboloid {u = 2} intersection rings at z = +-sqrt(t^2 + 1)";
    const double r = rp.r();
    for (const double sgn : {1.0, -1.0}) {
        ArtifactRing ring;
        ring.center = Vec3(rp.x0, rp.y0, sgn * r);
        ring.axis = Vec3::UnitZ();
        ring.radius = rp.t();
        ring.height = sgn * r;
        out.rings.push_back(ring);
    }
    return out;
}

}  // namespace spindle
