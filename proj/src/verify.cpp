#include "spindle/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace spindle {

namespace {

double rel_err(double got, double want) {
    const double scale = std::max({std::abs(got), std::abs(want), 1e-30});
    return std::abs(got - want) / scale;
}

struct Sampler {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> uni{0.0, 1.0};
    explicit Sampler(uint64_t seed) : rng(seed) {}
    double in(double lo, double hi) { return lo + (hi - lo) * uni(rng); }
    double signed_mag(double lo, double hi) {
        const double v = in(lo, hi);
        return uni(rng) < 0.5 ? -v : v;
    }
    Vec3 vec(double lo, double hi) { return Vec3(in(lo, hi), in(lo, hi), in(lo, hi)); }

    // torus params + a point with g comfortably positive
    std::pair<TorusParams, Vec3> full_sample(SurfaceKind kind) {
        for (;;) {
            TorusParams p;
            p.t = in(0.3, 1.5);
            p.s = p.t * p.t * in(1.2, 4.0);
            p.x0 = vec(-0.5, 0.5);
            p.alpha = in(0.0, 2.0 * M_PI);
            p.beta = in(0.1, M_PI / 2 - 0.1);
            p.kind = kind;
            const Vec3 x = p.x0 + vec(-1.5, 1.5);
            const auto sf = scalar_fields(p, x);
            if (sf.g > 0.05) return {p, x};
        }
    }

    CanonicalSampleFull canonical_full(SurfaceKind kind) {
        const auto [p, x] = full_sample(kind);
        CanonicalSampleFull c;
        c.sigma = signed_mag(0.5, 2.0);
        c.t = p.t;
        c.x0 = p.x0;
        c.alpha = p.alpha;
        c.beta = p.beta;
        c.x = x;
        return c;
    }

    // Keeps g bounded below and u moderate, and stays away from the zero
    // sets {u = 0}, {u = 2} of the determinant identities: near g = 0 the
    // matrix entries blow up and on the zero sets the relative comparison
    // divides by zero, so those neighborhoods are ill-conditioned by nature.
    CanonicalSampleRestricted canonical_restricted(bool apple) {
        for (;;) {
            CanonicalSampleRestricted c;
            c.sigma = signed_mag(0.5, 2.0);
            c.x0 = in(-0.3, 0.3);
            c.y0 = in(-0.3, 0.3);
            const double rad = in(0.55, 0.95);
            const double th = in(0.0, 2.0 * M_PI);
            const double z = apple ? in(1.05, 1.45) : in(0.4, 0.95);
            c.x = Vec3(c.x0 + rad * std::cos(th), c.y0 + rad * std::sin(th), z);
            const auto rf = restricted_fields(c.x0, c.y0, c.x);
            if (std::abs(rf.u) >= 0.3 && std::abs(rf.u - 2.0) >= 0.3) return c;
        }
    }
};

// Full phase Phi_j = sigma * (h + 2 t (-1)^j g - s) with the fixed reference
// s = 0 (s only shifts Phi linearly, so every other derivative is unchanged).
double full_phi(SurfaceKind kind, double sigma, double t, double alpha, double beta,
                const Vec3& x0, const Vec3& x) {
    TorusParams p;
    p.t = t;
    p.x0 = x0;
    p.alpha = alpha;
    p.beta = beta;
    p.kind = kind;
    const auto sf = scalar_fields(p, x);
    const double sgn = (kind == SurfaceKind::Apple) ? -1.0 : 1.0;
    return sigma * (sf.h + 2.0 * t * sgn * sf.g);
}

double restricted_phi(double sigma, double x0, double y0, const Vec3& x) {
    const auto rf = restricted_fields(x0, y0, x);
    return -sigma * rf.h * rf.h / rf.g;  // the p-term is linear and drops out
}

// Cofactor-expansion determinant in extended precision: the entries of M3
// cancel heavily against each other, so the double-precision LU determinant
// carries ~1e-8 relative noise that would swamp a 1e-10 identity check.
double det3_extended(const Mat3& M) {
    auto m = [&](int i, int j) { return static_cast<long double>(M(i, j)); };
    const long double d = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                          m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                          m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    return static_cast<double>(d);
}

template <typename F>
double central_fd(F&& f, double v, double scale = 1.0) {
    const double h = 1e-6 * std::max(1.0, std::abs(v)) * scale;
    return (f(v + h) - f(v - h)) / (2.0 * h);
}

CheckResult run_check(const std::string& name, double tol,
                      const std::function<double()>& worstErr) {
    CheckResult r;
    r.name = name;
    r.tol = tol;
    try {
        r.worst = worstErr();
        r.passed = r.worst <= tol;
    } catch (const std::exception& e) {
        r.passed = false;
        r.worst = std::numeric_limits<double>::infinity();
        r.detail = e.what();
    }
    return r;
}

}  // namespace

SuiteReport verify_geometry(int samples, uint64_t seed) {
    SuiteReport rep;
    rep.suite = "geometry";

    rep.checks.push_back(run_check("frame-orthogonality-and-A-properties", 1e-13, [&] {
        Sampler s(seed);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const auto f = rotation_matrix(s.in(0, 2 * M_PI), s.in(0, M_PI / 2));
            worst = std::max(worst, (f.R.transpose() * f.R - Mat3::Identity()).cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(f.R.determinant() - 1.0));
            worst = std::max(worst, (f.A - f.A.transpose()).cwiseAbs().maxCoeff());
            worst = std::max(worst, (f.A * f.A - f.A).cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(f.A.trace() - 2.0));
            worst = std::max(worst, (f.A * f.r3).cwiseAbs().maxCoeff());
        }
        return worst;
    }));

    rep.checks.push_back(run_check("grad-psi-vs-finite-differences", 1e-6, [&] {
        Sampler s(seed + 1);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const SurfaceKind kind = (i % 2 == 0) ? SurfaceKind::Apple : SurfaceKind::Lemon;
            const auto [p, x] = s.full_sample(kind);
            const Vec3 grad = grad_psi(p, x);
            for (int a = 0; a < 3; ++a) {
                const double fd = central_fd(
                    [&](double v) {
                        Vec3 xp = x;
                        xp[a] = v;
                        return psi(p, xp);
                    },
                    x[a]);
                worst = std::max(worst, std::abs(fd - grad[a]) /
                                            std::max(grad.norm(), 1e-12));
            }
        }
        return worst;
    }));

    rep.checks.push_back(run_check("psi-two-algebraic-forms", 1e-12, [&] {
        Sampler s(seed + 2);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const SurfaceKind kind = (i % 2 == 0) ? SurfaceKind::Apple : SurfaceKind::Lemon;
            const auto [p, x] = s.full_sample(kind);
            const auto sf = scalar_fields(p, x);
            const double sgn = (kind == SurfaceKind::Apple) ? -1.0 : 1.0;
            // form 1: (g +- t)^2 + z'^2 - s with z'^2 = |xT|^2 - g^2
            const double zp2 = (x - p.x0).squaredNorm() - sf.g * sf.g;
            const double form1 = (sf.g + sgn * p.t) * (sf.g + sgn * p.t) + zp2 - p.s;
            const double form2 = sf.h + 2.0 * p.t * sgn * sf.g - p.s;
            worst = std::max(worst, rel_err(form1, form2));
            worst = std::max(worst, rel_err(psi(p, x), form2));
        }
        return worst;
    }));

    rep.checks.push_back(run_check("quadrature-area-256", 1e-3, [&] {
        double worst = 0.0;
        for (const SurfaceKind kind : {SurfaceKind::Apple, SurfaceKind::Lemon}) {
            TorusParams p;
            p.s = 4.0;
            p.t = 1.0;
            p.kind = kind;
            const auto sq = parametrize_surface(p, {256, 256}, clip_none());
            worst = std::max(worst, rel_err(sq.total_weight(), analytic_area(kind, 4.0, 1.0)));
        }
        return worst;
    }));

    rep.checks.push_back(run_check("singular-points-at-parameterization-endpoints", 1e-9, [&] {
        Sampler s(seed + 3);
        double worst = 0.0;
        for (int i = 0; i < std::min(samples, 100); ++i) {
            const SurfaceKind kind = (i % 2 == 0) ? SurfaceKind::Apple : SurfaceKind::Lemon;
            const auto [p, xIgnored] = s.full_sample(kind);
            (void)xIgnored;
            const auto sq = parametrize_surface(p, {512, 4}, clip_none());
            const auto [sp1, sp2] = singular_points(p);
            // psi endpoints carry rho ~ 0; nearest emitted points approach them
            double d1 = 1e300, d2 = 1e300;
            for (const auto& pt : sq.points) {
                d1 = std::min(d1, (pt.x - sp1).norm());
                d2 = std::min(d2, (pt.x - sp2).norm());
            }
            // rho(psi) vanishes quadratically in the offset for the apple,
            // linearly for the lemon; 512 psi-nodes put the endpoint node
            // essentially on the singular points
            worst = std::max(worst, std::max(d1, d2) / std::sqrt(p.s));
        }
        return worst;
    }));

    rep.checks.push_back(run_check("surface-points-satisfy-psi", 1e-9, [&] {
        Sampler s(seed + 4);
        double worst = 0.0;
        for (int i = 0; i < std::min(samples, 200); ++i) {
            const SurfaceKind kind = (i % 2 == 0) ? SurfaceKind::Apple : SurfaceKind::Lemon;
            const auto [p, xIgnored] = s.full_sample(kind);
            (void)xIgnored;
            const auto sq = parametrize_surface(p, {16, 16}, clip_none());
            for (const auto& pt : sq.points) {
                const auto sf = scalar_fields(p, pt.x);
                if (sf.g < 1e-12) continue;  // endpoint node on the axis
                worst = std::max(worst, std::abs(psi(p, pt.x)) / p.s);
            }
        }
        return worst;
    }));

    return rep;
}

SuiteReport verify_microlocal(int samples, uint64_t seed) {
    SuiteReport rep;
    rep.suite = "microlocal";

    rep.checks.push_back(run_check("phase-derivatives-full-vs-fd", 1e-6, [&] {
        Sampler s(seed + 10);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const SurfaceKind kind = (i % 2 == 0) ? SurfaceKind::Apple : SurfaceKind::Lemon;
            const auto c = s.canonical_full(kind);
            const auto d = phase_derivatives_full(kind, c);
            const double scale = std::max({std::abs(d.dT), std::abs(d.dAlpha),
                                           std::abs(d.dBeta), d.gradX0.norm(), 1.0});
            auto check = [&](double got, double fd) {
                worst = std::max(worst, std::abs(got - fd) / scale);
            };
            check(d.dT, central_fd([&](double v) {
                      return full_phi(kind, c.sigma, v, c.alpha, c.beta, c.x0, c.x);
                  },
                                   c.t));
            check(d.dAlpha, central_fd([&](double v) {
                      return full_phi(kind, c.sigma, c.t, v, c.beta, c.x0, c.x);
                  },
                                       c.alpha));
            check(d.dBeta, central_fd([&](double v) {
                      return full_phi(kind, c.sigma, c.t, c.alpha, v, c.x0, c.x);
                  },
                                      c.beta));
            for (int a = 0; a < 3; ++a) {
                check(d.gradX0[a], central_fd([&](double v) {
                          Vec3 y = c.x0;
                          y[a] = v;
                          return full_phi(kind, c.sigma, c.t, c.alpha, c.beta, y, c.x);
                      },
                                              c.x0[a]));
                check(d.gradX[a], central_fd([&](double v) {
                          Vec3 y = c.x;
                          y[a] = v;
                          return full_phi(kind, c.sigma, c.t, c.alpha, c.beta, c.x0, y);
                      },
                                             c.x[a]));
            }
            // gradX0 + gradX = 0 exactly (shared closed form)
            if ((d.gradX0 + d.gradX).norm() != 0.0) worst = std::max(worst, 1.0);
        }
        return worst;
    }));

    rep.checks.push_back(run_check("phase-derivatives-restricted-vs-fd", 1e-6, [&] {
        Sampler s(seed + 11);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const auto c = s.canonical_restricted(i % 2 == 0);
            const Vec6 out = restricted_projection(c);
            const double scale = std::max({std::abs(out[4]), std::abs(out[5]), 1.0});
            const double fdX0 = central_fd(
                [&](double v) { return restricted_phi(c.sigma, v, c.y0, c.x); }, c.x0);
            const double fdY0 = central_fd(
                [&](double v) { return restricted_phi(c.sigma, c.x0, v, c.x); }, c.y0);
            worst = std::max(worst, std::abs(out[4] - fdX0) / scale);
            worst = std::max(worst, std::abs(out[5] - fdY0) / scale);
            // p = u h equals h^2/g
            const auto rf = restricted_fields(c.x0, c.y0, c.x);
            worst = std::max(worst, rel_err(out[3], rf.h * rf.h / rf.g));
        }
        return worst;
    }));

    rep.checks.push_back(run_check("det-identity-I-minus-tg-A", 1e-10, [&] {
        Sampler s(seed + 12);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const auto f = rotation_matrix(s.in(0, 2 * M_PI), s.in(0, M_PI / 2));
            const double tg = s.in(0.05, 3.0);
            for (const double sgn : {-1.0, 1.0}) {
                const Mat3 M = Mat3::Identity() + sgn * tg * f.A;
                const double want = (1.0 + sgn * tg) * (1.0 + sgn * tg);
                worst = std::max(worst, rel_err(M.determinant(), want));
            }
        }
        return worst;
    }));

    rep.checks.push_back(run_check("det-gradx0-block-closed-vs-fd", 1e-5, [&] {
        Sampler s(seed + 13);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const SurfaceKind kind = (i % 2 == 0) ? SurfaceKind::Apple : SurfaceKind::Lemon;
            const auto c = s.canonical_full(kind);
            // FD Jacobian of gradX0 with respect to x
            Mat3 J;
            for (int a = 0; a < 3; ++a) {
                const double h = 1e-6 * std::max(1.0, std::abs(c.x[a]));
                CanonicalSampleFull cp = c, cm = c;
                cp.x[a] += h;
                cm.x[a] -= h;
                J.col(a) = (phase_derivatives_full(kind, cp).gradX0 -
                            phase_derivatives_full(kind, cm).gradX0) /
                           (2.0 * h);
            }
            worst = std::max(worst, rel_err(J.determinant(), det_gradx0_block(kind, c)));
            worst = std::max(worst, rel_err(gradx0_block(kind, c).determinant(),
                                            det_gradx0_block(kind, c)));
        }
        return worst;
    }));

    rep.checks.push_back(run_check("det-M-cylinder-analytic-assembly", 1e-10, [&] {
        Sampler s(seed + 14);
        double worst = 0.0;
        for (int i = 0; i < std::max(samples, 100); ++i) {
            CanonicalSampleFull base;
            base.sigma = s.signed_mag(0.5, 2.0);
            base.t = s.in(0.3, 1.5);
            base.alpha = s.in(0, 2 * M_PI);
            base.beta = s.in(0.1, M_PI / 2 - 0.1);
            base.x0 = s.vec(-0.5, 0.5);
            CylinderPoint cyl;
            cyl.theta = s.in(0, 2 * M_PI);
            cyl.z = s.signed_mag(0.2, 1.5);
            cyl.t = base.t;
            const auto r = det_M_cylinder(base, cyl);
            const double want = -16.0 * base.sigma * base.sigma * cyl.z * base.t *
                                std::cos(base.beta);
            worst = std::max(worst, rel_err(r.det, want));
            // auxiliary scalar of the alpha-derivative on the cylinder
            const double wantAlpha = -base.t * cyl.z * std::sin(base.beta) * std::cos(cyl.theta);
            worst = std::max(worst, std::abs(r.alphaScalar - wantAlpha) /
                                        std::max(1.0, std::abs(wantAlpha)));
        }
        return worst;
    }));

    rep.checks.push_back(run_check("det-restricted-jacobian-closed-vs-fd", 1e-5, [&] {
        Sampler s(seed + 15);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const auto c = s.canonical_restricted(i % 2 == 0);
            Eigen::Matrix<double, 6, 6> J;
            Vec6 v;
            v << c.sigma, c.x0, c.y0, c.x;
            auto eval = [&](const Vec6& w) {
                CanonicalSampleRestricted cc;
                cc.sigma = w[0];
                cc.x0 = w[1];
                cc.y0 = w[2];
                cc.x = w.segment<3>(3);
                return restricted_projection(cc);
            };
            for (int k = 0; k < 6; ++k) {
                const double h = 1e-6 * std::max(1.0, std::abs(v[k]));
                Vec6 vp = v, vm = v;
                vp[k] += h;
                vm[k] -= h;
                J.col(k) = (eval(vp) - eval(vm)) / (2.0 * h);
            }
            worst = std::max(worst, rel_err(J.determinant(), det_restricted_jacobian(c)));
        }
        return worst;
    }));

    rep.checks.push_back(run_check("det-M3-closed-form", 1e-10, [&] {
        Sampler s(seed + 16);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const auto c = s.canonical_restricted(i % 2 == 0);
            worst = std::max(worst, rel_err(det3_extended(restricted_M3(c)),
                                            det_restricted_M3_closed(c)));
        }
        return worst;
    }));

    rep.checks.push_back(run_check("sylvester-identity", 1e-12, [&] {
        Sampler s(seed + 17);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const int m = 1 + static_cast<int>(s.in(0, 5.999));
            const int n = 1 + static_cast<int>(s.in(0, 5.999));
            // entries bounded so det(I + AB) stays away from zero: a relative
            // comparison of two near-zero determinants measures only noise
            Eigen::MatrixXd A(m, n), B(n, m);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < n; ++b) {
                    A(a, b) = s.in(-0.25, 0.25);
                    B(b, a) = s.in(-0.25, 0.25);
                }
            const auto [l, r] = sylvester_check(A, B);
            worst = std::max(worst, rel_err(l, r));
        }
        return worst;
    }));

    rep.checks.push_back(run_check("sigma-homogeneity-left-projections", 1e-12, [&] {
        Sampler s(seed + 18);
        double worst = 0.0;
        for (int i = 0; i < std::min(samples, 1000); ++i) {
            const SurfaceKind kind = (i % 2 == 0) ? SurfaceKind::Apple : SurfaceKind::Lemon;
            auto c = s.canonical_full(kind);
            const double lam = s.in(0.5, 3.0);
            const Vec14 a = left_projection_full(kind, c);
            c.sigma *= lam;
            const Vec14 b = left_projection_full(kind, c);
            // derivative components scale by lam, base components are fixed
            const int derivIdx[] = {0, 7, 8, 9, 10, 11, 12};
            const int baseIdx[] = {1, 2, 3, 4, 5, 6, 13};
            for (int idx : derivIdx) worst = std::max(worst, rel_err(b[idx], lam * a[idx]));
            for (int idx : baseIdx) worst = std::max(worst, rel_err(b[idx], a[idx]));
        }
        return worst;
    }));

    rep.checks.push_back(run_check("cylinder-gradx0-parallel-r3", 1e-10, [&] {
        Sampler s(seed + 19);
        double worst = 0.0;
        for (int i = 0; i < std::min(samples, 1000); ++i) {
            CanonicalSampleFull c;
            c.sigma = s.signed_mag(0.5, 2.0);
            c.t = s.in(0.3, 1.5);
            c.alpha = s.in(0, 2 * M_PI);
            c.beta = s.in(0.1, M_PI / 2 - 0.1);
            c.x0 = s.vec(-0.5, 0.5);
            const auto f = rotation_matrix(c.alpha, c.beta);
            const double th = s.in(0, 2 * M_PI);
            const double z = s.signed_mag(0.2, 1.5);
            c.x = c.x0 + f.R * Vec3(c.t * std::cos(th), c.t * std::sin(th), z);
            const auto d = phase_derivatives_full(SurfaceKind::Apple, c);
            const Vec3 want = -2.0 * c.sigma * z * f.r3;
            worst = std::max(worst, (d.gradX0 - want).norm() / std::max(want.norm(), 1e-12));
        }
        return worst;
    }));

    rep.checks.push_back(run_check("amplitude-positive-and-consistent", 1e-10, [&] {
        Sampler s(seed + 20);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const SurfaceKind kind = (i % 2 == 0) ? SurfaceKind::Apple : SurfaceKind::Lemon;
            const auto c = s.canonical_full(kind);
            TorusParams p;
            p.s = 4.0;
            p.t = c.t;
            p.x0 = c.x0;
            p.alpha = c.alpha;
            p.beta = c.beta;
            p.kind = kind;
            const double amp = amplitude(p, c.x);
            CanonicalSampleFull unit = c;
            unit.sigma = 1.0;
            const auto d = phase_derivatives_full(kind, unit);
            worst = std::max(worst, rel_err(amp, d.gradX.norm()));
            if (!(amp >= 0.0)) worst = std::max(worst, 1.0);
        }
        return worst;
    }));

    rep.checks.push_back(run_check("cone-beam-angle-epsilon-1", 1e-12, [&] {
        return rel_err(cone_beam_angle_deg(1.0), 60.0);
    }));

    return rep;
}

std::vector<SuiteReport> verify_all(int samples, uint64_t seed) {
    return {verify_geometry(samples, seed), verify_microlocal(samples, seed)};
}

std::string format_report(const std::vector<SuiteReport>& reports) {
    std::ostringstream os;
    for (const auto& rep : reports) {
        os << "suite: " << rep.suite << "\n";
        for (const auto& c : rep.checks) {
            os << (c.passed ? "  PASS " : "  FAIL ") << c.name << "  worst=" << c.worst
               << "  tol=" << c.tol;
            if (!c.detail.empty()) os << "  (" << c.detail << ")";
            os << "\n";
        }
        os << "suite " << rep.suite << (rep.passed() ? " passed" : " FAILED") << "\n";
    }
    return os.str();
}

}  // namespace spindle
