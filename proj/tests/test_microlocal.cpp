#include <doctest.h>

#include <cmath>

#include "spindle/microlocal.hpp"
#include "spindle/verify.hpp"

using namespace spindle;

TEST_CASE("phase derivatives frozen values") {
    // identity frame, x = (3,0,0): g = 3
    CanonicalSampleFull c;
    c.sigma = 1.0;
    c.t = 1.0;
    c.alpha = 0.0;
    c.beta = 0.0;
    c.x0 = Vec3::Zero();
    c.x = Vec3(3, 0, 0);
    const auto da = phase_derivatives_full(SurfaceKind::Apple, c);
    CHECK(da.dS == doctest::Approx(-1.0));
    CHECK(da.dT == doctest::Approx(-4.0));  // 2 sigma (t - g)
    CHECK((da.gradX0 + da.gradX).norm() == 0.0);
    const auto dl = phase_derivatives_full(SurfaceKind::Lemon, c);
    CHECK(dl.dT == doctest::Approx(8.0));  // 2 sigma (t + g)

    // apple gradX0 = -2 sigma (I - (t/g) A) xT = -2 (1 - 1/3) (3,0,0) = (-4,0,0)
    CHECK((da.gradX0 - Vec3(-4, 0, 0)).norm() < 1e-14);
    CHECK((dl.gradX0 - Vec3(-8, 0, 0)).norm() < 1e-14);
}

TEST_CASE("left projection layout and derived s") {
    CanonicalSampleFull c;
    c.sigma = 2.0;
    c.t = 1.0;
    c.alpha = 0.3;
    c.beta = 0.8;
    c.x0 = Vec3(0.1, -0.2, 0.4);
    c.x = Vec3(0.6, 0.5, -0.3);
    const Vec14 v = left_projection_full(SurfaceKind::Apple, c);
    const auto d = phase_derivatives_full(SurfaceKind::Apple, c);
    CHECK(v[0] == d.dS);
    CHECK(v[1] == c.t);
    CHECK(v[2] == c.alpha);
    CHECK(v[3] == c.beta);
    CHECK((v.segment<3>(4) - c.x0).norm() == 0.0);
    CHECK((v.segment<3>(7) - d.gradX0).norm() == 0.0);
    CHECK(v[10] == d.dT);
    CHECK(v[11] == d.dAlpha);
    CHECK(v[12] == d.dBeta);
    CHECK(v[13] == doctest::Approx(surface_s(SurfaceKind::Apple, c)));
    // s = h - 2 t g puts x on the apple with that s
    TorusParams p;
    p.s = v[13];
    p.t = c.t;
    p.x0 = c.x0;
    p.alpha = c.alpha;
    p.beta = c.beta;
    p.kind = SurfaceKind::Apple;
    CHECK(std::abs(psi(p, c.x)) < 1e-12);
}

TEST_CASE("det of the gradX0 block") {
    CanonicalSampleFull c;
    c.sigma = 0.5;
    c.t = 1.0;
    c.alpha = 0.0;
    c.beta = 0.0;
    c.x = Vec3(2, 0, 0.7);  // g = 2 in the identity frame
    CHECK(det_gradx0_block(SurfaceKind::Apple, c) == doctest::Approx(-0.5));
    CHECK(gradx0_block(SurfaceKind::Apple, c).determinant() ==
          doctest::Approx(-0.5).epsilon(1e-12));
    // t = g -> zero
    c.x = Vec3(1, 0, 0.7);
    CHECK(det_gradx0_block(SurfaceKind::Apple, c) == doctest::Approx(0.0));
    // lemon never vanishes, sign = -sign(sigma^3)
    c.sigma = -1.3;
    CHECK(det_gradx0_block(SurfaceKind::Lemon, c) > 0.0);
}

TEST_CASE("cylinder case det(M) frozen value") {
    CanonicalSampleFull base;
    base.sigma = 1.0;
    base.t = 1.0;
    base.alpha = 0.0;
    base.beta = M_PI / 4;
    base.x0 = Vec3::Zero();
    CylinderPoint cyl;
    cyl.theta = 0.0;
    cyl.z = 1.0;
    cyl.t = 1.0;
    const auto r = det_M_cylinder(base, cyl);
    CHECK(r.det == doctest::Approx(-16.0 / std::sqrt(2.0)).epsilon(1e-10));
    // auxiliary scalar -t z sin(beta) cos(theta)
    CHECK(r.alphaScalar == doctest::Approx(-std::sin(M_PI / 4)).epsilon(1e-10));
    cyl.theta = M_PI / 2;
    CHECK(det_M_cylinder(base, cyl).alphaScalar == doctest::Approx(0.0).epsilon(1e-12));
    // z' = 0 -> degenerate-torus zero
    cyl.z = 0.0;
    CHECK(det_M_cylinder(base, cyl).det == doctest::Approx(0.0).epsilon(1e-12));

    cyl.t = 2.0;  // radius mismatch
    CHECK_THROWS_AS(det_M_cylinder(base, cyl), InvalidSampleError);
}

TEST_CASE("restricted projection frozen values") {
    CanonicalSampleRestricted c;
    c.sigma = 1.0;
    c.x0 = 0.0;
    c.y0 = 0.0;
    c.x = Vec3(1, 0, 2);
    const Vec6 out = restricted_projection(c);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 0.0);
    CHECK(out[3] == doctest::Approx(16.0));   // u h with u = 4, h = 4
    CHECK(out[4] == doctest::Approx(-16.0));  // -2 u u2 (x - x0)
    CHECK(out[5] == doctest::Approx(0.0));

    CHECK(det_restricted_jacobian(c) == doctest::Approx(-16384.0));
    CHECK(det_restricted_M3_closed(c) == doctest::Approx(-128.0));  // -h^2 u u2
    CHECK(restricted_M3(c).determinant() == doctest::Approx(-128.0).epsilon(1e-10));

    // z-reflection symmetry: bitwise equal output
    CanonicalSampleRestricted m = c;
    m.x.z() = -m.x.z();
    CHECK((restricted_projection(m) - out).norm() == 0.0);

    // zero factors of the determinant
    CanonicalSampleRestricted hyp = c;
    hyp.x = Vec3(1, 0, std::sqrt(2.0));  // u = 2
    CHECK(det_restricted_jacobian(hyp) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("amplitudes") {
    RestrictedParams rp;  // x0 = y0 = 0
    CHECK(amplitude_restricted(rp, Vec3(1, 0, 2)) ==
          doctest::Approx(8.0 * std::sqrt(20.0)).epsilon(1e-12));

    TorusParams p;
    p.s = 4.0;
    p.t = 1.0;
    p.alpha = 0.7;
    p.beta = 0.5;
    const Vec3 x(0.6, -0.2, 0.4);
    CHECK(amplitude(p, x) == doctest::Approx(grad_psi(p, x).norm()).epsilon(1e-14));
}

TEST_CASE("sylvester determinant identity") {
    const auto [a0, b0] = sylvester_check(Eigen::MatrixXd::Zero(3, 2),
                                          Eigen::MatrixXd::Zero(2, 3));
    CHECK(a0 == doctest::Approx(1.0));
    CHECK(b0 == doctest::Approx(1.0));

    Eigen::MatrixXd u(3, 1), v(1, 3);
    u << 1, 2, 3;
    v << -0.5, 0.25, 2;
    const auto [l, r] = sylvester_check(u, v);
    const double want = 1.0 + (v * u)(0, 0);
    CHECK(l == doctest::Approx(want).epsilon(1e-12));
    CHECK(r == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("artifact prediction") {
    RestrictedParams rp;
    rp.p = 4.0;
    rp.x0 = 0.2;
    rp.y0 = -0.1;
    const auto art = predict_artifacts(rp);
    CHECK(art.kind == ArtifactSet::Kind::Hyperboloid);
    REQUIRE(art.rings.size() == 2);
    for (const auto& ring : art.rings) {
        CHECK(std::abs(ring.height) == doctest::Approx(std::sqrt(2.0)));
        CHECK(ring.radius == doctest::Approx(1.0));
        CHECK(ring.center.x() == doctest::Approx(0.2));
        CHECK(ring.center.y() == doctest::Approx(-0.1));
    }
    // ring points satisfy the surface equation and u = 2
    const TorusParams tp = rp.full(SurfaceKind::Apple);
    for (const auto& pt : art.ring_points(64)) {
        CHECK(std::abs(psi(tp, pt)) < 1e-10);
        const auto rf = restricted_fields(rp.x0, rp.y0, pt);
        CHECK(rf.u == doctest::Approx(2.0).epsilon(1e-10));
    }

    // full-family apple rings lie on the surface and on {g = t}
    TorusParams full;
    full.s = 4.0;
    full.t = 1.0;
    full.alpha = 0.5;
    full.beta = 0.9;
    full.x0 = Vec3(0.3, 0, 0.1);
    const auto artFull = predict_artifacts(full);
    CHECK(artFull.kind == ArtifactSet::Kind::CylinderRings);
    for (const auto& pt : artFull.ring_points(64)) {
        CHECK(std::abs(psi(full, pt)) < 1e-10);
        CHECK(scalar_fields(full, pt).g == doctest::Approx(full.t).epsilon(1e-12));
    }

    TorusParams lem = full;
    lem.kind = SurfaceKind::Lemon;
    CHECK(predict_artifacts(lem).kind == ArtifactSet::Kind::None);
    CHECK(predict_artifacts(lem).rings.empty());
}

TEST_CASE("cone beam angle") {
    CHECK(cone_beam_angle_deg(1.0) == doctest::Approx(60.0).epsilon(1e-13));
    CHECK(cone_beam_angle_deg(1e6) == doctest::Approx(90.0));
    CHECK(cone_beam_angle_deg(0.0) == doctest::Approx(0.0));
}

TEST_CASE("bolker scan smoke") {
    // one-sided lemon band: no collisions, determinant bounded away from 0
    BolkerRegion band{0.05, 0.95};
    const auto lemon = bolker_scan(Family::Restricted_Lemon, band, 4000, 42);
    CHECK(lemon.collisions.empty());
    CHECK(lemon.minAbsDet > 0.0);
    CHECK(lemon.nFailures == 0);

    // symmetric band: collisions exist and all are z-reflections
    BolkerRegion sym{-0.95, 0.95};
    const auto both = bolker_scan(Family::Restricted_Lemon, sym, 4000, 42);
    CHECK(!both.collisions.empty());
    for (const auto& cp : both.collisions) CHECK(cp.isZReflection);

    // apple on the hyperboloid: closed-form determinant vanishes
    BolkerRegion hyp{1.05, 2.0};
    hyp.onHyperboloid = true;
    const auto apple = bolker_scan(Family::Restricted_Apple, hyp, 2000, 42);
    CHECK(apple.minAbsDetClosed <= 1e-8);

    // determinism
    const auto again = bolker_scan(Family::Restricted_Lemon, band, 4000, 42);
    CHECK(again.minAbsDet == lemon.minAbsDet);
    CHECK(again.collisions.size() == lemon.collisions.size());
}

TEST_CASE("verify suites pass") {
    for (const auto& rep : verify_all(300, 99)) {
        for (const auto& c : rep.checks) {
            INFO(rep.suite, "/", c.name, " worst=", c.worst, " tol=", c.tol);
            CHECK(c.passed);
        }
    }
}
