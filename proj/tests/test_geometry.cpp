#include <doctest.h>

#include <cmath>

#include "spindle/geometry.hpp"

using namespace spindle;

TEST_CASE("rotation matrix special angles") {
    const auto id = rotation_matrix(0.0, 0.0);
    CHECK((id.R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);

    const auto f = rotation_matrix(M_PI / 2, M_PI / 2);
    CHECK((f.R.col(0) - Vec3(0, 1, 0)).norm() < 1e-15);
    CHECK((f.R.col(1) - Vec3(0, 0, 1)).norm() < 1e-15);
    CHECK((f.R.col(2) - Vec3(1, 0, 0)).norm() < 1e-15);
}

TEST_CASE("rotation matrix orthogonality and A properties") {
    const auto f = rotation_matrix(0.3, 0.7);
    CHECK((f.R.transpose() * f.R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(f.R.determinant() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((f.A - f.A.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((f.A * f.A - f.A).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(f.A.trace() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK((f.A * f.r3).norm() < 1e-14);
}

TEST_CASE("scalar fields axis-aligned") {
    TorusParams p;  // s=4, t=1, x0=0, alpha=beta=0
    const auto sf = scalar_fields(p, Vec3(3, 0, 0));
    CHECK(sf.g == doctest::Approx(3.0));
    CHECK(sf.h == doctest::Approx(10.0));

    const auto center = scalar_fields(p, p.x0);
    CHECK(center.g == doctest::Approx(0.0));
    CHECK(center.h == doctest::Approx(1.0));  // t^2
}

TEST_CASE("scalar fields rotated frame matches explicit multiply") {
    TorusParams p;
    p.alpha = M_PI / 2;
    p.beta = M_PI / 2;
    const Vec3 x(0, 0, 2);
    const auto f = rotation_matrix(p.alpha, p.beta);
    const Vec3 xp = f.R.transpose() * (x - p.x0);
    const auto sf = scalar_fields(p, x);
    CHECK(sf.g == doctest::Approx(std::hypot(xp.x(), xp.y())).epsilon(1e-14));
}

TEST_CASE("psi on-surface values") {
    TorusParams apple;
    apple.kind = SurfaceKind::Apple;
    CHECK(psi(apple, Vec3(3, 0, 0)) == doctest::Approx(0.0).epsilon(1e-14));

    TorusParams lemon;
    lemon.kind = SurfaceKind::Lemon;
    CHECK(psi(lemon, Vec3(1, 0, 0)) == doctest::Approx(0.0).epsilon(1e-14));

    CHECK_THROWS_AS(psi(apple, Vec3(0, 0, 0.5)), DegeneratePointError);
}

TEST_CASE("grad psi closed form") {
    TorusParams lemon;
    lemon.kind = SurfaceKind::Lemon;  // t=1, identity frame
    const Vec3 g = grad_psi(lemon, Vec3(1, 0, 1));
    CHECK((g - Vec3(4, 0, 2)).norm() < 1e-12);

    TorusParams apple;
    apple.kind = SurfaceKind::Apple;
    apple.t = 1e-12;
    apple.s = 1.0;
    const Vec3 xT(0.3, -0.2, 0.7);
    CHECK((grad_psi(apple, xT) - 2.0 * xT).norm() < 1e-10);
}

TEST_CASE("singular points") {
    TorusParams p;
    p.x0 = Vec3(5, 0, 0);
    const auto [a, b] = singular_points(p);
    CHECK((a - Vec3(5, 0, std::sqrt(3.0))).norm() < 1e-14);
    CHECK((b - Vec3(5, 0, -std::sqrt(3.0))).norm() < 1e-14);

    TorusParams q;
    q.alpha = M_PI / 2;
    q.beta = M_PI / 2;
    const auto [c, d] = singular_points(q);
    CHECK((c - std::sqrt(3.0) * Vec3(1, 0, 0)).norm() < 1e-14);
    CHECK((d + std::sqrt(3.0) * Vec3(1, 0, 0)).norm() < 1e-14);

    TorusParams bad;
    bad.s = 0.9;  // <= t^2
    CHECK_THROWS_AS(singular_points(bad), InvalidParamsError);
}

TEST_CASE("parameter set Y") {
    TorusParams far;
    far.x0 = Vec3(5, 0, 0);
    CHECK(in_parameter_set_Y(far));

    TorusParams inside;
    inside.s = 1.21;
    inside.t = 1.0;  // singular points at z = +-sqrt(0.21), inside the ball
    CHECK_FALSE(in_parameter_set_Y(inside));

    TorusParams horn;
    horn.s = 1.0;
    horn.t = 1.0;
    CHECK_FALSE(in_parameter_set_Y(horn));
}

TEST_CASE("quadrature weights converge to analytic areas") {
    const double appleArea = analytic_area(SurfaceKind::Apple, 4.0, 1.0);
    const double lemonArea = analytic_area(SurfaceKind::Lemon, 4.0, 1.0);
    CHECK(appleArea == doctest::Approx(8 * M_PI * (2 * M_PI / 3 + std::sqrt(3.0))).epsilon(1e-12));
    CHECK(lemonArea == doctest::Approx(8 * M_PI * (std::sqrt(3.0) - M_PI / 3)).epsilon(1e-12));

    for (const SurfaceKind kind : {SurfaceKind::Apple, SurfaceKind::Lemon}) {
        TorusParams p;
        p.kind = kind;
        const double exact = analytic_area(kind, p.s, p.t);
        const double a256 =
            parametrize_surface(p, {256, 256}, clip_none()).total_weight();
        CHECK(std::abs(a256 - exact) / exact < 1e-3);

        // observed convergence order in the psi direction
        const double e1 =
            std::abs(parametrize_surface(p, {32, 256}, clip_none()).total_weight() - exact);
        const double e2 =
            std::abs(parametrize_surface(p, {64, 256}, clip_none()).total_weight() - exact);
        const double e3 =
            std::abs(parametrize_surface(p, {128, 256}, clip_none()).total_weight() - exact);
        CHECK(std::log2(e1 / e2) > 1.9);
        CHECK(std::log2(e2 / e3) > 1.9);
    }
}

TEST_CASE("emitted surface points satisfy psi") {
    TorusParams p;
    p.s = 3.0;
    p.t = 0.8;
    p.alpha = 1.1;
    p.beta = 0.6;
    p.x0 = Vec3(0.2, -0.1, 0.3);
    for (const SurfaceKind kind : {SurfaceKind::Apple, SurfaceKind::Lemon}) {
        p.kind = kind;
        const auto sq = parametrize_surface(p, {24, 24}, clip_none());
        for (const auto& pt : sq.points) {
            const auto sf = scalar_fields(p, pt.x);
            if (sf.g < 1e-12) continue;  // endpoint node on the axis
            CHECK(std::abs(psi(p, pt.x)) <= 1e-9 * p.s);
            // construction invariant: xPrime = R^T (x - x0)
            const auto f = rotation_matrix(p.alpha, p.beta);
            CHECK((pt.xPrime - f.R.transpose() * pt.xT).norm() < 1e-12);
        }
    }
}

TEST_CASE("parametrization endpoints approach the singular points") {
    TorusParams p;
    p.s = 4.0;
    p.t = 1.0;
    p.alpha = 0.4;
    p.beta = 0.9;
    const auto [s1, s2] = singular_points(p);
    for (const SurfaceKind kind : {SurfaceKind::Apple, SurfaceKind::Lemon}) {
        p.kind = kind;
        double dCoarse = 1e300, dFine = 1e300;
        for (const auto& pt : parametrize_surface(p, {32, 8}, clip_none()).points)
            dCoarse = std::min(dCoarse, std::min((pt.x - s1).norm(), (pt.x - s2).norm()));
        for (const auto& pt : parametrize_surface(p, {256, 8}, clip_none()).points)
            dFine = std::min(dFine, std::min((pt.x - s1).norm(), (pt.x - s2).norm()));
        CHECK(dFine <= dCoarse);
        CHECK(dFine < 1e-9);
    }
}

TEST_CASE("degenerate parameters rejected") {
    TorusParams p;
    p.t = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidParamsError);
    p.t = 1.0;
    p.s = 0.5;
    CHECK_THROWS_AS(p.validate(), InvalidParamsError);
    CHECK_THROWS_AS(parametrize_surface(p, {8, 8}, clip_none()), InvalidParamsError);
}
