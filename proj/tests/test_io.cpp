#include <doctest.h>

#include <cstdio>
#include <random>
#include <string>

#include "spindle/io.hpp"

using namespace spindle;

namespace {

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& name) : path("/tmp/spindle_test_" + name) {}
    ~TempPath() {
        std::remove(path.c_str());
        std::remove((path + ".hdr").c_str());
    }
};

}  // namespace

TEST_CASE("volume round trip") {
    TempPath t("vol.raw");
    VoxelGrid vol = VoxelGrid::zeros(4, 3, 2, Vec3(0.1, 0.2, 0.3), Vec3(-1, 0.5, 2));
    std::mt19937 rng(1);
    std::uniform_real_distribution<float> uni(-1.0f, 1.0f);
    for (auto& v : vol.values) v = uni(rng);  // f32-representable values
    write_volume(t.path, vol);
    const VoxelGrid back = read_volume(t.path);
    CHECK(back.nx == 4);
    CHECK(back.ny == 3);
    CHECK(back.nz == 2);
    CHECK((back.spacing - vol.spacing).norm() == 0.0);
    CHECK((back.origin - vol.origin).norm() == 0.0);
    REQUIRE(back.values.size() == vol.values.size());
    for (size_t i = 0; i < vol.values.size(); ++i) CHECK(back.values[i] == vol.values[i]);
}

TEST_CASE("full params round trip") {
    TempPath t("full.csv");
    std::vector<AnyParams> params;
    TorusParams tp;
    tp.s = 4.5;
    tp.t = 1.25;
    tp.x0 = Vec3(0.1, -0.2, 0.3);
    tp.alpha = 1.1;
    tp.beta = 0.6;
    params.emplace_back(tp);
    tp.s = 3.0;
    params.emplace_back(tp);
    write_params(t.path, params, SurfaceKind::Lemon);
    const auto [back, kind] = read_params(t.path);
    CHECK(kind == SurfaceKind::Lemon);
    REQUIRE(back.size() == 2);
    const auto& b0 = std::get<TorusParams>(back[0]);
    CHECK(b0.s == 4.5);
    CHECK(b0.t == 1.25);
    CHECK((b0.x0 - Vec3(0.1, -0.2, 0.3)).norm() == 0.0);
    CHECK(b0.alpha == 1.1);
    CHECK(b0.beta == 0.6);
    CHECK(std::get<TorusParams>(back[1]).s == 3.0);
}

TEST_CASE("restricted params round trip") {
    TempPath t("restricted.csv");
    std::vector<AnyParams> params;
    RestrictedParams rp;
    rp.p = 3.75;
    rp.x0 = -0.125;
    rp.y0 = 0.25;
    params.emplace_back(rp);
    write_params(t.path, params, SurfaceKind::Apple);
    const auto [back, kind] = read_params(t.path);
    CHECK(kind == SurfaceKind::Apple);
    REQUIRE(back.size() == 1);
    const auto& b = std::get<RestrictedParams>(back[0]);
    CHECK(b.p == 3.75);
    CHECK(b.x0 == -0.125);
    CHECK(b.y0 == 0.25);
}

TEST_CASE("data round trip") {
    TempPath t("data.csv");
    const std::vector<double> values{0.0, -1.5, 3.25, 1e-17, 7.123456789012345};
    write_data(t.path, values);
    const auto back = read_data(t.path);
    REQUIRE(back.size() == values.size());
    for (size_t i = 0; i < values.size(); ++i) CHECK(back[i] == values[i]);
}

TEST_CASE("phantom round trip") {
    TempPath t("phantom.txt");
    PhantomSpec spec;
    spec.components.push_back({ComponentKind::Ball, Vec3(0.5, 0, 1.5), 0.25, 2.0});
    spec.components.push_back({ComponentKind::Shell, Vec3(0, 0, 0), 0.5, 1.0, 0.125});
    spec.components.push_back({ComponentKind::GaussianBlob, Vec3(-0.1, 0.2, 0), 0.3, -1.0});
    write_phantom(t.path, spec);
    const PhantomSpec back = read_phantom(t.path);
    REQUIRE(back.components.size() == 3);
    CHECK(back.components[0].kind == ComponentKind::Ball);
    CHECK(back.components[0].radius == 0.25);
    CHECK(back.components[1].kind == ComponentKind::Shell);
    CHECK(back.components[1].thickness == 0.125);
    CHECK(back.components[2].kind == ComponentKind::GaussianBlob);
    CHECK(back.components[2].value == -1.0);
}

TEST_CASE("malformed inputs rejected") {
    TempPath t("bad.csv");
    {
        FILE* f = fopen(t.path.c_str(), "w");
        fputs("kind,p,x0,y0\napple,1.0,0.0\n", f);  // missing a column
        fclose(f);
    }
    CHECK_THROWS_AS(read_params(t.path), IoError);
    CHECK_THROWS_AS(read_volume("/tmp/definitely_missing_spindle_vol"), IoError);
}

TEST_CASE("family names") {
    for (const Family f : {Family::Full7D_Apple, Family::Full7D_Lemon,
                           Family::Restricted_Apple, Family::Restricted_Lemon})
        CHECK(parse_family(family_name(f)) == f);
    CHECK_THROWS_AS(parse_family("bogus"), IoError);
}
