#include "spindle/phantoms.hpp"

#include <cmath>

namespace spindle {

double PhantomSpec::evaluate(const Vec3& x) const {
    double acc = 0.0;
    for (const auto& c : components) {
        const double d = (x - c.center).norm();
        switch (c.kind) {
            case ComponentKind::Ball:
                if (d < c.radius) acc += c.value;
                break;
            case ComponentKind::Shell:
                if (std::abs(d - c.radius) < 0.5 * c.thickness) acc += c.value;
                break;
            case ComponentKind::GaussianBlob:
                acc += c.value * std::exp(-0.5 * d * d / (c.radius * c.radius));
                break;
        }
    }
    return acc;
}

VoxelGrid PhantomSpec::rasterize(const VoxelGrid& gridSpec) const {
    VoxelGrid out = VoxelGrid::zeros(gridSpec.nx, gridSpec.ny, gridSpec.nz, gridSpec.spacing,
                                     gridSpec.origin);
    // antialias with a 4^3 subvoxel average: point sampling leaves a staircase
    // on discontinuous components that pollutes every Fourier direction
    constexpr int ss = 4;
#pragma omp parallel for schedule(static)
    for (int k = 0; k < out.nz; ++k)
        for (int j = 0; j < out.ny; ++j)
            for (int i = 0; i < out.nx; ++i) {
                const Vec3 c = out.voxel_center(i, j, k);
                double acc = 0.0;
                for (int a = 0; a < ss; ++a)
                    for (int b = 0; b < ss; ++b)
                        for (int cc = 0; cc < ss; ++cc)
                            acc += evaluate(c + Vec3((a + 0.5) / ss - 0.5,
                                                     (b + 0.5) / ss - 0.5,
                                                     (cc + 0.5) / ss - 0.5)
                                                    .cwiseProduct(out.spacing));
                out.at(i, j, k) = acc / (ss * ss * ss);
            }
    return out;
}

RegionPredicate region_predicate(RegionName name, const Vec3& center, double radius,
                                 double zLo, double zHi) {
    switch (name) {
        case RegionName::UnitBall:
            return clip_unit_ball();
        case RegionName::HalfSpaceZgt1:
            return [](const Vec3& x) { return x.z() > 1.0; };
        case RegionName::Band:
            return [zLo, zHi](const Vec3& x) { return x.z() > zLo && x.z() < zHi; };
        case RegionName::BallAround:
            return [center, radius](const Vec3& x) { return (x - center).norm() < radius; };
    }
    return clip_none();
}

void require_inside(const PhantomSpec& spec, const RegionPredicate& region, int nProbe) {
    // probe a latitude/longitude shell of each component's bounding sphere
    for (size_t ci = 0; ci < spec.components.size(); ++ci) {
        const auto& c = spec.components[ci];
        if (!(c.radius > 0.0)) throw InvalidParamsError("phantom component radius must be > 0");
        const double r = (c.kind == ComponentKind::GaussianBlob) ? 3.0 * c.radius
                         : (c.kind == ComponentKind::Shell) ? c.radius + 0.5 * c.thickness
                                                            : c.radius;
        for (int a = 0; a < nProbe; ++a) {
            const double u = -1.0 + 2.0 * (a + 0.5) / nProbe;
            const double phi = 2.39996322972865332 * a;  // golden-angle spiral
            const double rho = std::sqrt(std::max(0.0, 1.0 - u * u));
            const Vec3 p = c.center + r * Vec3(rho * std::cos(phi), rho * std::sin(phi), u);
            if (!region(p))
                throw InvalidParamsError("phantom component " + std::to_string(ci) +
                                         " extends outside the required region");
        }
    }
}

}  // namespace spindle
