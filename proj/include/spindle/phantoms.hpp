#pragma once

#include <string>
#include <vector>

#include "spindle/transforms.hpp"

namespace spindle {

enum class ComponentKind { Ball, Shell, GaussianBlob };

struct PhantomComponent {
    ComponentKind kind = ComponentKind::Ball;
    Vec3 center = Vec3::Zero();
    double radius = 0.5;
    double value = 1.0;
    double thickness = 0.1;  // shells only
};

struct PhantomSpec {
    std::vector<PhantomComponent> components;

    double evaluate(const Vec3& x) const;
    VoxelGrid rasterize(const VoxelGrid& gridSpec) const;
};

// Named region predicates mirroring the transform supports.
enum class RegionName { UnitBall, HalfSpaceZgt1, Band, BallAround };

// Band: {zLo < z < zHi}; BallAround: open ball of radius `radius` at `center`.
RegionPredicate region_predicate(RegionName name, const Vec3& center = Vec3::Zero(),
                                 double radius = 1.0, double zLo = -1.0, double zHi = 1.0);

// Throws InvalidParamsError when some component sticks out of the region.
void require_inside(const PhantomSpec& spec, const RegionPredicate& region, int nProbe = 64);

}  // namespace spindle
