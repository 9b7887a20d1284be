#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "spindle/geometry.hpp"

namespace spindle {

// The practical 3-D family: fixed vertical axis, z0 = 0, s = p/4 + 1,
// t = sqrt(p/4); data indexed by (p, x0, y0).
struct RestrictedParams {
    double p = 4.0;
    double x0 = 0.0;
    double y0 = 0.0;

    double t() const { return 0.5 * std::sqrt(p); }
    double s() const { return 0.25 * p + 1.0; }
    double r() const { return std::sqrt(0.25 * p + 1.0); }  // torus radius

    // Equivalent member of the 7-D family.
    TorusParams full(SurfaceKind kind) const;
    void validate() const;  // p > 0
};

// Planar squared distance and |x_T|^2 - 1 in the restricted convention
// (unlike the 7-D family, g here is squared).
struct RestrictedFields {
    double g;  // (x-x0)^2 + (y-y0)^2
    double h;  // g + z^2 - 1
    double u;  // h / g
};
RestrictedFields restricted_fields(double x0, double y0, const Vec3& x);

// Regular voxel grid, x-fastest storage, cell-centered samples:
// voxel (i,j,k) sits at origin + (i+1/2, j+1/2, k+1/2) .* spacing.
struct VoxelGrid {
    int nx = 0, ny = 0, nz = 0;
    Vec3 spacing = Vec3::Ones();
    Vec3 origin = Vec3::Zero();
    std::vector<double> values;

    static VoxelGrid zeros(int nx, int ny, int nz, const Vec3& spacing, const Vec3& origin);
    // Cube grid covering [center - half, center + half]^3 with n voxels per axis.
    static VoxelGrid cube(int n, double half, const Vec3& center = Vec3::Zero());

    size_t size() const { return values.size(); }
    size_t index(int i, int j, int k) const {
        return static_cast<size_t>(i) + static_cast<size_t>(nx) * (j + static_cast<size_t>(ny) * k);
    }
    double& at(int i, int j, int k) { return values[index(i, j, k)]; }
    double at(int i, int j, int k) const { return values[index(i, j, k)]; }
    Vec3 voxel_center(int i, int j, int k) const {
        return origin + Vec3((i + 0.5) * spacing.x(), (j + 0.5) * spacing.y(),
                             (k + 0.5) * spacing.z());
    }
    // Trilinear interpolation between voxel centers; zero outside.
    double sample(const Vec3& x) const;
    // Exact transpose of sample(): distribute v onto the 8 neighbor voxels.
    void splat(const Vec3& x, double v);

    double dot(const VoxelGrid& other) const;
    double norm() const { return std::sqrt(dot(*this)); }
};

// One parameter per datum; the two families never mix inside one grid.
using AnyParams = std::variant<TorusParams, RestrictedParams>;

struct DataGrid {
    std::vector<AnyParams> params;
    std::vector<double> values;
};

using ScalarField = std::function<double(const Vec3&)>;

// Surface integral of f over the surface clipped to the unit ball.
// Requires membership in the parameter set Y.
double apple_transform(const ScalarField& f, const TorusParams& params,
                       const QuadratureSpec& quad = {});
double lemon_transform(const ScalarField& f, const TorusParams& params,
                       const QuadratureSpec& quad = {});

// Clip regions of the restricted transforms: {z > 1} for the apple,
// the open unit ball about (x0, y0, 0) for the lemon.
RegionPredicate restricted_clip(const RestrictedParams& rp, SurfaceKind kind);

double restricted_transform(const ScalarField& f, const RestrictedParams& rp,
                            SurfaceKind kind, const QuadratureSpec& quad = {});

// Batched projector: one surface integral per parameter, volume sampled by
// trilinear interpolation.  Deterministic regardless of thread count.
DataGrid forward_project(const VoxelGrid& vol, const std::vector<AnyParams>& params,
                         SurfaceKind kind, const QuadratureSpec& quad);
DataGrid forward_project_serial(const VoxelGrid& vol, const std::vector<AnyParams>& params,
                                SurfaceKind kind, const QuadratureSpec& quad);

// Exact algebraic transpose of forward_project onto the given grid geometry.
// Parallel version accumulates per-thread volumes, merged in thread order:
// bitwise deterministic for a fixed thread count.
VoxelGrid adjoint_project(const DataGrid& data, SurfaceKind kind, const QuadratureSpec& quad,
                          const VoxelGrid& gridSpec);
VoxelGrid adjoint_project_serial(const DataGrid& data, SurfaceKind kind,
                                 const QuadratureSpec& quad, const VoxelGrid& gridSpec);

SurfaceQuadrature quadrature_for(const AnyParams& params, SurfaceKind kind,
                                 const QuadratureSpec& quad);

}  // namespace spindle
