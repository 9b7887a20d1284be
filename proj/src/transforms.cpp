#include "spindle/transforms.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spindle {

TorusParams RestrictedParams::full(SurfaceKind kind) const {
    validate();
    TorusParams tp;
    tp.s = s();
    tp.t = t();
    tp.x0 = Vec3(x0, y0, 0.0);
    tp.alpha = 0.0;
    tp.beta = 0.0;
    tp.kind = kind;
    return tp;
}

void RestrictedParams::validate() const {
    if (!(p > 0.0)) throw InvalidParamsError("restricted parameter p must be positive");
}

RestrictedFields restricted_fields(double x0, double y0, const Vec3& x) {
    const double dx = x.x() - x0, dy = x.y() - y0;
    const double g = dx * dx + dy * dy;
    const double h = g + x.z() * x.z() - 1.0;
    return {g, h, h / g};
}

VoxelGrid VoxelGrid::zeros(int nx, int ny, int nz, const Vec3& spacing, const Vec3& origin) {
    VoxelGrid g;
    g.nx = nx; g.ny = ny; g.nz = nz;
    g.spacing = spacing;
    g.origin = origin;
    g.values.assign(static_cast<size_t>(nx) * ny * nz, 0.0);
    return g;
}

VoxelGrid VoxelGrid::cube(int n, double half, const Vec3& center) {
    const double h = 2.0 * half / n;
    return zeros(n, n, n, Vec3(h, h, h), center - Vec3(half, half, half));
}

namespace {

struct TrilinearStencil {
    int i0, j0, k0;
    double fx, fy, fz;
    bool valid;
};

TrilinearStencil stencil(const VoxelGrid& g, const Vec3& x) {
    // continuous index relative to voxel centers
    const double ci = (x.x() - g.origin.x()) / g.spacing.x() - 0.5;
    const double cj = (x.y() - g.origin.y()) / g.spacing.y() - 0.5;
    const double ck = (x.z() - g.origin.z()) / g.spacing.z() - 0.5;
    TrilinearStencil s;
    s.i0 = static_cast<int>(std::floor(ci));
    s.j0 = static_cast<int>(std::floor(cj));
    s.k0 = static_cast<int>(std::floor(ck));
    s.fx = ci - s.i0;
    s.fy = cj - s.j0;
    s.fz = ck - s.k0;
    s.valid = s.i0 >= 0 && s.j0 >= 0 && s.k0 >= 0 &&
              s.i0 + 1 < g.nx && s.j0 + 1 < g.ny && s.k0 + 1 < g.nz;
    return s;
}

}  // namespace

double VoxelGrid::sample(const Vec3& x) const {
    const auto s = stencil(*this, x);
    if (!s.valid) return 0.0;
    double acc = 0.0;
    for (int dk = 0; dk < 2; ++dk)
        for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) {
                const double w = (di ? s.fx : 1.0 - s.fx) *
                                 (dj ? s.fy : 1.0 - s.fy) *
                                 (dk ? s.fz : 1.0 - s.fz);
                acc += w * at(s.i0 + di, s.j0 + dj, s.k0 + dk);
            }
    return acc;
}

void VoxelGrid::splat(const Vec3& x, double v) {
    const auto s = stencil(*this, x);
    if (!s.valid) return;
    for (int dk = 0; dk < 2; ++dk)
        for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) {
                const double w = (di ? s.fx : 1.0 - s.fx) *
                                 (dj ? s.fy : 1.0 - s.fy) *
                                 (dk ? s.fz : 1.0 - s.fz);
                at(s.i0 + di, s.j0 + dj, s.k0 + dk) += w * v;
            }
}

double VoxelGrid::dot(const VoxelGrid& other) const {
    double acc = 0.0;
    for (size_t i = 0; i < values.size(); ++i) acc += values[i] * other.values[i];
    return acc;
}

namespace {

double integrate_over(const SurfaceQuadrature& sq, const ScalarField& f) {
    double acc = 0.0;
    for (const auto& pt : sq.points)
        if (pt.weight != 0.0) acc += pt.weight * f(pt.x);
    return acc;
}

double integrate_over(const SurfaceQuadrature& sq, const VoxelGrid& vol) {
    double acc = 0.0;
    for (const auto& pt : sq.points)
        if (pt.weight != 0.0) acc += pt.weight * vol.sample(pt.x);
    return acc;
}

}  // namespace

double apple_transform(const ScalarField& f, const TorusParams& params,
                       const QuadratureSpec& quad) {
    TorusParams p = params;
    p.kind = SurfaceKind::Apple;
    if (!in_parameter_set_Y(p))
        throw InvalidParamsError("parameters outside Y (singular points meet the unit ball)");
    return integrate_over(parametrize_surface(p, quad, clip_unit_ball()), f);
}

double lemon_transform(const ScalarField& f, const TorusParams& params,
                       const QuadratureSpec& quad) {
    TorusParams p = params;
    p.kind = SurfaceKind::Lemon;
    if (!in_parameter_set_Y(p))
        throw InvalidParamsError("parameters outside Y (singular points meet the unit ball)");
    return integrate_over(parametrize_surface(p, quad, clip_unit_ball()), f);
}

RegionPredicate restricted_clip(const RestrictedParams& rp, SurfaceKind kind) {
    if (kind == SurfaceKind::Apple)
        return [](const Vec3& x) { return x.z() > 1.0; };
    const Vec3 c(rp.x0, rp.y0, 0.0);
    return [c](const Vec3& x) { return (x - c).squaredNorm() < 1.0; };
}

double restricted_transform(const ScalarField& f, const RestrictedParams& rp,
                            SurfaceKind kind, const QuadratureSpec& quad) {
    const TorusParams tp = rp.full(kind);
    return integrate_over(parametrize_surface(tp, quad, restricted_clip(rp, kind)), f);
}

SurfaceQuadrature quadrature_for(const AnyParams& params, SurfaceKind kind,
                                 const QuadratureSpec& quad) {
    if (std::holds_alternative<TorusParams>(params)) {
        TorusParams tp = std::get<TorusParams>(params);
        tp.kind = kind;
        return parametrize_surface(tp, quad, clip_unit_ball());
    }
    const auto& rp = std::get<RestrictedParams>(params);
    return parametrize_surface(rp.full(kind), quad, restricted_clip(rp, kind));
}

DataGrid forward_project_serial(const VoxelGrid& vol, const std::vector<AnyParams>& params,
                                SurfaceKind kind, const QuadratureSpec& quad) {
    DataGrid out;
    out.params = params;
    out.values.resize(params.size());
    for (size_t i = 0; i < params.size(); ++i) {
        try {
            out.values[i] = integrate_over(quadrature_for(params[i], kind, quad), vol);
        } catch (const InvalidParamsError& e) {
            throw InvalidParamsError("parameter " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

DataGrid forward_project(const VoxelGrid& vol, const std::vector<AnyParams>& params,
                         SurfaceKind kind, const QuadratureSpec& quad) {
    DataGrid out;
    out.params = params;
    out.values.resize(params.size());
    const int64_t n = static_cast<int64_t>(params.size());
    std::string firstError;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        try {
            out.values[i] = integrate_over(quadrature_for(params[i], kind, quad), vol);
        } catch (const InvalidParamsError& e) {
#pragma omp critical
            if (firstError.empty())
                firstError = "parameter " + std::to_string(i) + ": " + e.what();
        }
    }
    if (!firstError.empty()) throw InvalidParamsError(firstError);
    return out;
}

VoxelGrid adjoint_project_serial(const DataGrid& data, SurfaceKind kind,
                                 const QuadratureSpec& quad, const VoxelGrid& gridSpec) {
    VoxelGrid out = VoxelGrid::zeros(gridSpec.nx, gridSpec.ny, gridSpec.nz,
                                     gridSpec.spacing, gridSpec.origin);
    for (size_t i = 0; i < data.params.size(); ++i) {
        const double v = data.values[i];
        if (v == 0.0) continue;
        const auto sq = quadrature_for(data.params[i], kind, quad);
        for (const auto& pt : sq.points)
            if (pt.weight != 0.0) out.splat(pt.x, pt.weight * v);
    }
    return out;
}

VoxelGrid adjoint_project(const DataGrid& data, SurfaceKind kind, const QuadratureSpec& quad,
                          const VoxelGrid& gridSpec) {
    VoxelGrid out = VoxelGrid::zeros(gridSpec.nx, gridSpec.ny, gridSpec.nz,
                                     gridSpec.spacing, gridSpec.origin);
#ifdef _OPENMP
    const int nthreads = omp_get_max_threads();
#else
    const int nthreads = 1;
#endif
    std::vector<VoxelGrid> partial(nthreads, out);
    const int64_t n = static_cast<int64_t>(data.params.size());
    std::string firstError;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
#ifdef _OPENMP
        VoxelGrid& mine = partial[omp_get_thread_num()];
#else
        VoxelGrid& mine = partial[0];
#endif
        const double v = data.values[i];
        if (v == 0.0) continue;
        try {
            const auto sq = quadrature_for(data.params[i], kind, quad);
            for (const auto& pt : sq.points)
                if (pt.weight != 0.0) mine.splat(pt.x, pt.weight * v);
        } catch (const InvalidParamsError& e) {
#pragma omp critical
            if (firstError.empty())
                firstError = "parameter " + std::to_string(i) + ": " + e.what();
        }
    }
    if (!firstError.empty()) throw InvalidParamsError(firstError);
    // merge in thread order so the accumulation order is fixed
    for (const auto& part : partial)
        for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += part.values[i];
    return out;
}

}  // namespace spindle
