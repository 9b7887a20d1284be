#include "spindle/wavefront.hpp"

#include <cmath>
#include <complex>

namespace spindle {

namespace {

struct WindowCache {
    // indices and window-weighted samples of the voxels under the bump
    std::vector<Vec3> offsets;  // x - point
    std::vector<double> wf;     // window * volume value
    double l1 = 0.0;            // sum |wf|, for the numerical floor
};

WindowCache collect_window(const VoxelGrid& vol, const Vec3& point, double radius) {
    WindowCache c;
    const Vec3 lo = point - Vec3::Constant(radius);
    const Vec3 hi = point + Vec3::Constant(radius);
    auto clampi = [](int v, int n) { return std::min(std::max(v, 0), n - 1); };
    const int i0 = clampi(static_cast<int>(std::floor((lo.x() - vol.origin.x()) / vol.spacing.x() - 0.5)), vol.nx);
    const int i1 = clampi(static_cast<int>(std::ceil((hi.x() - vol.origin.x()) / vol.spacing.x() - 0.5)), vol.nx);
    const int j0 = clampi(static_cast<int>(std::floor((lo.y() - vol.origin.y()) / vol.spacing.y() - 0.5)), vol.ny);
    const int j1 = clampi(static_cast<int>(std::ceil((hi.y() - vol.origin.y()) / vol.spacing.y() - 0.5)), vol.ny);
    const int k0 = clampi(static_cast<int>(std::floor((lo.z() - vol.origin.z()) / vol.spacing.z() - 0.5)), vol.nz);
    const int k1 = clampi(static_cast<int>(std::ceil((hi.z() - vol.origin.z()) / vol.spacing.z() - 0.5)), vol.nz);
    for (int k = k0; k <= k1; ++k)
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                const Vec3 d = vol.voxel_center(i, j, k) - point;
                const double r = d.norm();
                if (r >= radius) continue;
                // C-infinity bump: a merely C^1 window (raised cosine) leaks
                // ~lambda^-3 from its own edge sphere into every direction,
                // destroying the radial/tangential separation
                const double s2 = (r / radius) * (r / radius);
                const double w = std::exp(1.0 - 1.0 / (1.0 - s2));
                const double v = w * vol.at(i, j, k);
                if (v == 0.0) continue;
                c.offsets.push_back(d);
                c.wf.push_back(v);
                c.l1 += std::abs(v);
            }
    return c;
}

}  // namespace

WavefrontReport wf_detect(const VoxelGrid& volume, const std::vector<WavefrontQuery>& queries,
                          const WavefrontConfig& cfg) {
    WavefrontReport rep;
    rep.exponentCutoff = cfg.exponentCutoff;
    rep.detections.resize(queries.size());

    const double hMin = volume.spacing.minCoeff();
    const double radius = cfg.windowRadiusVoxels * volume.spacing.maxCoeff();
    const double lamMax = cfg.nyquistFraction * M_PI / hMin;
    const double dLam = lamMax / cfg.nLambda;
    const double voxVol = volume.spacing.prod();

    const Vec3 span(volume.nx * volume.spacing.x(), volume.ny * volume.spacing.y(),
                    volume.nz * volume.spacing.z());
    for (const auto& q : queries) {
        const Vec3 rel = q.point - volume.origin;
        for (int a = 0; a < 3; ++a)
            if (rel[a] < radius || rel[a] > span[a] - radius)
                throw InvalidParamsError("wavefront window does not fit inside the volume");
    }

    const int64_t nq = static_cast<int64_t>(queries.size());
#pragma omp parallel for schedule(static)
    for (int64_t qi = 0; qi < nq; ++qi) {
        const auto& q = queries[qi];
        WavefrontDetection det;
        det.point = q.point;
        det.direction = q.direction.normalized();

        const WindowCache win = collect_window(volume, q.point, radius);
        const double floor = 1e-14 * win.l1 * voxVol;

        std::vector<double> lx, ly;
        for (int m = cfg.skipLowest; m < cfg.nLambda; ++m) {
            const double lam = (m + 1) * dLam;
            std::complex<double> F(0.0, 0.0);
            for (size_t n = 0; n < win.wf.size(); ++n) {
                const double ph = -lam * det.direction.dot(win.offsets[n]);
                F += win.wf[n] * std::complex<double>(std::cos(ph), std::sin(ph));
            }
            const double mag = std::abs(F) * voxVol;
            if (mag <= floor) continue;  // machine-precision plateau; not decay data
            lx.push_back(std::log(1.0 + lam));
            ly.push_back(std::log(mag));
        }

        if (lx.size() < 5) {
            // everything below the floor: rapidly decaying, i.e. smooth
            det.exponent = cfg.exponentCutoff + 10.0;
            det.singular = false;
        } else {
            // least-squares slope of log|F| vs log(1 + lambda)
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(lx.size());
            for (size_t m = 0; m < lx.size(); ++m) {
                sx += lx[m];
                sy += ly[m];
                sxx += lx[m] * lx[m];
                sxy += lx[m] * ly[m];
            }
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            det.exponent = -slope;
            det.singular = det.exponent < cfg.exponentCutoff;
        }
        rep.detections[qi] = det;
    }
    return rep;
}

}  // namespace spindle
