#pragma once

#include <vector>

#include "spindle/transforms.hpp"

namespace spindle {

struct WavefrontQuery {
    Vec3 point;
    Vec3 direction;  // unit
};

struct WavefrontDetection {
    Vec3 point;
    Vec3 direction;
    double exponent;  // fitted decay exponent of |F(phi f)(lambda xi)|
    bool singular;    // exponent below the cutoff
};

struct WavefrontReport {
    std::vector<WavefrontDetection> detections;  // one entry per query
    double exponentCutoff = 1.9;
};

struct WavefrontConfig {
    double windowRadiusVoxels = 10.0;  // bump-window radius in voxels
    // The measured exponent saturates near 2.4 for smooth data (the window's
    // own apparent decay over the fitted band), while jumps read near 1.3, so
    // the cutoff sits between the two.
    double exponentCutoff = 1.9;      // exponent below this flags a singularity
    int nLambda = 48;                 // frequency samples along the ray
    int skipLowest = 4;               // lowest frequencies excluded from the fit
    double nyquistFraction = 0.5;     // top of the fitted band
};

// Windowed-Fourier decay probe: multiply the volume by a smooth radial bump
// at each query point, evaluate the Fourier transform along the ray
// lambda * direction, and fit log |F| against log(1 + lambda).
WavefrontReport wf_detect(const VoxelGrid& volume, const std::vector<WavefrontQuery>& queries,
                          const WavefrontConfig& cfg = {});

}  // namespace spindle
