#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spindle/transforms.hpp"

namespace spindle {

// Point on the canonical relation of the 7-D transforms, in the coordinates
// (t, x0, alpha, beta; x; sigma); s is derived from the critical-set
// condition s = h -+ 2 t g.
struct CanonicalSampleFull {
    double sigma = 1.0;
    double t = 1.0;
    Vec3 x0 = Vec3::Zero();
    double alpha = 0.0;
    double beta = 0.7;
    Vec3 x = Vec3::UnitX();
};

// Point on the canonical relation of the restricted transforms.
struct CanonicalSampleRestricted {
    double sigma = 1.0;
    double x0 = 0.0;
    double y0 = 0.0;
    Vec3 x = Vec3(1.0, 0.0, 2.0);
};

struct CylinderPoint {
    double theta = 0.0;
    double z = 1.0;   // height in the axis frame (z' coordinate)
    double t = 1.0;   // cylinder radius
};

struct PhaseDerivatives {
    double dS;      // d_s Phi = -sigma
    double dT;      // 2 sigma (t -+ g)
    double dAlpha;
    double dBeta;
    Vec3 gradX0;
    Vec3 gradX;     // = -gradX0
};

// Closed-form derivatives of Phi_j = sigma Psi_j.  The alpha/beta signs are
// the finite-difference-verified ones: apple -(2 sigma t / g) Q, lemon +.
PhaseDerivatives phase_derivatives_full(SurfaceKind kind, const CanonicalSampleFull& c);

// Left projection output, component order
// (dS, t, alpha, beta, x0, gradX0, dT, dAlpha, dBeta, s).
using Vec14 = Eigen::Matrix<double, 14, 1>;
Vec14 left_projection_full(SurfaceKind kind, const CanonicalSampleFull& c);

// Derived s so that x lies on the surface through it.
double surface_s(SurfaceKind kind, const CanonicalSampleFull& c);

// det D_x(gradX0) = -(2 sigma)^3 (1 -+ t/g).
double det_gradx0_block(SurfaceKind kind, const CanonicalSampleFull& c);
Mat3 gradx0_block(SurfaceKind kind, const CanonicalSampleFull& c);  // closed-form Jacobian

// The 3x3 submatrix of the left-projection Jacobian singled out on the
// cylinder {g = t}, rows = x-gradients of (dT, dAlpha, s), assembled from
// the closed forms; det = -16 sigma^2 z t cos(beta).
struct CylinderCaseResult {
    Mat3 M;
    double det;
    double alphaScalar;  // x_T^T (r1a^T, r2a^T)(r1; r2) x_T = -t z sin(beta) cos(theta)
};
CylinderCaseResult det_M_cylinder(const CanonicalSampleFull& base, const CylinderPoint& cyl,
                                  double tol = 1e-9);

// Restricted left projection (sigma, x0, y0, u h, -2 sigma u u2 (x-x0),
// -2 sigma u u2 (y-y0)).
using Vec6 = Eigen::Matrix<double, 6, 1>;
Vec6 restricted_projection(const CanonicalSampleRestricted& c);

// det D Pi_L = -16 z sigma^2 u^4 (u - 2); also the inner 3x3 block identity
// det(M3) = -h^2 u (u - 2).
double det_restricted_jacobian(const CanonicalSampleRestricted& c);
Mat3 restricted_M3(const CanonicalSampleRestricted& c);
double det_restricted_M3_closed(const CanonicalSampleRestricted& c);

// ||grad Psi||; full: 2 |(I -+ (t/g) A) x_T|, restricted: 2u sqrt(g(u-2)^2 + 4z^2).
double amplitude(const TorusParams& params, const Vec3& x);
double amplitude_restricted(const RestrictedParams& rp, const Vec3& x);

// Sylvester determinant pair (det(I + AB), det(I + BA)).
std::pair<double, double> sylvester_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

enum class Family { Full7D_Apple, Full7D_Lemon, Restricted_Apple, Restricted_Lemon };

struct BolkerRegion {
    double zMin = 0.0;  // restricted families: admissible z range for x
    double zMax = 1.0;
    // Restricted apple only: resample until u >= uMin (keeps the scan away
    // from the {u = 2} boundary where the determinant vanishes).
    double uMin = 0.0;
    // Restricted apple only: place every sample on the hyperboloid {u = 2}.
    bool onHyperboloid = false;
};

struct CollisionPair {
    Vec3 x1, x2;
    bool isZReflection;  // x2 == (x1.x, x1.y, -x1.z) within tolerance
};

struct BolkerReport {
    Family family;
    int64_t nSamples = 0;
    double minAbsDet = 0.0;        // restricted families: FD determinant, normalized
    double minAbsDetClosed = 0.0;  // restricted families: closed form, normalized
    double minSingularRatio = 0.0;  // full families: min over samples of sigma_min/sigma_max
    std::vector<CollisionPair> collisions;
    int64_t nFailures = 0;  // samples that could not be evaluated
};

// Immersion + injectivity sampling scan; deterministic for a fixed seed.
BolkerReport bolker_scan(Family family, const BolkerRegion& region, int64_t nSamples,
                         uint64_t seed);

struct ArtifactRing {
    Vec3 center;
    Vec3 axis;      // unit
    double radius;
    double height;  // signed offset of the ring plane along the axis from x0
};

struct ArtifactSet {
    enum class Kind { CylinderRings, Hyperboloid, None } kind = Kind::None;
    std::vector<ArtifactRing> rings;
    std::string description;

    std::vector<Vec3> ring_points(int nTheta = 256) const;
    // Mask of voxels within `dilate` voxels of any ring.
    VoxelGrid mask(const VoxelGrid& gridSpec, int dilate = 2) const;
};

// Predicted Bolker-failure locus for translated apple families: the rings
// where the apple meets the cylinder {g = t} (full case) / the hyperboloid
// {u = 2} (restricted case).  Lemon families have no predicted set.
ArtifactSet predict_artifacts(const TorusParams& params);
ArtifactSet predict_artifacts(const RestrictedParams& rp);

// Cone-beam opening angle gamma(epsilon), degrees.
double cone_beam_angle_deg(double epsilon);

}  // namespace spindle
