#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "spindle/microlocal.hpp"
#include "spindle/phantoms.hpp"

namespace spindle {

// Matched projector/backprojector pair acting between a fixed voxel grid
// geometry and a fixed parameter list.
struct LinearOperator {
    std::function<std::vector<double>(const VoxelGrid&)> forward;
    std::function<VoxelGrid(const std::vector<double>&)> adjoint;
    VoxelGrid gridSpec;  // geometry only; values ignored
    size_t nData = 0;
};

// Projector pair from the transforms module.
LinearOperator make_projector(const std::vector<AnyParams>& params, SurfaceKind kind,
                              const QuadratureSpec& quad, const VoxelGrid& gridSpec);

struct NormEstimate {
    double norm = 0.0;
    bool converged = false;
    std::vector<double> history;  // per-iteration estimates, nondecreasing
};

// Power iteration on A^T A; returns sqrt of the dominant eigenvalue.
NormEstimate estimate_operator_norm(const LinearOperator& op, int iters = 30,
                                    uint64_t seed = 0, double relTol = 1e-3);

struct LandweberConfig {
    double stepScale = 1.0;  // fraction of 1/||A||^2 (must be in (0,2))
    int iterations = 50;
    bool nonnegativity = false;
    int normIters = 30;
    uint64_t seed = 0;
};

struct ReconReport {
    std::vector<double> residualNorms;  // ||d - A x_k||, k = 0..iterations
    VoxelGrid volume;
    double operatorNorm = 0.0;
    double ringArtifactEnergy = 0.0;  // artifact experiment only
    double backgroundEnergy = 0.0;
    double ratio = 0.0;  // ring/background mean-square energy; 0 when undefined
    bool ratioDefined = false;
};

// x_{k+1} = x_k + lambda A^T (d - A x_k), x_0 = 0,
// lambda = stepScale / ||A||^2.  Throws on residual growth > 10%.
ReconReport landweber(const std::vector<double>& data, const LinearOperator& op,
                      const LandweberConfig& cfg);

// Dense matrix whose columns are forward projections of voxel indicators.
// Guarded to grids <= 12^3 and <= 500 parameters.
Eigen::MatrixXd build_dense_operator(const LinearOperator& op);

struct ArtifactExperimentConfig {
    PhantomSpec phantom;
    Family family = Family::Restricted_Apple;
    std::vector<AnyParams> params;
    VoxelGrid gridSpec;
    QuadratureSpec quad;
    LandweberConfig landweber;
    int maskDilation = 2;
    // Extra radius around each phantom component excluded from the energy
    // statistics, so reconstruction smear near the phantom does not count as
    // ring or background energy.
    double exclusionPad = 0.0;
    // Mask geometry; defaults to predict_artifacts of the family.  Lemon
    // control runs must supply a matched ring inside their support band.
    std::optional<ArtifactSet> maskOverride;
};

// Noiseless simulate -> reconstruct -> compare mean-square energy on the
// (dilated) predicted ring mask vs the background, both excluding the
// dilated phantom support.
ReconReport artifact_experiment(const ArtifactExperimentConfig& cfg);

}  // namespace spindle
