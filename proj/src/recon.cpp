#include "spindle/recon.hpp"

#include <cmath>
#include <random>

namespace spindle {

LinearOperator make_projector(const std::vector<AnyParams>& params, SurfaceKind kind,
                              const QuadratureSpec& quad, const VoxelGrid& gridSpec) {
    LinearOperator op;
    op.gridSpec = VoxelGrid::zeros(gridSpec.nx, gridSpec.ny, gridSpec.nz, gridSpec.spacing,
                                   gridSpec.origin);
    op.nData = params.size();
    op.forward = [params, kind, quad](const VoxelGrid& vol) {
        return forward_project(vol, params, kind, quad).values;
    };
    VoxelGrid spec = op.gridSpec;
    op.adjoint = [params, kind, quad, spec](const std::vector<double>& d) {
        DataGrid dg;
        dg.params = params;
        dg.values = d;
        return adjoint_project(dg, kind, quad, spec);
    };
    return op;
}

NormEstimate estimate_operator_norm(const LinearOperator& op, int iters, uint64_t seed,
                                    double relTol) {
    NormEstimate est;
    VoxelGrid v = op.gridSpec;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (auto& x : v.values) x = uni(rng);
    double nv = v.norm();
    if (nv == 0.0) return est;
    for (auto& x : v.values) x /= nv;

    double prev = 0.0;
    for (int it = 0; it < iters; ++it) {
        VoxelGrid w = op.adjoint(op.forward(v));
        const double lambda = w.dot(v);  // Rayleigh quotient of A^T A
        const double cur = std::sqrt(std::max(0.0, lambda));
        est.history.push_back(std::max(cur, prev));
        const double nw = w.norm();
        if (nw == 0.0) {
            est.norm = 0.0;
            est.converged = true;
            return est;
        }
        for (auto& x : w.values) x /= nw;
        v = std::move(w);
        if (it > 0 && std::abs(cur - prev) <= relTol * std::max(cur, 1e-300))
            est.converged = true;
        prev = cur;
    }
    est.norm = est.history.empty() ? 0.0 : est.history.back();
    return est;
}

ReconReport landweber(const std::vector<double>& data, const LinearOperator& op,
                      const LandweberConfig& cfg) {
    if (!(cfg.stepScale > 0.0 && cfg.stepScale < 2.0))
        throw InvalidParamsError("stepScale must be in (0, 2)");
    if (data.size() != op.nData) throw InvalidParamsError("data length mismatch");

    ReconReport rep;
    const auto est = estimate_operator_norm(op, cfg.normIters, cfg.seed);
    rep.operatorNorm = est.norm;
    const double n2 = est.norm * est.norm;
    const double lambda = (n2 > 0.0) ? cfg.stepScale / n2 : 0.0;

    VoxelGrid x = op.gridSpec;
    auto residual = [&](const VoxelGrid& xk) {
        std::vector<double> r = op.forward(xk);
        double nrm = 0.0;
        for (size_t i = 0; i < r.size(); ++i) {
            r[i] = data[i] - r[i];
            nrm += r[i] * r[i];
        }
        return std::make_pair(std::move(r), std::sqrt(nrm));
    };

    auto [r, rn] = residual(x);
    rep.residualNorms.push_back(rn);
    for (int it = 0; it < cfg.iterations; ++it) {
        const VoxelGrid g = op.adjoint(r);
        for (size_t i = 0; i < x.values.size(); ++i) {
            x.values[i] += lambda * g.values[i];
            if (cfg.nonnegativity && x.values[i] < 0.0) x.values[i] = 0.0;
        }
        std::tie(r, rn) = residual(x);
        if (rn > 1.1 * rep.residualNorms.back() + 1e-300)
            throw std::runtime_error("landweber diverged: residual grew by more than 10%");
        rep.residualNorms.push_back(rn);
    }
    rep.volume = std::move(x);
    return rep;
}

Eigen::MatrixXd build_dense_operator(const LinearOperator& op) {
    const size_t nVox = op.gridSpec.size();
    if (nVox > 12u * 12u * 12u) throw InvalidParamsError("dense operator: grid exceeds 12^3");
    if (op.nData > 500) throw InvalidParamsError("dense operator: more than 500 parameters");
    Eigen::MatrixXd M(static_cast<Eigen::Index>(op.nData), static_cast<Eigen::Index>(nVox));
    VoxelGrid e = op.gridSpec;
    for (size_t j = 0; j < nVox; ++j) {
        std::fill(e.values.begin(), e.values.end(), 0.0);
        e.values[j] = 1.0;
        const auto col = op.forward(e);
        for (size_t i = 0; i < col.size(); ++i) M(static_cast<Eigen::Index>(i),
                                                  static_cast<Eigen::Index>(j)) = col[i];
    }
    return M;
}

namespace {

// Effective support radius of a phantom component.
double support_radius(const PhantomComponent& c) {
    switch (c.kind) {
        case ComponentKind::Ball: return c.radius;
        case ComponentKind::Shell: return c.radius + 0.5 * c.thickness;
        case ComponentKind::GaussianBlob: return 3.0 * c.radius;
    }
    return c.radius;
}

}  // namespace

ReconReport artifact_experiment(const ArtifactExperimentConfig& cfg) {
    const bool apple =
        cfg.family == Family::Restricted_Apple || cfg.family == Family::Full7D_Apple;
    const SurfaceKind kind = apple ? SurfaceKind::Apple : SurfaceKind::Lemon;

    const VoxelGrid phantomVol = cfg.phantom.rasterize(cfg.gridSpec);
    const LinearOperator op = make_projector(cfg.params, kind, cfg.quad, cfg.gridSpec);
    const std::vector<double> data = op.forward(phantomVol);

    ReconReport rep = landweber(data, op, cfg.landweber);

    // Mask geometry: predicted rings (or the supplied control set).
    ArtifactSet art;
    if (cfg.maskOverride) {
        art = *cfg.maskOverride;
    } else if (!cfg.params.empty() &&
               std::holds_alternative<RestrictedParams>(cfg.params.front())) {
        art = predict_artifacts(std::get<RestrictedParams>(cfg.params.front()));
    } else if (!cfg.params.empty()) {
        art = predict_artifacts(std::get<TorusParams>(cfg.params.front()));
    }
    if (art.rings.empty()) return rep;  // nothing to measure against

    const VoxelGrid ringMask = art.mask(cfg.gridSpec, cfg.maskDilation);

    const double pad = cfg.maskDilation * cfg.gridSpec.spacing.maxCoeff() + cfg.exclusionPad;
    auto inPhantom = [&](const Vec3& p) {
        for (const auto& c : cfg.phantom.components)
            if ((p - c.center).norm() < support_radius(c) + pad) return true;
        return false;
    };

    double ringSum = 0.0, bgSum = 0.0;
    long ringN = 0, bgN = 0;
    for (int k = 0; k < cfg.gridSpec.nz; ++k)
        for (int j = 0; j < cfg.gridSpec.ny; ++j)
            for (int i = 0; i < cfg.gridSpec.nx; ++i) {
                if (inPhantom(cfg.gridSpec.voxel_center(i, j, k))) continue;
                const double v = rep.volume.at(i, j, k);
                if (ringMask.at(i, j, k) > 0.0) {
                    ringSum += v * v;
                    ++ringN;
                } else {
                    bgSum += v * v;
                    ++bgN;
                }
            }
    rep.ringArtifactEnergy = ringN > 0 ? ringSum / ringN : 0.0;
    rep.backgroundEnergy = bgN > 0 ? bgSum / bgN : 0.0;
    rep.ratioDefined = ringN > 0 && bgN > 0 && rep.backgroundEnergy > 0.0;
    rep.ratio = rep.ratioDefined ? rep.ringArtifactEnergy / rep.backgroundEnergy : 0.0;
    return rep;
}

}  // namespace spindle
