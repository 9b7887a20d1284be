#include <CLI11.hpp>
#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "spindle/io.hpp"
#include "spindle/recon.hpp"
#include "spindle/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace spindle;

namespace {

Vec3 parse_vec3(const std::string& s, const char* what) {
    Vec3 v;
    char c1, c2;
    std::stringstream ss(s);
    if (!(ss >> v.x() >> c1 >> v.y() >> c2 >> v.z()) || c1 != ',' || c2 != ',')
        throw IoError(std::string("expected x,y,z for ") + what + ": " + s);
    return v;
}

struct GridArgs {
    std::string dims = "32,32,32";
    double half = 1.2;
    std::string center = "0,0,0";

    VoxelGrid spec() const {
        int nx, ny, nz;
        char c1, c2;
        std::stringstream ss(dims);
        if (!(ss >> nx >> c1 >> ny >> c2 >> nz) || c1 != ',' || c2 != ',' || nx <= 0 ||
            ny <= 0 || nz <= 0)
            throw IoError("expected NX,NY,NZ for --grid: " + dims);
        const Vec3 ctr = parse_vec3(center, "--center");
        const Vec3 spacing(2.0 * half / nx, 2.0 * half / ny, 2.0 * half / nz);
        return VoxelGrid::zeros(nx, ny, nz, spacing, ctr - Vec3::Constant(half));
    }
};

QuadratureSpec parse_quad(const std::string& s) {
    QuadratureSpec q;
    char c;
    std::stringstream ss(s);
    if (!(ss >> q.nPsi >> c >> q.nTheta) || c != ',')
        throw IoError("expected NPSI,NTHETA for --quad: " + s);
    return q;
}

std::vector<WavefrontQuery> read_queries(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::string header;
    if (!std::getline(f, header)) throw IoError("empty query file: " + path);
    std::vector<WavefrontQuery> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        for (auto& ch : line)
            if (ch == ',') ch = ' ';
        std::stringstream ss(line);
        WavefrontQuery q;
        if (!(ss >> q.point.x() >> q.point.y() >> q.point.z() >> q.direction.x() >>
              q.direction.y() >> q.direction.z()))
            throw IoError("malformed query row: " + line);
        out.push_back(q);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spindle-torus Radon transforms: projection, reconstruction and "
                 "microlocal verification"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = all cores)");

    // phantom
    auto* cmdPhantom = app.add_subcommand("phantom", "rasterize a phantom spec onto a grid");
    std::string phantomSpecPath, phantomOut;
    GridArgs phantomGrid;
    cmdPhantom->add_option("--spec", phantomSpecPath, "phantom spec file")->required();
    cmdPhantom->add_option("--grid", phantomGrid.dims, "NX,NY,NZ");
    cmdPhantom->add_option("--half", phantomGrid.half, "half-extent of the cube grid");
    cmdPhantom->add_option("--center", phantomGrid.center, "grid center x,y,z");
    cmdPhantom->add_option("--out", phantomOut, "output volume path")->required();

    // project
    auto* cmdProject = app.add_subcommand("project", "forward-project a volume");
    std::string projVol, projParams, projKind, projQuad = "128,128", projOut;
    cmdProject->add_option("--vol", projVol)->required();
    cmdProject->add_option("--params", projParams, "parameter CSV")->required();
    cmdProject->add_option("--kind", projKind, "apple|lemon (default: from CSV)");
    cmdProject->add_option("--quad", projQuad, "NPSI,NTHETA");
    cmdProject->add_option("--out", projOut, "output data CSV")->required();

    // adjoint
    auto* cmdAdjoint = app.add_subcommand("adjoint", "backproject data onto a grid");
    std::string adjData, adjParams, adjKind, adjQuad = "128,128", adjOut;
    GridArgs adjGrid;
    cmdAdjoint->add_option("--data", adjData)->required();
    cmdAdjoint->add_option("--params", adjParams)->required();
    cmdAdjoint->add_option("--kind", adjKind, "apple|lemon (default: from CSV)");
    cmdAdjoint->add_option("--quad", adjQuad, "NPSI,NTHETA");
    cmdAdjoint->add_option("--grid", adjGrid.dims, "NX,NY,NZ");
    cmdAdjoint->add_option("--half", adjGrid.half);
    cmdAdjoint->add_option("--center", adjGrid.center);
    cmdAdjoint->add_option("--out", adjOut, "output volume path")->required();

    // recon
    auto* cmdRecon = app.add_subcommand("recon", "Landweber reconstruction");
    std::string recData, recParams, recKind, recQuad = "64,64", recOut, recReport;
    GridArgs recGrid;
    int recIters = 50;
    double recStep = 1.0;
    bool recNonneg = false;
    cmdRecon->add_option("--data", recData)->required();
    cmdRecon->add_option("--params", recParams)->required();
    cmdRecon->add_option("--kind", recKind, "apple|lemon (default: from CSV)");
    cmdRecon->add_option("--quad", recQuad, "NPSI,NTHETA");
    cmdRecon->add_option("--grid", recGrid.dims, "NX,NY,NZ");
    cmdRecon->add_option("--half", recGrid.half);
    cmdRecon->add_option("--center", recGrid.center);
    cmdRecon->add_option("--iters", recIters);
    cmdRecon->add_option("--step-scale", recStep, "fraction of 1/||A||^2, in (0,2)");
    cmdRecon->add_flag("--nonneg", recNonneg, "project onto nonnegative volumes");
    cmdRecon->add_option("--out", recOut, "output volume path")->required();
    cmdRecon->add_option("--report", recReport, "residual log CSV");

    // verify
    auto* cmdVerify = app.add_subcommand("verify", "run the seeded identity suites");
    std::string verSuite = "all", verReport;
    int verSamples = 1000;
    uint64_t verSeed = 0;
    cmdVerify->add_option("--suite", verSuite, "all|geometry|microlocal");
    cmdVerify->add_option("--samples", verSamples);
    cmdVerify->add_option("--seed", verSeed);
    cmdVerify->add_option("--report", verReport, "write the full report here too");

    // bolker
    auto* cmdBolker = app.add_subcommand("bolker", "sample the Bolker predicates");
    std::string bolFamily, bolRegion = "", bolOut;
    int64_t bolSamples = 100000;
    uint64_t bolSeed = 0;
    cmdBolker->add_option("--family", bolFamily,
                          "full-apple|full-lemon|restricted-apple|restricted-lemon")
        ->required();
    cmdBolker->add_option("--region", bolRegion, "ZMIN,ZMAX for restricted families");
    cmdBolker->add_option("--samples", bolSamples);
    cmdBolker->add_option("--seed", bolSeed);
    cmdBolker->add_option("--out", bolOut, "report path (default: stdout)");

    // predict
    auto* cmdPredict = app.add_subcommand("predict", "predicted artifact rings / cone angle");
    std::string prdFamily, prdParams, prdOut;
    bool prdCone = false;
    double prdEps = 1.0;
    cmdPredict->add_option("--family", prdFamily);
    cmdPredict->add_option("--params", prdParams, "parameter CSV (first row used)");
    cmdPredict->add_option("--out", prdOut, "report path (default: stdout)");
    cmdPredict->add_flag("--cone-angle", prdCone, "print the cone-beam opening angle");
    cmdPredict->add_option("--epsilon", prdEps, "standoff epsilon for --cone-angle");

    // wfset
    auto* cmdWfset = app.add_subcommand("wfset", "wavefront-set detector");
    std::string wfVol, wfQueries, wfOut;
    double wfRadius = 8.0, wfCutoff = 2.5;
    cmdWfset->add_option("--vol", wfVol)->required();
    cmdWfset->add_option("--queries", wfQueries, "CSV x,y,z,dx,dy,dz")->required();
    cmdWfset->add_option("--window-radius", wfRadius, "window radius in voxels");
    cmdWfset->add_option("--cutoff", wfCutoff, "decay-exponent cutoff");
    cmdWfset->add_option("--out", wfOut, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (*cmdPhantom) {
            const PhantomSpec spec = read_phantom(phantomSpecPath);
            write_volume(phantomOut, spec.rasterize(phantomGrid.spec()));
        } else if (*cmdProject) {
            const VoxelGrid vol = read_volume(projVol);
            auto [params, kind] = read_params(projParams);
            if (!projKind.empty())
                kind = projKind == "apple" ? SurfaceKind::Apple : SurfaceKind::Lemon;
            const DataGrid d = forward_project(vol, params, kind, parse_quad(projQuad));
            write_data(projOut, d.values);
        } else if (*cmdAdjoint) {
            auto [params, kind] = read_params(adjParams);
            if (!adjKind.empty())
                kind = adjKind == "apple" ? SurfaceKind::Apple : SurfaceKind::Lemon;
            DataGrid d;
            d.params = params;
            d.values = read_data(adjData);
            if (d.values.size() != params.size())
                throw IoError("data length does not match parameter list");
            write_volume(adjOut,
                         adjoint_project(d, kind, parse_quad(adjQuad), adjGrid.spec()));
        } else if (*cmdRecon) {
            auto [params, kind] = read_params(recParams);
            if (!recKind.empty())
                kind = recKind == "apple" ? SurfaceKind::Apple : SurfaceKind::Lemon;
            const std::vector<double> data = read_data(recData);
            if (data.size() != params.size())
                throw IoError("data length does not match parameter list");
            const LinearOperator op =
                make_projector(params, kind, parse_quad(recQuad), recGrid.spec());
            LandweberConfig cfg;
            cfg.stepScale = recStep;
            cfg.iterations = recIters;
            cfg.nonnegativity = recNonneg;
            const ReconReport rep = landweber(data, op, cfg);
            write_volume(recOut, rep.volume);
            if (!recReport.empty()) write_data(recReport, rep.residualNorms);
        } else if (*cmdVerify) {
            std::vector<SuiteReport> reports;
            if (verSuite == "all")
                reports = verify_all(verSamples, verSeed);
            else if (verSuite == "geometry")
                reports = {verify_geometry(verSamples, verSeed)};
            else if (verSuite == "microlocal")
                reports = {verify_microlocal(verSamples, verSeed)};
            else
                throw IoError("unknown suite: " + verSuite);
            const std::string text = format_report(reports);
            std::cout << text;
            if (!verReport.empty()) {
                std::ofstream f(verReport);
                f << text;
            }
            for (const auto& r : reports)
                if (!r.passed()) return 2;
        } else if (*cmdBolker) {
            const Family fam = parse_family(bolFamily);
            BolkerRegion region;
            const bool restricted =
                fam == Family::Restricted_Apple || fam == Family::Restricted_Lemon;
            if (!bolRegion.empty()) {
                char c;
                std::stringstream ss(bolRegion);
                if (!(ss >> region.zMin >> c >> region.zMax) || c != ',')
                    throw IoError("expected ZMIN,ZMAX for --region: " + bolRegion);
            } else if (restricted) {
                region = fam == Family::Restricted_Apple ? BolkerRegion{1.05, 2.0}
                                                         : BolkerRegion{0.05, 0.95};
            }
            const BolkerReport rep = bolker_scan(fam, region, bolSamples, bolSeed);
            if (bolOut.empty()) {
                std::ostringstream tmp;
                tmp << "/tmp/bolker_report_" << ::getpid() << ".txt";
                write_bolker_report(tmp.str(), rep);
                std::ifstream f(tmp.str());
                std::cout << f.rdbuf();
            } else {
                write_bolker_report(bolOut, rep);
            }
        } else if (*cmdPredict) {
            if (prdCone) {
                std::cout << cone_beam_angle_deg(prdEps) << "\n";
            } else {
                if (prdParams.empty() || prdFamily.empty())
                    throw IoError("predict needs --family and --params (or --cone-angle)");
                const Family fam = parse_family(prdFamily);
                auto [params, kind] = read_params(prdParams);
                (void)kind;
                if (params.empty()) throw IoError("empty parameter list");
                ArtifactSet art;
                if (fam == Family::Restricted_Apple || fam == Family::Restricted_Lemon) {
                    RestrictedParams rp = std::get<RestrictedParams>(params.front());
                    if (fam == Family::Restricted_Lemon) {
                        art.kind = ArtifactSet::Kind::None;
                        art.description = "lemon family satisfies Bolker; no predicted set";
                    } else {
                        art = predict_artifacts(rp);
                    }
                } else {
                    TorusParams tp = std::get<TorusParams>(params.front());
                    tp.kind = fam == Family::Full7D_Apple ? SurfaceKind::Apple
                                                          : SurfaceKind::Lemon;
                    art = predict_artifacts(tp);
                }
                if (prdOut.empty()) {
                    std::ostringstream tmp;
                    tmp << "/tmp/artifact_set_" << ::getpid() << ".txt";
                    write_artifact_set(tmp.str(), art);
                    std::ifstream f(tmp.str());
                    std::cout << f.rdbuf();
                } else {
                    write_artifact_set(prdOut, art);
                }
            }
        } else if (*cmdWfset) {
            const VoxelGrid vol = read_volume(wfVol);
            const auto queries = read_queries(wfQueries);
            WavefrontConfig cfg;
            cfg.windowRadiusVoxels = wfRadius;
            cfg.exponentCutoff = wfCutoff;
            write_wavefront_report(wfOut, wf_detect(vol, queries, cfg));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
