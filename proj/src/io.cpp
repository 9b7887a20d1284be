#include "spindle/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace spindle {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream f(path, mode);
    if (!f) throw IoError("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream f(path, mode);
    if (!f) throw IoError("cannot open for reading: " + path);
    return f;
}

SurfaceKind parse_kind(const std::string& s) {
    if (s == "apple") return SurfaceKind::Apple;
    if (s == "lemon") return SurfaceKind::Lemon;
    throw IoError("unknown surface kind: " + s);
}

}  // namespace

void write_volume(const std::string& path, const VoxelGrid& vol) {
    {
        auto hdr = open_out(path + ".hdr");
        hdr << "dims: " << vol.nx << " " << vol.ny << " " << vol.nz << "\n"
            << "spacing: " << fmt(vol.spacing.x()) << " " << fmt(vol.spacing.y()) << " "
            << fmt(vol.spacing.z()) << "\n"
            << "origin: " << fmt(vol.origin.x()) << " " << fmt(vol.origin.y()) << " "
            << fmt(vol.origin.z()) << "\n"
            << "dtype: f32\n"
            << "order: x-fastest\n";
    }
    auto raw = open_out(path, std::ios::binary);
    std::vector<float> buf(vol.values.begin(), vol.values.end());
    raw.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

VoxelGrid read_volume(const std::string& path) {
    VoxelGrid vol;
    {
        auto hdr = open_in(path + ".hdr");
        std::string line;
        while (std::getline(hdr, line)) {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            const std::string key = trim(line.substr(0, colon));
            std::stringstream val(line.substr(colon + 1));
            if (key == "dims") {
                val >> vol.nx >> vol.ny >> vol.nz;
            } else if (key == "spacing") {
                val >> vol.spacing.x() >> vol.spacing.y() >> vol.spacing.z();
            } else if (key == "origin") {
                val >> vol.origin.x() >> vol.origin.y() >> vol.origin.z();
            } else if (key == "dtype") {
                std::string d;
                val >> d;
                if (d != "f32") throw IoError("unsupported dtype: " + d);
            } else if (key == "order") {
                std::string o;
                val >> o;
                if (o != "x-fastest") throw IoError("unsupported order: " + o);
            }
        }
    }
    if (vol.nx <= 0 || vol.ny <= 0 || vol.nz <= 0)
        throw IoError("invalid or missing dims in " + path + ".hdr");
    const size_t n = static_cast<size_t>(vol.nx) * vol.ny * vol.nz;
    std::vector<float> buf(n);
    auto raw = open_in(path, std::ios::binary);
    raw.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n * sizeof(float)));
    if (static_cast<size_t>(raw.gcount()) != n * sizeof(float))
        throw IoError("volume payload shorter than header dims: " + path);
    vol.values.assign(buf.begin(), buf.end());
    return vol;
}

void write_params(const std::string& path, const std::vector<AnyParams>& params,
                  SurfaceKind kind) {
    auto f = open_out(path);
    const bool restricted =
        !params.empty() && std::holds_alternative<RestrictedParams>(params.front());
    if (restricted) {
        f << "kind,p,x0,y0\n";
        for (const auto& ap : params) {
            const auto& rp = std::get<RestrictedParams>(ap);
            f << to_string(kind) << "," << fmt(rp.p) << "," << fmt(rp.x0) << ","
              << fmt(rp.y0) << "\n";
        }
    } else {
        f << "kind,s,t,x0,y0,z0,alpha,beta\n";
        for (const auto& ap : params) {
            const auto& tp = std::get<TorusParams>(ap);
            f << to_string(kind) << "," << fmt(tp.s) << "," << fmt(tp.t) << ","
              << fmt(tp.x0.x()) << "," << fmt(tp.x0.y()) << "," << fmt(tp.x0.z()) << ","
              << fmt(tp.alpha) << "," << fmt(tp.beta) << "\n";
        }
    }
}

std::pair<std::vector<AnyParams>, SurfaceKind> read_params(const std::string& path) {
    auto f = open_in(path);
    std::string header;
    if (!std::getline(f, header)) throw IoError("empty params file: " + path);
    header = trim(header);
    const bool restricted = header == "kind,p,x0,y0";
    if (!restricted && header != "kind,s,t,x0,y0,z0,alpha,beta")
        throw IoError("unrecognized params header: " + header);

    std::vector<AnyParams> params;
    SurfaceKind kind = SurfaceKind::Apple;
    bool haveKind = false;
    std::string line;
    size_t row = 1;
    while (std::getline(f, line)) {
        ++row;
        line = trim(line);
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        const size_t need = restricted ? 4 : 8;
        if (cols.size() != need)
            throw IoError("row " + std::to_string(row) + ": expected " + std::to_string(need) +
                          " columns");
        const SurfaceKind k = parse_kind(trim(cols[0]));
        if (haveKind && k != kind)
            throw IoError("row " + std::to_string(row) + ": mixed surface kinds");
        kind = k;
        haveKind = true;
        try {
            if (restricted) {
                RestrictedParams rp;
                rp.p = std::stod(cols[1]);
                rp.x0 = std::stod(cols[2]);
                rp.y0 = std::stod(cols[3]);
                params.emplace_back(rp);
            } else {
                TorusParams tp;
                tp.s = std::stod(cols[1]);
                tp.t = std::stod(cols[2]);
                tp.x0 = Vec3(std::stod(cols[3]), std::stod(cols[4]), std::stod(cols[5]));
                tp.alpha = std::stod(cols[6]);
                tp.beta = std::stod(cols[7]);
                tp.kind = k;
                params.emplace_back(tp);
            }
        } catch (const std::invalid_argument&) {
            throw IoError("row " + std::to_string(row) + ": non-numeric field");
        }
    }
    return {params, kind};
}

void write_data(const std::string& path, const std::vector<double>& values) {
    auto f = open_out(path);
    f << "index,value\n";
    for (size_t i = 0; i < values.size(); ++i) f << i << "," << fmt(values[i]) << "\n";
}

std::vector<double> read_data(const std::string& path) {
    auto f = open_in(path);
    std::string header;
    if (!std::getline(f, header)) throw IoError("empty data file: " + path);
    if (trim(header) != "index,value") throw IoError("unrecognized data header: " + header);
    std::vector<double> values;
    std::string line;
    while (std::getline(f, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 2) throw IoError("malformed data row: " + line);
        const size_t idx = std::stoul(cols[0]);
        if (idx != values.size()) throw IoError("non-contiguous data index: " + cols[0]);
        values.push_back(std::stod(cols[1]));
    }
    return values;
}

void write_phantom(const std::string& path, const PhantomSpec& spec) {
    auto f = open_out(path);
    for (const auto& c : spec.components) {
        switch (c.kind) {
            case ComponentKind::Ball:
                f << "ball " << fmt(c.center.x()) << " " << fmt(c.center.y()) << " "
                  << fmt(c.center.z()) << " " << fmt(c.radius) << " " << fmt(c.value) << "\n";
                break;
            case ComponentKind::Shell:
                f << "shell " << fmt(c.center.x()) << " " << fmt(c.center.y()) << " "
                  << fmt(c.center.z()) << " " << fmt(c.radius) << " " << fmt(c.thickness)
                  << " " << fmt(c.value) << "\n";
                break;
            case ComponentKind::GaussianBlob:
                f << "gaussian " << fmt(c.center.x()) << " " << fmt(c.center.y()) << " "
                  << fmt(c.center.z()) << " " << fmt(c.radius) << " " << fmt(c.value) << "\n";
                break;
        }
    }
}

PhantomSpec read_phantom(const std::string& path) {
    auto f = open_in(path);
    PhantomSpec spec;
    std::string line;
    size_t row = 0;
    while (std::getline(f, line)) {
        ++row;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string tag;
        ss >> tag;
        PhantomComponent c;
        bool ok = false;
        if (tag == "ball" || tag == "gaussian") {
            c.kind = tag == "ball" ? ComponentKind::Ball : ComponentKind::GaussianBlob;
            ok = static_cast<bool>(ss >> c.center.x() >> c.center.y() >> c.center.z() >>
                                   c.radius >> c.value);
        } else if (tag == "shell") {
            c.kind = ComponentKind::Shell;
            ok = static_cast<bool>(ss >> c.center.x() >> c.center.y() >> c.center.z() >>
                                   c.radius >> c.thickness >> c.value);
        } else {
            throw IoError("phantom line " + std::to_string(row) + ": unknown component " + tag);
        }
        if (!ok) throw IoError("phantom line " + std::to_string(row) + ": malformed fields");
        spec.components.push_back(c);
    }
    return spec;
}

const char* family_name(Family f) {
    switch (f) {
        case Family::Full7D_Apple: return "full-apple";
        case Family::Full7D_Lemon: return "full-lemon";
        case Family::Restricted_Apple: return "restricted-apple";
        case Family::Restricted_Lemon: return "restricted-lemon";
    }
    return "unknown";
}

Family parse_family(const std::string& name) {
    if (name == "full-apple") return Family::Full7D_Apple;
    if (name == "full-lemon") return Family::Full7D_Lemon;
    if (name == "restricted-apple") return Family::Restricted_Apple;
    if (name == "restricted-lemon") return Family::Restricted_Lemon;
    throw IoError("unknown family: " + name +
                  " (expected full-apple, full-lemon, restricted-apple or restricted-lemon)");
}

void write_bolker_report(const std::string& path, const BolkerReport& rep) {
    auto f = open_out(path);
    f << "family: " << family_name(rep.family) << "\n"
      << "samples: " << rep.nSamples << "\n"
      << "failures: " << rep.nFailures << "\n"
      << "min_abs_det_normalized: " << fmt(rep.minAbsDet) << "\n"
      << "min_singular_ratio: " << fmt(rep.minSingularRatio) << "\n"
      << "collisions: " << rep.collisions.size() << "\n"
      << "collision_pairs_csv:\n"
      << "x1,y1,z1,x2,y2,z2,z_reflection\n";
    for (const auto& c : rep.collisions)
        f << fmt(c.x1.x()) << "," << fmt(c.x1.y()) << "," << fmt(c.x1.z()) << ","
          << fmt(c.x2.x()) << "," << fmt(c.x2.y()) << "," << fmt(c.x2.z()) << ","
          << (c.isZReflection ? 1 : 0) << "\n";
}

void write_artifact_set(const std::string& path, const ArtifactSet& art, int nTheta) {
    auto f = open_out(path);
    const char* kind = art.kind == ArtifactSet::Kind::CylinderRings ? "cylinder-rings"
                       : art.kind == ArtifactSet::Kind::Hyperboloid ? "hyperboloid"
                                                                    : "none";
    f << "kind: " << kind << "\n"
      << "description: " << art.description << "\n"
      << "rings: " << art.rings.size() << "\n";
    for (size_t i = 0; i < art.rings.size(); ++i) {
        const auto& r = art.rings[i];
        f << "ring " << i << ": center " << fmt(r.center.x()) << " " << fmt(r.center.y())
          << " " << fmt(r.center.z()) << " axis " << fmt(r.axis.x()) << " "
          << fmt(r.axis.y()) << " " << fmt(r.axis.z()) << " radius " << fmt(r.radius)
          << " height " << fmt(r.height) << "\n";
    }
    f << "ring_points_csv:\n"
      << "x,y,z\n";
    for (const auto& p : art.ring_points(nTheta))
        f << fmt(p.x()) << "," << fmt(p.y()) << "," << fmt(p.z()) << "\n";
}

void write_wavefront_report(const std::string& path, const WavefrontReport& rep) {
    auto f = open_out(path);
    f << "x,y,z,dx,dy,dz,exponent\n";
    for (const auto& d : rep.detections)
        f << fmt(d.point.x()) << "," << fmt(d.point.y()) << "," << fmt(d.point.z()) << ","
          << fmt(d.direction.x()) << "," << fmt(d.direction.y()) << ","
          << fmt(d.direction.z()) << "," << fmt(d.exponent) << "\n";
}

}  // namespace spindle
