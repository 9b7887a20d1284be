#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spindle/microlocal.hpp"
#include "spindle/phantoms.hpp"
#include "spindle/wavefront.hpp"

namespace spindle {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raw little-endian f32 payload at `path` plus a structured-text sidecar
// header at `path`.hdr with dims, spacing, origin, dtype and storage order.
void write_volume(const std::string& path, const VoxelGrid& vol);
VoxelGrid read_volume(const std::string& path);

// Parameter CSV, either schema:
//   kind,s,t,x0,y0,z0,alpha,beta   (full family)
//   kind,p,x0,y0                   (restricted family)
// kind is apple or lemon and must be uniform across rows.
void write_params(const std::string& path, const std::vector<AnyParams>& params,
                  SurfaceKind kind);
std::pair<std::vector<AnyParams>, SurfaceKind> read_params(const std::string& path);

// Data CSV: header index,value.
void write_data(const std::string& path, const std::vector<double>& values);
std::vector<double> read_data(const std::string& path);

// Phantom spec, one component per line:
//   ball cx cy cz radius value
//   shell cx cy cz radius thickness value
//   gaussian cx cy cz radius value
void write_phantom(const std::string& path, const PhantomSpec& spec);
PhantomSpec read_phantom(const std::string& path);

// Key/value summary plus a CSV list of collision pairs.
void write_bolker_report(const std::string& path, const BolkerReport& rep);

// Key/value summary plus a CSV list of ring points.
void write_artifact_set(const std::string& path, const ArtifactSet& art, int nTheta = 256);

// CSV x,y,z,dx,dy,dz,exponent.
void write_wavefront_report(const std::string& path, const WavefrontReport& rep);

const char* family_name(Family f);
Family parse_family(const std::string& name);

}  // namespace spindle
