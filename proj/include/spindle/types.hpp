#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace spindle {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class SurfaceKind { Apple, Lemon };

inline const char* to_string(SurfaceKind k) {
    return k == SurfaceKind::Apple ? "apple" : "lemon";
}

// Thrown when torus parameters are outside the admissible set
// (s <= t^2, t <= 0, nonpositive p, ...).
class InvalidParamsError : public std::runtime_error {
public:
    explicit InvalidParamsError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a point lies on the directional axis (g = 0), where the
// defining-function gradient and the surface measure are undefined.
class DegeneratePointError : public std::runtime_error {
public:
    explicit DegeneratePointError(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidSampleError : public std::runtime_error {
public:
    explicit InvalidSampleError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spindle
