// SPDX-License-Identifier: Apache-2.0
#include "gpf/core/sampling.hpp"

#include <algorithm>

namespace gpf {

namespace {
constexpr double kOneMinusEpsilon = 0x1.fffffffffffffp-1;
}

DirectionSample sample_cosine_hemisphere(double u1, double u2, const UnitVec3& n) {
    u1 = std::clamp(u1, 0.0, kOneMinusEpsilon);
    u2 = std::clamp(u2, 0.0, kOneMinusEpsilon);
    // Uniform disk by polar mapping, lifted onto the hemisphere.
    const double radius = std::sqrt(u1);
    const double phi = 2.0 * kPi * u2;
    const double lx = radius * std::cos(phi);
    const double ly = radius * std::sin(phi);
    const double lz = std::sqrt(std::max(0.0, 1.0 - u1));

    Vec3 t, b;
    coordinate_system(n.vec(), t, b);
    const Vec3 d = lx * t + ly * b + lz * n.vec();
    return {UnitVec3(d), lz * kInvPi};
}

UnitQuaternion sample_uniform_quaternion(Rng& rng) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double u3 = rng.uniform();
    const double a = std::sqrt(1.0 - u1);
    const double b = std::sqrt(u1);
    const double t1 = 2.0 * kPi * u2;
    const double t2 = 2.0 * kPi * u3;
    return UnitQuaternion(Quaternion{b * std::cos(t2), a * std::sin(t1), a * std::cos(t1), b * std::sin(t2)});
}

}  // namespace gpf
