// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gpf/core/math.hpp"
#include "gpf/core/rng.hpp"

namespace gpf {

struct DirectionSample {
    UnitVec3 direction;
    double pdf = 0.0;  // solid-angle density
};

/// Cosine-weighted direction in the hemisphere around `n` (Malley's method).
/// Inputs are clamped into [0, 1 - 2^-53].
DirectionSample sample_cosine_hemisphere(double u1, double u2, const UnitVec3& n);

inline double cosine_hemisphere_pdf(double cos_theta) { return cos_theta > 0.0 ? cos_theta * kInvPi : 0.0; }

/// Uniformly distributed rotation (Shoemake's subgroup algorithm).
UnitQuaternion sample_uniform_quaternion(Rng& rng);

/// Power heuristic with beta = 2.
inline double power_heuristic(double pdf_a, double pdf_b) {
    const double a = pdf_a * pdf_a, b = pdf_b * pdf_b;
    return a + b > 0.0 ? a / (a + b) : 0.0;
}

}  // namespace gpf
