// SPDX-License-Identifier: Apache-2.0
#include "gpf/scene/camera.hpp"

#include "gpf/core/error.hpp"

namespace gpf {

void Camera::validate() const {
    if (!is_finite(position) || !is_finite(look_at) || !is_finite(up)) {
        throw ValidationError("camera: non-finite vector");
    }
    const Vec3 forward = look_at - position;
    if (length_squared(forward) == 0.0) throw ValidationError("camera.look_at: must differ from camera.position");
    if (length_squared(cross(forward, up)) < 1e-20 * length_squared(forward) * length_squared(up)) {
        throw ValidationError("camera.up: must not be parallel to the viewing direction");
    }
    if (!(fov_degrees > 0.0 && fov_degrees < 180.0)) throw ValidationError("camera.fov: must lie in (0, 180)");
    if (width <= 0 || height <= 0) throw ValidationError("camera.resolution: must be positive");
}

Ray Camera::generate_ray(double px, double py) const {
    const Vec3 forward = normalize(look_at - position);
    const Vec3 right = normalize(cross(forward, up));
    const Vec3 true_up = cross(right, forward);
    const double tan_half = std::tan(0.5 * fov_degrees * kPi / 180.0);
    const double aspect = static_cast<double>(width) / static_cast<double>(height);
    const double sx = (2.0 * px / width - 1.0) * tan_half * aspect;
    const double sy = (1.0 - 2.0 * py / height) * tan_half;
    return Ray{position, normalize(forward + sx * right + sy * true_up)};
}

}  // namespace gpf
