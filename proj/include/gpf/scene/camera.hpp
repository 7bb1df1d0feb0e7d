// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gpf/scene/geometry.hpp"

namespace gpf {

/// Pinhole camera. Pixel (0, 0) is the top-left corner of the image.
struct Camera {
    Point3 position{0.0, 0.0, 3.0};
    Point3 look_at{0.0, 0.0, 0.0};
    Vec3 up{0.0, 1.0, 0.0};
    double fov_degrees = 40.0;  // vertical
    int width = 64;
    int height = 64;

    /// Throws ValidationError describing the first broken invariant.
    void validate() const;

    /// Ray through image-plane position (px, py) in pixel units; a pixel's
    /// center is at (i + 0.5, j + 0.5).
    Ray generate_ray(double px, double py) const;

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }

    friend bool operator==(const Camera&, const Camera&) = default;
};

}  // namespace gpf
