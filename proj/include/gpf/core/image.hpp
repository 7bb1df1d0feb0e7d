// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "gpf/core/spectrum.hpp"

namespace gpf {

/// Linear HDR image, row-major from the top-left pixel.
struct RadianceImage {
    int width = 0;
    int height = 0;
    std::vector<RgbSpectrum> pixels;

    RadianceImage() = default;
    RadianceImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h) {}

    RgbSpectrum& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const RgbSpectrum& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    RgbSpectrum mean() const {
        RgbSpectrum m;
        for (const auto& p : pixels) m += p;
        return pixels.empty() ? m : m / static_cast<double>(pixels.size());
    }

    friend bool operator==(const RadianceImage&, const RadianceImage&) = default;
};

}  // namespace gpf
