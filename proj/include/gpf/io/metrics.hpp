// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include <json.hpp>

#include "gpf/io/image_io.hpp"

namespace gpf {

/// PSNR in dB over all RGB bytes with MAX = 255. Identical images give +inf.
/// Throws ValidationError on a size mismatch.
double psnr(const Image8& a, const Image8& b);

/// Mean SSIM on Rec.601 luma: 11x11 Gaussian window (sigma 1.5), 'valid'
/// region only, C1 = (0.01*255)^2, C2 = (0.03*255)^2. Both sides must be at
/// least 11 pixels.
double ssim(const Image8& a, const Image8& b);

/// Both metrics on HDR inputs after tone mapping at a shared exposure.
double psnr(const RadianceImage& a, const RadianceImage& b, double exposure = 1.0);
double ssim(const RadianceImage& a, const RadianceImage& b, double exposure = 1.0);

struct MetricsRecord {
    double psnr = 0.0;
    double ssim = 0.0;
    double time_seconds = 0.0;
    std::uint64_t storage_bytes = 0;
};

/// {psnr, ssim, time_seconds, storage_bytes}; an infinite PSNR is written as "inf".
nlohmann::json to_json(const MetricsRecord& m);
/// Number or the strings "inf" / "-inf".
double metric_from_json(const nlohmann::json& j);

}  // namespace gpf
