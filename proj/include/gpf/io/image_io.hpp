// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gpf/core/image.hpp"

namespace gpf {

/// 8-bit RGB image, row-major from the top-left, 3 bytes per pixel.
struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Image8() = default;
    Image8(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {}

    friend bool operator==(const Image8&, const Image8&) = default;
};

/// PFM bytes: "PF\n<w> <h>\n-1.0\n" then little-endian f32 RGB, bottom row first.
/// Throws ValidationError on a non-finite pixel.
std::string encode_pfm(const RadianceImage& image);
/// Accepts colour (PF) and greyscale (Pf) maps of either byte order; the sign
/// of the scale selects the order. Throws ParseError on malformed input.
RadianceImage decode_pfm(const std::string& bytes, const std::string& source = "<pfm>");

void write_pfm(const std::filesystem::path& path, const RadianceImage& image);
RadianceImage read_pfm(const std::filesystem::path& path);

/// clamp(exposure * v, 0, 1), sRGB transfer, round to 8 bits.
std::uint8_t tone_map_value(double v, double exposure = 1.0);
Image8 tone_map(const RadianceImage& image, double exposure = 1.0);

/// Binary PPM (P6) of the tone-mapped image.
void write_ppm(const std::filesystem::path& path, const Image8& image);

}  // namespace gpf
