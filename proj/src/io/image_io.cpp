// SPDX-License-Identifier: Apache-2.0
#include "gpf/io/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "gpf/core/error.hpp"

namespace gpf {

namespace {

void append_f32_le(std::string& out, float f) {
    const auto u = std::bit_cast<std::uint32_t>(f);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}

float read_f32(const unsigned char* p, bool little_endian) {
    std::uint32_t u = 0;
    for (int i = 0; i < 4; ++i) {
        const int shift = little_endian ? 8 * i : 8 * (3 - i);
        u |= std::uint32_t(p[i]) << shift;
    }
    return std::bit_cast<float>(u);
}

double srgb_encode(double v) { return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055; }

}  // namespace

std::string encode_pfm(const RadianceImage& image) {
    if (image.width <= 0 || image.height <= 0 ||
        image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
        throw ValidationError("pfm: image has inconsistent dimensions");
    }
    std::string out = "PF\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n-1.0\n";
    out.reserve(out.size() + image.pixels.size() * 12);
    for (int y = image.height - 1; y >= 0; --y) {
        for (int x = 0; x < image.width; ++x) {
            const RgbSpectrum& p = image.at(x, y);
            if (!p.is_finite()) {
                throw ValidationError("pfm: non-finite pixel at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
            }
            for (int c = 0; c < 3; ++c) append_f32_le(out, static_cast<float>(p[c]));
        }
    }
    return out;
}

RadianceImage decode_pfm(const std::string& bytes, const std::string& source) {
    // Header: three whitespace-separated tokens after the magic, then exactly one
    // whitespace byte before the raster.
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        const std::size_t start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (start == pos) throw ParseError(source + ": truncated PFM header");
        return bytes.substr(start, pos - start);
    };
    const std::string magic = token();
    if (magic != "PF" && magic != "Pf") throw ParseError(source + ": bad PFM magic '" + magic + "'");
    const int channels = magic == "PF" ? 3 : 1;
    int width = 0, height = 0;
    double scale = 0.0;
    try {
        std::size_t used = 0;
        const std::string w = token(), h = token(), s = token();
        width = std::stoi(w, &used);
        if (used != w.size()) throw std::invalid_argument(w);
        height = std::stoi(h, &used);
        if (used != h.size()) throw std::invalid_argument(h);
        scale = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::logic_error&) {
        throw ParseError(source + ": malformed PFM header");
    }
    if (width <= 0 || height <= 0 || scale == 0.0 || !std::isfinite(scale)) {
        throw ParseError(source + ": malformed PFM header");
    }
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw ParseError(source + ": truncated PFM header");
    }
    ++pos;
    const std::size_t expected = static_cast<std::size_t>(width) * height * channels * 4;
    if (bytes.size() - pos != expected) {
        throw ParseError(source + ": expected " + std::to_string(expected) + " raster bytes, found " +
                         std::to_string(bytes.size() - pos));
    }
    const bool little = scale < 0.0;
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
    RadianceImage image(width, height);
    for (int row = 0; row < height; ++row) {
        const int y = height - 1 - row;
        for (int x = 0; x < width; ++x) {
            RgbSpectrum& p = image.at(x, y);
            for (int c = 0; c < 3; ++c) {
                p[c] = read_f32(data + 4 * (channels == 3 ? c : 0), little);
            }
            data += 4 * channels;
        }
    }
    return image;
}

void write_pfm(const std::filesystem::path& path, const RadianceImage& image) {
    const std::string bytes = encode_pfm(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw RuntimeError("write failed: " + path.string());
}

RadianceImage read_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeError("cannot open " + path.string());
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return decode_pfm(bytes, path.string());
}

std::uint8_t tone_map_value(double v, double exposure) {
    const double c = std::clamp(exposure * v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(255.0 * srgb_encode(c)));
}

Image8 tone_map(const RadianceImage& image, double exposure) {
    if (!(exposure > 0.0) || !std::isfinite(exposure)) throw ValidationError("exposure: must be positive and finite");
    Image8 out(image.width, image.height);
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        for (int c = 0; c < 3; ++c) out.rgb[3 * i + c] = tone_map_value(image.pixels[i][c], exposure);
    }
    return out;
}

void write_ppm(const std::filesystem::path& path, const Image8& image) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeError("cannot write " + path.string());
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()), static_cast<std::streamsize>(image.rgb.size()));
    if (!out) throw RuntimeError("write failed: " + path.string());
}

}  // namespace gpf
