// SPDX-License-Identifier: Apache-2.0
#include "gpf/field/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "gpf/core/error.hpp"

namespace gpf {

namespace {

constexpr std::size_t kPrimitiveFloats = 13;
constexpr std::size_t kSampleFloats = 9;
constexpr std::size_t kHeaderBytes = 8;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

void put_f32(std::vector<unsigned char>& out, double v) {
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

double get_f32(const unsigned char*& p) {
    const float f = std::bit_cast<float>(get_u32(p));
    p += 4;
    return f;
}

std::vector<unsigned char> header(const char* magic, std::size_t count, std::size_t floats_each) {
    if (count > 0xffffffffu) throw RuntimeError("too many records for a 32-bit count");
    std::vector<unsigned char> out;
    out.reserve(kHeaderBytes + count * floats_each * 4);
    out.insert(out.end(), magic, magic + 4);
    put_u32(out, static_cast<std::uint32_t>(count));
    return out;
}

std::size_t check_header(std::span<const unsigned char> bytes, const char* magic, std::size_t floats_each,
                         const std::string& source) {
    if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), magic, 4) != 0) {
        throw ParseError(source + ": not a " + magic + " file");
    }
    const std::size_t count = get_u32(bytes.data() + 4);
    if (bytes.size() != kHeaderBytes + count * floats_each * 4) {
        throw ParseError(source + ": expected " + std::to_string(count) + " records, file size is " +
                         std::to_string(bytes.size()) + " bytes");
    }
    return count;
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw RuntimeError("write failed: " + path.string());
}

}  // namespace

std::vector<unsigned char> encode_checkpoint(std::span<const GaussianPrimitive> primitives) {
    auto out = header("GPF1", primitives.size(), kPrimitiveFloats);
    for (const GaussianPrimitive& p : primitives) {
        for (int i = 0; i < 3; ++i) put_f32(out, p.mean[i]);
        put_f32(out, p.rotation.w);
        put_f32(out, p.rotation.x);
        put_f32(out, p.rotation.y);
        put_f32(out, p.rotation.z);
        for (int i = 0; i < 3; ++i) put_f32(out, p.scale[i]);
        for (int i = 0; i < 3; ++i) put_f32(out, p.flux[i]);
    }
    return out;
}

std::vector<GaussianPrimitive> decode_checkpoint(std::span<const unsigned char> bytes, const std::string& source) {
    const std::size_t count = check_header(bytes, "GPF1", kPrimitiveFloats, source);
    std::vector<GaussianPrimitive> prims(count);
    const unsigned char* p = bytes.data() + kHeaderBytes;
    for (std::size_t i = 0; i < count; ++i) {
        GaussianPrimitive& g = prims[i];
        for (int k = 0; k < 3; ++k) g.mean[k] = get_f32(p);
        g.rotation.w = get_f32(p);
        g.rotation.x = get_f32(p);
        g.rotation.y = get_f32(p);
        g.rotation.z = get_f32(p);
        for (int k = 0; k < 3; ++k) g.scale[k] = get_f32(p);
        for (int k = 0; k < 3; ++k) g.flux[k] = get_f32(p);
        if (!(g.rotation.norm() > 0.0) || !is_finite(g.mean) || !g.flux.is_finite()) {
            throw ParseError(source + ": primitive " + std::to_string(i) + " has invalid values");
        }
        for (int k = 0; k < 3; ++k) {
            if (!(g.scale[k] > 0.0) || !std::isfinite(g.scale[k])) {
                throw ParseError(source + ": primitive " + std::to_string(i) + " has a non-positive scale");
            }
        }
    }
    return prims;
}

void save_checkpoint(const std::filesystem::path& path, const GpfField& field) {
    write_file(path, encode_checkpoint(field.primitives()));
}

GpfField load_checkpoint(const std::filesystem::path& path, const FieldParams& params) {
    return GpfField(decode_checkpoint(read_file(path), path.string()), params);
}

std::vector<unsigned char> encode_dataset(std::span<const TrainingSample> samples) {
    auto out = header("GPD1", samples.size(), kSampleFloats);
    for (const TrainingSample& s : samples) {
        for (int i = 0; i < 3; ++i) put_f32(out, s.position[i]);
        for (int i = 0; i < 3; ++i) put_f32(out, s.wo.vec()[i]);
        for (int i = 0; i < 3; ++i) put_f32(out, s.reference[i]);
    }
    return out;
}

std::vector<TrainingSample> decode_dataset(std::span<const unsigned char> bytes, const std::string& source) {
    const std::size_t count = check_header(bytes, "GPD1", kSampleFloats, source);
    std::vector<TrainingSample> samples;
    samples.reserve(count);
    const unsigned char* p = bytes.data() + kHeaderBytes;
    for (std::size_t i = 0; i < count; ++i) {
        Point3 x;
        Vec3 wo;
        RgbSpectrum ref;
        for (int k = 0; k < 3; ++k) x[k] = get_f32(p);
        for (int k = 0; k < 3; ++k) wo[k] = get_f32(p);
        for (int k = 0; k < 3; ++k) ref[k] = get_f32(p);
        // The stored direction is unit only to float precision; keep it as stored.
        samples.push_back({x, UnitVec3::unchecked(wo), ref});
    }
    return samples;
}

void save_dataset(const std::filesystem::path& path, std::span<const TrainingSample> samples) {
    write_file(path, encode_dataset(samples));
}

std::vector<TrainingSample> load_dataset(const std::filesystem::path& path) {
    return decode_dataset(read_file(path), path.string());
}

}  // namespace gpf
