// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "gpf/field/field.hpp"
#include "gpf/field/training.hpp"

namespace gpf {

// Binary formats, all little-endian:
//   GPF1: "GPF1", u32 count, count x 13 f32 (mean 3, rotation wxyz 4, linear scale 3, flux 3)
//   GPD1: "GPD1", u32 count, count x 9 f32 (position 3, wo 3, reference 3)
// Values are stored at 32-bit precision, so a save/load cycle rounds once and
// every later cycle is bit-exact.

std::vector<unsigned char> encode_checkpoint(std::span<const GaussianPrimitive> primitives);
std::vector<GaussianPrimitive> decode_checkpoint(std::span<const unsigned char> bytes, const std::string& source);

void save_checkpoint(const std::filesystem::path& path, const GpfField& field);
/// Loads primitives and builds a field with the given query parameters.
GpfField load_checkpoint(const std::filesystem::path& path, const FieldParams& params = {});

std::vector<unsigned char> encode_dataset(std::span<const TrainingSample> samples);
std::vector<TrainingSample> decode_dataset(std::span<const unsigned char> bytes, const std::string& source);

void save_dataset(const std::filesystem::path& path, std::span<const TrainingSample> samples);
std::vector<TrainingSample> load_dataset(const std::filesystem::path& path);

}  // namespace gpf
