// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gpf/scene/scene.hpp"

namespace gpf {

/// Lowercase hex SHA-1 of a git blob object ("blob <size>\0" + content).
std::string git_blob_sha1(std::string_view content);

/// Canonical scene text: scene_to_json dumped with sorted keys and 2-space indent.
std::string canonical_scene_text(const Scene& scene);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// `<output>.manifest.json`
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

/// Output file record: {path, bytes, sha1}.
nlohmann::json describe_file(const std::filesystem::path& path);

}  // namespace gpf
