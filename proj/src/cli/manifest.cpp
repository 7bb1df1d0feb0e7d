// SPDX-License-Identifier: Apache-2.0
#include "gpf/cli/manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>

#include "gpf/core/error.hpp"
#include "gpf/scene/scene_io.hpp"

namespace gpf {

std::string git_blob_sha1(std::string_view content) {
    const std::string header = "blob " + std::to_string(content.size()) + '\0';
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    const bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                    EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                    EVP_DigestFinal_ex(ctx, digest, &length) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw RuntimeError("sha1 digest failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) {
        hex.push_back(kHex[digest[i] >> 4]);
        hex.push_back(kHex[digest[i] & 15]);
    }
    return hex;
}

std::string canonical_scene_text(const Scene& scene) { return scene_to_json(scene).dump(2) + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw RuntimeError("write failed: " + path.string());
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
    return std::filesystem::path(output.string() + ".manifest.json");
}

nlohmann::json describe_file(const std::filesystem::path& path) {
    const std::string bytes = read_text_file(path);
    return {{"path", path.string()}, {"bytes", bytes.size()}, {"sha1", git_blob_sha1(bytes)}};
}

}  // namespace gpf
