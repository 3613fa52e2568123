#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "sgf/io/config.hpp"

namespace sgf::io {

/// Lower-case hex SHA-256 of a byte range.
inline std::string sha256_hex(const void* data, std::size_t size) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data, size) != 1 || EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

inline std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("sha256: cannot open " + path.string());
    }
    const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(bytes.data(), bytes.size());
}

/// Config echo plus the size and checksum of every artifact, written as
/// manifest.json next to the artifacts. Paths are relative to `dir`.
inline nlohmann::ordered_json write_manifest(const std::filesystem::path& dir, const std::string& command,
                                             const RunConfig& config, const std::vector<std::string>& artifacts,
                                             bool passed) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config"] = to_json(config);
    auto list = nlohmann::ordered_json::array();
    for (const auto& name : artifacts) {
        const auto path = dir / name;
        list.push_back({{"path", name},
                        {"bytes", std::filesystem::file_size(path)},
                        {"sha256", sha256_file(path)}});
    }
    j["artifacts"] = list;
    j["passed"] = passed;
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    out << j.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("manifest: cannot write " + (dir / "manifest.json").string());
    }
    return j;
}

}  // namespace sgf::io
