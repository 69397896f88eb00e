#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "cluspath/cli.hpp"
#include "cluspath/error.hpp"
#include "cluspath/kernels.hpp"

namespace cluspath::cli {

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) !=
        1) {
        throw Error("SHA-256 digest failed");
    }
    std::string hex;
    hex.reserve(length * 2);
    char buf[3];
    for (unsigned int i = 0; i < length; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string write_text(const std::filesystem::path& dir, const std::string& name,
                       const std::string& text) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + (dir / name).string() + "'");
    }
    out << text;
    return name;
}

void write_manifest(const std::filesystem::path& dir, const Manifest& manifest) {
    const nlohmann::json doc = {{"command", manifest.command},
                                {"argv", manifest.argv},
                                {"input", manifest.input},
                                {"parameters", manifest.parameters},
                                {"seed", manifest.seed},
                                {"outputs", manifest.outputs},
                                {"tool_version", kToolVersion},
                                {"kernel", kernels::isa_name(kernels::active().isa)},
                                {"dataset_fingerprint", manifest.dataset_fingerprint}};
    write_text(dir, "manifest.json", doc.dump(2) + "\n");
}

}  // namespace cluspath::cli
