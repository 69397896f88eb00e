#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cluspath::cli {

std::string sha256_hex(std::string_view bytes);

// Writes `text` to dir/name, creating dir if needed; returns the file name.
std::string write_text(const std::filesystem::path& dir, const std::string& name,
                       const std::string& text);

struct Manifest {
    std::string command;
    std::vector<std::string> argv;
    std::string input;
    nlohmann::json parameters;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::string dataset_fingerprint;
};

// manifest.json next to the outputs it describes.
void write_manifest(const std::filesystem::path& dir, const Manifest& manifest);

}  // namespace cluspath::cli
