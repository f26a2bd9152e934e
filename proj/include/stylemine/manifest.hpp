#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace stylemine {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

struct Manifest {
  std::string command;
  std::string config_json;  // snapshot, already serialized
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  std::uint64_t seed = 0;
};

// Written to "<primary output>.manifest.json".
std::filesystem::path manifest_path_for(const std::filesystem::path& output);
void write_manifest(const Manifest& manifest,
                    const std::filesystem::path& path);

}  // namespace stylemine
