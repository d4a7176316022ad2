#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "nac/config.hpp"

namespace nac {

std::string_view code_version();


struct RunManifest {
  std::map<std::string, std::string> config;
  std::optional<std::string> corpus_path;
  std::optional<std::string> corpus_sha256;
  std::string env;
  std::string version;
  std::string out_dir;
};

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

RunManifest make_manifest(const RunConfig& config);

// Refuses to overwrite an existing manifest (StateError).
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace nac
