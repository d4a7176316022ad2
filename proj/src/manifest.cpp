#include "nac/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <memory>

#include "nac/errors.hpp"

#ifndef NAC_VERSION
#define NAC_VERSION "unknown"
#endif

namespace nac {

std::string_view code_version() { return NAC_VERSION; }

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 initialization failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    char b[3];
    std::snprintf(b, sizeof b, "%02x", digest[i]);
    hex += b;
  }
  return hex;
}

RunManifest make_manifest(const RunConfig& config) {
  RunManifest m;
  m.config = config_snapshot(config);
  if (config.demos) {
    m.corpus_path = *config.demos;
    m.corpus_sha256 = sha256_file(*config.demos);
  }
  m.env = config.env.id;
  m.version = std::string(code_version());
  m.out_dir = config.out;
  return m;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  if (std::filesystem::exists(path)) {
    throw StateError("manifest '" + path.string() + "' already exists");
  }
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["env"] = m.env;
  j["out_dir"] = m.out_dir;
  j["corpus_path"] = m.corpus_path ? nlohmann::ordered_json(*m.corpus_path) : nullptr;
  j["corpus_sha256"] = m.corpus_sha256 ? nlohmann::ordered_json(*m.corpus_sha256) : nullptr;
  j["config"] = m.config;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  RunManifest m;
  m.version = j.at("version").get<std::string>();
  m.env = j.at("env").get<std::string>();
  m.out_dir = j.at("out_dir").get<std::string>();
  if (!j.at("corpus_path").is_null()) m.corpus_path = j["corpus_path"].get<std::string>();
  if (!j.at("corpus_sha256").is_null()) m.corpus_sha256 = j["corpus_sha256"].get<std::string>();
  m.config = j.at("config").get<std::map<std::string, std::string>>();
  return m;
}

}  // namespace nac
