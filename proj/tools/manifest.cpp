#include "manifest.hpp"

#include "acthull/errors.hpp"
#include "acthull/parallel.hpp"
#include "acthull/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

namespace acthull::cli {

RunManifest::RunManifest(std::string command) : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

void RunManifest::add_input(const std::string& path) { inputs_.emplace_back(path, sha256_file(path)); }

std::string RunManifest::write(const std::string& primary) const {
  nlohmann::ordered_json j;
  j["schema"] = "acthull.run_manifest";
  j["version"] = kReportVersion;
  j["command"] = command_;
  j["seed"] = seed_;
  j["threads"] = thread_count();
  j["config"] = config_;
  auto& inputs = j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& [path, hash] : inputs_) inputs.push_back({{"path", path}, {"sha256", hash}});
  j["outputs"] = outputs_;
  j["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  const std::string path = primary + ".manifest.json";
  write_text(path, j.dump(2) + "\n");
  return path;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 initialization failed");
  std::array<char, 1 << 16> buffer;
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

}  // namespace acthull::cli
