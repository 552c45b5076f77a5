#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "msqg/cli.hpp"

namespace msqg {
namespace {

struct Digest {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};
  Digest() {
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw NumericalError("SHA-256 init failed");
  }
  void update(const char* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx.get(), data, n) != 1) throw NumericalError("SHA-256 update failed");
  }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) throw NumericalError("SHA-256 final failed");
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 15];
    }
    return out;
  }
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  Digest d;
  d.update(bytes.data(), bytes.size());
  return d.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot read " + path.string());
  Digest d;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return d.hex();
}

std::filesystem::path write_manifest(const std::filesystem::path& out_dir, const std::string& subcommand,
                                     const ExperimentConfig& config, double wall_seconds,
                                     const std::vector<std::filesystem::path>& files) {
  namespace fs = std::filesystem;
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["tool_version"] = kToolVersion;
  const std::string echo = config_json(config);
  j["config"] = nlohmann::json::parse(echo);
  // Provenance: tool version plus a content hash of the configuration.
  j["provenance"] = std::string("msqg-") + kToolVersion + "+cfg." + sha256_hex(echo).substr(0, 12);
  j["wall_clock_seconds"] = wall_seconds;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["written_at"] = stamp;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& f : files) {
    const fs::path full = f.is_absolute() || fs::exists(f) ? f : out_dir / f;
    list.push_back({{"path", fs::relative(full, out_dir).generic_string()},
                    {"bytes", fs::file_size(full)},
                    {"sha256", sha256_file(full)}});
  }
  j["files"] = list;
  const fs::path path = out_dir / "manifest.json";
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write " + path.string());
  out << j.dump(2) << '\n';
  return path;
}

}  // namespace msqg
