#include "msqg/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace msqg {
namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  require(snap.field.all_finite(), "refusing to write a snapshot with non-finite coefficients");
  auto header = nlohmann::json::parse(snap.extra_json);
  header["N"] = snap.field.order();
  header["N_g"] = snap.intervals;
  header["alpha"] = snap.alpha;
  header["time"] = snap.time;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << header.dump() << '\n';
  for (double v : snap.field.coeffs()) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open snapshot " + path.string());
  std::string line;
  std::getline(in, line);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("snapshot header of " + path.string() + " is not JSON: " + e.what());
  }
  Snapshot snap;
  const int order = header.at("N").get<int>();
  snap.intervals = header.at("N_g").get<int>();
  snap.alpha = header.at("alpha").get<double>();
  snap.time = header.at("time").get<double>();
  for (const char* k : {"N", "N_g", "alpha", "time"}) header.erase(k);
  snap.extra_json = header.dump();

  std::vector<double> coeffs(static_cast<std::size_t>(order) * order);
  for (double& v : coeffs) {
    std::uint64_t bits = 0;
    if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
      throw InvalidArgument("snapshot " + path.string() + " is truncated");
    }
    v = std::bit_cast<double>(to_little(bits));
  }
  snap.field = SineField(order, std::move(coeffs));
  require(snap.field.all_finite(), "snapshot " + path.string() + " contains non-finite coefficients");
  return snap;
}

}  // namespace msqg
