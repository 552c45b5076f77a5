#pragma once

// Field snapshot files: one line of JSON (N, N_g, alpha, time and optional
// extra keys), a newline, then N*N little-endian float64 coefficients in
// row-major (m, n) order.

#include <filesystem>
#include <string>

#include "msqg/spectral.hpp"

namespace msqg {

struct Snapshot {
  SineField field;
  int intervals = 0;
  double alpha = 0.0;
  double time = 0.0;
  std::string extra_json = "{}";  // additional header keys, merged on write
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace msqg
