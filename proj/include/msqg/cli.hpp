#pragma once

// Configuration files, run manifests and the four subcommands.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "msqg/estimates.hpp"
#include "msqg/evolution.hpp"

namespace msqg {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { exit_ok = 0, exit_fail = 1, exit_usage = 2 };

struct RunOptions {
  ExperimentConfig config;
  std::string which = "all";             // verify: kernels, near, medium, far, background, all
  std::filesystem::path snapshots;       // trace: directory of snapshot files
  double trace_dt = 0.0;                 // trace: RK4 step, 0 = half the smallest snapshot spacing
  int ratio_samples = 20;                // trace: medium-ratio evaluations along the path
};

/// Set one key (as it appears in a config file, without its section).
/// Unknown keys and unparsable values throw InvalidArgument.
void apply_config_key(RunOptions& o, const std::string& key, const std::string& value);

/// INI-style file: "key = value" lines, optional [section] headers (ignored
/// for lookup), ';' or '#' comments.
void load_config_file(RunOptions& o, const std::filesystem::path& path);

std::string config_json(const ExperimentConfig& c);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
  std::filesystem::path path;  // relative to the output directory
  std::uintmax_t bytes = 0;
  std::string sha256;
};

/// Writes manifest.json into out_dir listing `files` (existing paths, or paths
/// relative to out_dir) with sizes and hashes. Returns the manifest path.
std::filesystem::path write_manifest(const std::filesystem::path& out_dir, const std::string& subcommand,
                                     const ExperimentConfig& config, double wall_seconds,
                                     const std::vector<std::filesystem::path>& files);

/// Estimate sweeps for the configured alpha and data. which as in RunOptions.
std::vector<BoundReport> verify_suite(const ExperimentConfig& c, const std::string& which);

int cmd_make_data(const RunOptions& o, std::ostream& log);
int cmd_simulate(const RunOptions& o, std::ostream& log);
int cmd_verify(const RunOptions& o, std::ostream& log);
int cmd_trace(const RunOptions& o, std::ostream& log);

}  // namespace msqg
