#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "msqg/cli.hpp"

using namespace msqg;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("msqg_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config keys") {
  RunOptions o;
  apply_config_key(o, " alpha ", " 0.25 ");
  CHECK(o.config.alpha == 0.25);
  apply_config_key(o, "Ng", "128");
  CHECK(o.config.N_g == 128);
  apply_config_key(o, "dt", "0.002");
  CHECK(o.config.dt_policy == DtPolicy::fixed);
  apply_config_key(o, "dt_policy", "cfl");
  CHECK(o.config.dt_policy == DtPolicy::cfl);
  apply_config_key(o, "initial", "zero");
  CHECK(o.config.initial == InitialKind::zero);
  CHECK_THROWS_AS(apply_config_key(o, "alhpa", "0.5"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_key(o, "alpha", "0.5x"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_key(o, "N", "1.5"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_key(o, "seed", "-1"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_key(o, "spectral_filter", "maybe"), InvalidArgument);
}

TEST_CASE("config files with sections and comments") {
  const fs::path dir = scratch_dir("config");
  std::ofstream(dir / "c.ini") << "; comment\nalpha = 0.75\n[grid]\nN = 32\nN_g = 64\n# other\n[run]\nT = 0.5\n";
  RunOptions o;
  load_config_file(o, dir / "c.ini");
  CHECK(o.config.alpha == 0.75);
  CHECK(o.config.N == 32);
  CHECK(o.config.N_g == 64);
  CHECK(o.config.T == 0.5);
  CHECK_THROWS_AS(load_config_file(o, dir / "missing.ini"), InvalidArgument);
  std::ofstream(dir / "bad.ini") << "nonsense = 1\n";
  CHECK_THROWS_AS(load_config_file(o, dir / "bad.ini"), InvalidArgument);
  const auto j = nlohmann::json::parse(config_json(o.config));
  CHECK(j["alpha"] == 0.75);
  CHECK(j["N_g"] == 64);
  fs::remove_all(dir);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("manifest lists every file with its hash") {
  const fs::path dir = scratch_dir("manifest");
  std::ofstream(dir / "a.txt") << "abc";
  fs::create_directories(dir / "sub");
  std::ofstream(dir / "sub" / "b.txt") << "";
  const fs::path m = write_manifest(dir, "verify", ExperimentConfig{}, 1.5, {dir / "a.txt", "sub/b.txt"});
  std::ifstream in(m);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["subcommand"] == "verify");
  CHECK(j["tool_version"] == kToolVersion);
  REQUIRE(j["files"].size() == 2);
  CHECK(j["files"][0]["path"] == "a.txt");
  CHECK(j["files"][0]["bytes"] == 3);
  CHECK(j["files"][0]["sha256"] == sha256_hex("abc"));
  CHECK(j["files"][1]["path"] == "sub/b.txt");
  fs::remove_all(dir);
}

TEST_CASE("make-data rejects bad widths and writes checked data") {
  RunOptions o;
  o.config.N = 128;
  o.config.N_g = 256;
  o.config.out_dir = scratch_dir("make_data");
  std::ostringstream log;
  o.config.delta = 0.0;
  CHECK_THROWS_AS(cmd_make_data(o, log), InvalidArgument);
  o.config.delta = kPi / 2;
  CHECK_THROWS_AS(cmd_make_data(o, log), InvalidArgument);
  o.config.delta = 0.25;
  CHECK(cmd_make_data(o, log) == exit_ok);
  CHECK(fs::exists(o.config.out_dir / "omega0.bin"));
  CHECK(fs::exists(o.config.out_dir / "manifest.json"));
  // Too few modes across the strip: the truncated series overshoots.
  o.config.N = 32;
  o.config.N_g = 64;
  CHECK(cmd_make_data(o, log) == exit_fail);
  fs::remove_all(o.config.out_dir);
}

TEST_CASE("simulate and trace a stationary mode") {
  RunOptions o;
  o.config.initial = InitialKind::single_mode;
  o.config.N = 8;
  o.config.N_g = 16;
  o.config.T = 0.5;
  o.config.snapshot_interval = 0.05;
  o.config.out_dir = scratch_dir("simulate");
  std::ostringstream log;
  CHECK(cmd_simulate(o, log) == exit_ok);
  CHECK(fs::exists(o.config.out_dir / "diagnostics.csv"));
  CHECK(fs::exists(o.config.out_dir / "summary.json"));
  o.config.T = 0.1;
  CHECK(cmd_trace(o, log) == exit_ok);
  std::ifstream in(o.config.out_dir / "trace_summary.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["transport_max_deviation"].get<double>() < 1e-6);
  o.snapshots = o.config.out_dir / "nowhere";
  CHECK_THROWS_AS(cmd_trace(o, log), InvalidArgument);
  fs::remove_all(o.config.out_dir);
}

TEST_CASE("verify suite selection") {
  ExperimentConfig c;
  CHECK_THROWS_AS(verify_suite(c, "everything"), InvalidArgument);
  c.alpha = 1.0;
  CHECK_THROWS_AS(verify_suite(c, "kernels"), InvalidArgument);
  c.alpha = 0.5;
  const auto r = verify_suite(c, "kernels");
  REQUIRE(r.size() == 1);
  CHECK(r[0].id == EstimateId::kernel_asymptotics);
}

TEST_CASE("verify on the zero field passes every field estimate") {
  ExperimentConfig c;
  c.initial = InitialKind::zero;
  for (const char* which : {"near", "medium", "far", "background"}) {
    const auto r = verify_suite(c, which);
    REQUIRE(r.size() == 1);
    CHECK_MESSAGE(r[0].pass, which);
  }
}
