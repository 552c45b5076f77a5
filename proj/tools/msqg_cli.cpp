#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "msqg/cli.hpp"

namespace {

// Flags that mirror config keys. Values are applied after the config file.
const std::vector<std::pair<std::string, std::string>> kFlags{
    {"--alpha", "alpha"}, {"--delta", "delta"}, {"--L", "L"},   {"--beta", "beta"}, {"--N", "N"},
    {"--Ng", "N_g"},      {"--dt", "dt"},       {"--T", "T"},   {"--out", "out"},   {"--seed", "seed"},
    {"--which", "which"}, {"--snapshots", "snapshots"}};

int thread_count() {
  const char* env = std::getenv("MSQG_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw msqg::InvalidArgument(std::string("MSQG_THREADS must be a positive integer, got '") + env + "'");
  return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modified SQG experiments: initial data, evolution, estimate sweeps and characteristics"};
  app.set_version_flag("--version", msqg::kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::optional<std::string>> values;
  for (const auto& [flag, key] : kFlags) values[key];

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const msqg::RunOptions&, std::ostream&);
  };
  const Sub subs[] = {{"make-data", "build the degenerate initial vorticity and check it", msqg::cmd_make_data},
                      {"simulate", "evolve the configured initial data", msqg::cmd_simulate},
                      {"verify", "run estimate sweeps", msqg::cmd_verify},
                      {"trace", "trace a characteristic through stored snapshots", msqg::cmd_trace}};
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    for (const auto& [flag, key] : kFlags) sub->add_option(flag, values[key], key);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? msqg::exit_ok : msqg::exit_usage;
  }

  const Sub* chosen = nullptr;
  for (const auto& s : subs) {
    if (app.got_subcommand(s.name)) chosen = &s;
  }
  msqg::RunOptions opts;
  try {
    thread_count();
    if (!config_path.empty()) msqg::load_config_file(opts, config_path);
    for (const auto& [key, v] : values) {
      if (v) msqg::apply_config_key(opts, key, *v);
    }
    if (opts.config.out_dir.empty()) opts.config.out_dir = "out";
    return chosen->run(opts, std::cout);
  } catch (const msqg::InvalidArgument& e) {
    std::cerr << "msqg: " << e.what() << "\n";
    return msqg::exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "msqg: " << e.what() << "\n";
    return msqg::exit_fail;
  }
}
