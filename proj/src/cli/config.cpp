#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <functional>
#include <map>

#include <json.hpp>

#include "msqg/cli.hpp"

namespace msqg {
namespace {

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  require(ec == std::errc() && p == end && std::isfinite(out), "invalid number for " + key + ": '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  require(ec == std::errc() && p == end, "invalid integer for " + key + ": '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw InvalidArgument("invalid boolean for " + key + ": '" + v + "'");
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

using Setter = std::function<void(RunOptions&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const char* key, double ExperimentConfig::*field) {
      t[key] = [field](RunOptions& o, const std::string& k, const std::string& v) { o.config.*field = to_double(k, v); };
    };
    auto integer = [&t](const char* key, int ExperimentConfig::*field) {
      t[key] = [field](RunOptions& o, const std::string& k, const std::string& v) { o.config.*field = to_int(k, v); };
    };
    num("alpha", &ExperimentConfig::alpha);
    num("delta", &ExperimentConfig::delta);
    num("delta_max", &ExperimentConfig::delta_max);
    integer("blend_order", &ExperimentConfig::blend_order);
    num("L", &ExperimentConfig::L);
    num("beta", &ExperimentConfig::beta);
    integer("N", &ExperimentConfig::N);
    integer("N_g", &ExperimentConfig::N_g);
    integer("Ng", &ExperimentConfig::N_g);
    num("cfl_safety", &ExperimentConfig::cfl_safety);
    num("dt_min", &ExperimentConfig::dt_min);
    num("dt_max", &ExperimentConfig::dt_max);
    num("T", &ExperimentConfig::T);
    num("diag_interval", &ExperimentConfig::diag_interval);
    num("snapshot_interval", &ExperimentConfig::snapshot_interval);
    num("tail_threshold", &ExperimentConfig::tail_threshold);
    num("growth_threshold", &ExperimentConfig::growth_threshold);
    integer("mode_m", &ExperimentConfig::mode_m);
    integer("mode_n", &ExperimentConfig::mode_n);
    // A step size implies the fixed policy; a later dt_policy key overrides it.
    t["dt"] = [](RunOptions& o, const std::string& k, const std::string& v) {
      o.config.dt = to_double(k, v);
      o.config.dt_policy = DtPolicy::fixed;
    };
    t["dt_policy"] = [](RunOptions& o, const std::string& k, const std::string& v) {
      if (v == "fixed") o.config.dt_policy = DtPolicy::fixed;
      else if (v == "cfl") o.config.dt_policy = DtPolicy::cfl;
      else throw InvalidArgument("invalid value for " + k + ": '" + v + "' (fixed or cfl)");
    };
    t["seed"] = [](RunOptions& o, const std::string& k, const std::string& v) {
      const int s = to_int(k, v);
      require(s >= 0, "seed must be nonnegative");
      o.config.seed = static_cast<unsigned>(s);
    };
    t["out"] = [](RunOptions& o, const std::string&, const std::string& v) { o.config.out_dir = v; };
    t["initial"] = [](RunOptions& o, const std::string& k, const std::string& v) {
      if (v == "omega0") o.config.initial = InitialKind::omega0;
      else if (v == "single_mode") o.config.initial = InitialKind::single_mode;
      else if (v == "zero") o.config.initial = InitialKind::zero;
      else throw InvalidArgument("invalid value for " + k + ": '" + v + "' (omega0, single_mode or zero)");
    };
    t["spectral_filter"] = [](RunOptions& o, const std::string& k, const std::string& v) {
      o.config.spectral_filter = to_bool(k, v);
    };
    t["which"] = [](RunOptions& o, const std::string&, const std::string& v) { o.which = v; };
    t["snapshots"] = [](RunOptions& o, const std::string&, const std::string& v) { o.snapshots = v; };
    t["trace_dt"] = [](RunOptions& o, const std::string& k, const std::string& v) { o.trace_dt = to_double(k, v); };
    t["ratio_samples"] = [](RunOptions& o, const std::string& k, const std::string& v) {
      o.ratio_samples = to_int(k, v);
    };
    return t;
  }();
  return table;
}

}  // namespace

void apply_config_key(RunOptions& o, const std::string& key, const std::string& value) {
  const auto k = trim(key);
  const auto it = setters().find(k);
  require(it != setters().end(), "unknown configuration key '" + k + "'");
  it->second(o, k, trim(value));
}

void load_config_file(RunOptions& o, const std::filesystem::path& path) {
  require(std::filesystem::exists(path), "config file not found: " + path.string());
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidArgument(std::string("cannot parse config file: ") + e.what());
  }
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      apply_config_key(o, key, node.data());
      continue;
    }
    for (const auto& [sub, leaf] : node) apply_config_key(o, sub, leaf.data());
  }
}

std::string config_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["alpha"] = c.alpha;
  j["delta"] = c.delta;
  j["delta_max"] = c.delta_max;
  j["blend_order"] = c.blend_order;
  j["L"] = c.L;
  j["beta"] = c.beta;
  j["N"] = c.N;
  j["N_g"] = c.N_g;
  j["dt_policy"] = c.dt_policy == DtPolicy::fixed ? "fixed" : "cfl";
  j["dt"] = c.dt;
  j["cfl_safety"] = c.cfl_safety;
  j["dt_min"] = c.dt_min;
  j["dt_max"] = c.dt_max;
  j["T"] = c.T;
  j["diag_interval"] = c.diag_interval;
  j["snapshot_interval"] = c.snapshot_interval;
  j["out"] = c.out_dir.string();
  j["seed"] = c.seed;
  j["initial"] = c.initial == InitialKind::omega0 ? "omega0" : c.initial == InitialKind::single_mode ? "single_mode" : "zero";
  j["mode_m"] = c.mode_m;
  j["mode_n"] = c.mode_n;
  j["spectral_filter"] = c.spectral_filter;
  j["tail_threshold"] = c.tail_threshold;
  j["growth_threshold"] = c.growth_threshold;
  return j.dump();
}

}  // namespace msqg
