#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "msqg/estimates.hpp"

namespace msqg {
namespace {

// JSON has no infinities or NaN; store them as null.
nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["estimate_id"] = estimate_name(r.id);
  j["alpha"] = r.alpha;
  j["pass"] = r.pass;
  j["fitted_exponent"] = finite_or_null(r.fitted_exponent);
  j["theoretical_exponent"] = r.theoretical_exponent;
  j["exponent_tolerance"] = finite_or_null(r.exponent_tolerance);
  j["fitted_constant"] = finite_or_null(r.fitted_constant);
  j["regression_r2"] = finite_or_null(r.regression_r2);
  j["min_r2"] = r.min_r2;
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [k, v] : r.metrics) m[k] = finite_or_null(v);
  j["metrics"] = m;
  j["notes"] = r.notes;
  nlohmann::json s = nlohmann::json::array();
  for (const auto& p : r.samples) {
    s.push_back({{"x", {p.x.x1, p.x.x2}},
                 {"param", p.param},
                 {"component", p.component},
                 {"measured", finite_or_null(p.measured)},
                 {"bound", finite_or_null(p.bound)},
                 {"ratio", finite_or_null(p.ratio)}});
  }
  j["sampled_points"] = s;
  return j;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_json(const BoundReport& r) { return to_json(r).dump(2); }

std::string reports_json(const std::vector<BoundReport>& reports) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : reports) a.push_back(to_json(r));
  return a.dump(2);
}

std::string reports_csv(const std::vector<BoundReport>& reports) {
  std::string out = "estimate_id,alpha,param,x1,x2,component,measured,bound,ratio\n";
  for (const auto& r : reports) {
    for (const auto& s : r.samples) {
      out += estimate_name(r.id) + "," + num(r.alpha) + "," + num(s.param) + "," + num(s.x.x1) + "," + num(s.x.x2) +
             "," + std::to_string(s.component) + "," + num(s.measured) + "," + num(s.bound) + "," + num(s.ratio) +
             "\n";
    }
  }
  return out;
}

}  // namespace msqg
