#include "crowdwise/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "crowdwise/equilibrium.hpp"

namespace crowdwise {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& field) {
  if (!j.is_number())
    throw ConfigError(field, field + " must be a number");
  return j.get<double>();
}

long require_integer(const json& j, const std::string& field, long min_value) {
  if (!j.is_number_integer())
    throw ConfigError(field, field + " must be an integer");
  long v = j.get<long>();
  if (v < min_value)
    throw ConfigError(field, field + " must be >= " + std::to_string(min_value));
  return v;
}

std::uint64_t require_seed(const json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !j.is_number_integer())
    throw ConfigError(field, field + " must be a nonnegative integer");
  if (j.is_number_integer() && j.get<long long>() < 0)
    throw ConfigError(field, field + " must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

Vector parse_vector(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ConfigError(field, field + " must be a nonempty array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<int>(i)) =
        require_number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigError("P", "P must be a nonempty array of rows");
  const int n = static_cast<int>(j.size());
  Matrix p(n, n);
  for (int i = 0; i < n; ++i) {
    const std::string row_field = "P[" + std::to_string(i) + "]";
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ConfigError(row_field, row_field + " must have " +
                                       std::to_string(n) + " entries");
    double sum = 0.0;
    for (int c = 0; c < n; ++c) {
      double v = require_number(row[c], row_field);
      if (!std::isfinite(v) || v < 0.0)
        throw ConfigError(row_field,
                          row_field + " has a negative or non-finite entry");
      p(i, c) = v;
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ConfigError(row_field, row_field + " sums to " +
                                       std::to_string(sum) + ", expected 1");
  }
  return p;
}

Z0Spec parse_z0(const json& j) {
  Z0Spec spec;
  if (j.is_array()) {
    spec.kind = Z0Spec::Kind::Explicit;
    spec.values = parse_vector(j, "z0");
    for (int i = 0; i < spec.values.size(); ++i)
      if (!(spec.values(i) >= 0.0 && spec.values(i) <= 1.0))
        throw ConfigError("z0[" + std::to_string(i) + "]",
                          "z0 entries must lie in [0,1]");
    return spec;
  }
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    auto colon = s.find(':');
    std::string name = s.substr(0, colon);
    double param = 0.0;
    if (colon != std::string::npos) {
      try {
        param = std::stod(s.substr(colon + 1));
      } catch (const std::exception&) {
        throw ConfigError("z0", "z0 preset parameter in '" + s +
                                    "' is not a number");
      }
    }
    if (name == "uniform" && colon != std::string::npos) {
      if (!(param >= 0.0 && param <= 1.0))
        throw ConfigError("z0", "uniform preset value must lie in [0,1]");
      spec.kind = Z0Spec::Kind::Uniform;
      spec.param = param;
      return spec;
    }
    if (name == "zstar" && colon != std::string::npos) {
      if (!(param > 0.0))
        throw ConfigError("z0", "zstar preset alpha must be positive");
      spec.kind = Z0Spec::Kind::ZStar;
      spec.param = param;
      return spec;
    }
    throw ConfigError("z0", "unknown z0 preset '" + s +
                                "' (expected 'uniform:c' or 'zstar:alpha')");
  }
  throw ConfigError("z0", "z0 must be an array or a preset string");
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("", "config root must be an object");

  static const std::set<std::string> known = {
      "P",       "sigma2",      "theta",      "z0",    "seed",
      "seeds",   "max_steps",   "tol_fp",     "record_every",
      "output_dir", "noise",    "t_max",      "replicates"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw ConfigError(key, "unknown config field '" + key + "'");

  if (!j.contains("P")) throw ConfigError("P", "missing required field P");
  if (!j.contains("sigma2"))
    throw ConfigError("sigma2", "missing required field sigma2");

  ExperimentConfig cfg;
  cfg.P = parse_matrix(j.at("P"));
  const int n = static_cast<int>(cfg.P.rows());

  cfg.sigma2 = parse_vector(j.at("sigma2"), "sigma2");
  if (cfg.sigma2.size() != n)
    throw ConfigError("sigma2", "sigma2 must have " + std::to_string(n) +
                                    " entries");
  for (int i = 0; i < n; ++i)
    if (!(cfg.sigma2(i) > 0.0))
      throw ConfigError("sigma2[" + std::to_string(i) + "]",
                        "variances must be positive");

  if (j.contains("theta")) cfg.theta = require_number(j.at("theta"), "theta");
  if (j.contains("z0")) {
    cfg.z0 = parse_z0(j.at("z0"));
    if (cfg.z0.kind == Z0Spec::Kind::Explicit && cfg.z0.values.size() != n)
      throw ConfigError("z0", "z0 must have " + std::to_string(n) +
                                  " entries");
  }
  if (j.contains("seed")) cfg.seed = require_seed(j.at("seed"), "seed");
  if (j.contains("seeds")) {
    const json& seeds = j.at("seeds");
    if (!seeds.is_array())
      throw ConfigError("seeds", "seeds must be an array");
    for (std::size_t i = 0; i < seeds.size(); ++i)
      cfg.seeds.push_back(require_seed(
          seeds[i], "seeds[" + std::to_string(i) + "]"));
  }
  if (j.contains("max_steps"))
    cfg.max_steps = require_integer(j.at("max_steps"), "max_steps", 1);
  if (j.contains("tol_fp")) {
    cfg.tol_fp = require_number(j.at("tol_fp"), "tol_fp");
    if (!(cfg.tol_fp > 0.0))
      throw ConfigError("tol_fp", "tol_fp must be positive");
  }
  if (j.contains("record_every"))
    cfg.record_every = require_integer(j.at("record_every"), "record_every", 1);
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string())
      throw ConfigError("output_dir", "output_dir must be a string");
    cfg.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("noise")) {
    if (!j.at("noise").is_string())
      throw ConfigError("noise", "noise must be 'gaussian' or 'uniform'");
    std::string s = j.at("noise").get<std::string>();
    if (s == "gaussian")
      cfg.noise = NoiseKind::Gaussian;
    else if (s == "uniform")
      cfg.noise = NoiseKind::Uniform;
    else
      throw ConfigError("noise", "noise must be 'gaussian' or 'uniform'");
  }
  if (j.contains("t_max"))
    cfg.t_max = require_integer(j.at("t_max"), "t_max", 0);
  if (j.contains("replicates"))
    cfg.replicates = require_integer(j.at("replicates"), "replicates", 0);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("", "config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

SelfConfidenceProfile resolve_z0(const ExperimentConfig& cfg,
                                 const InfluenceNetwork& net,
                                 const NoiseModel& noise) {
  switch (cfg.z0.kind) {
    case Z0Spec::Kind::None:
      throw ConfigError("z0", "this command requires z0");
    case Z0Spec::Kind::Explicit:
      return SelfConfidenceProfile(cfg.z0.values);
    case Z0Spec::Kind::Uniform:
      return SelfConfidenceProfile(
          Vector::Constant(net.n(), cfg.z0.param));
    case Z0Spec::Kind::ZStar: {
      ParetoSegment seg = pareto_segment(net, noise);
      if (!(cfg.z0.param > 0.0 && cfg.z0.param <= seg.alpha_star))
        throw ConfigError("z0", "zstar alpha " + std::to_string(cfg.z0.param) +
                                    " outside (0, " +
                                    std::to_string(seg.alpha_star) + "]");
      return seg.profile_at(cfg.z0.param);
    }
  }
  throw ConfigError("z0", "unreachable");
}

}  // namespace crowdwise
