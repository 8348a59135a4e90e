#pragma once

// JSON run configuration for the experiment harness. The schema mirrors
// ExperimentConfig plus an output path and the RNG identity string; unknown
// keys are rejected so a typo cannot silently change a study.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mei/errors.hpp"
#include "mei/experiment.hpp"
#include "mei/rng.hpp"

namespace mei {

struct RunConfig {
  ExperimentConfig experiment;
  std::string output;
  std::string rng_id;
};

namespace detail {

using Json = nlohmann::json;

inline void reject_unknown_keys(const Json& obj, const std::string& where,
                                const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' in " + where);
}

inline const Json& require_key(const Json& obj, const std::string& where,
                               const std::string& key) {
  if (!obj.contains(key))
    throw ConfigError("missing key '" + key + "' in " + where);
  return obj.at(key);
}

inline double as_real(const Json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

inline std::uint64_t as_uint(const Json& v, const std::string& what) {
  if (!v.is_number_unsigned())
    throw ConfigError(what + " must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

inline ProcessSpec parse_process(const Json& p) {
  if (!p.is_object()) throw ConfigError("'process' must be an object");
  const std::string kind =
      require_key(p, "process", "kind").get<std::string>();

  ProcessSpec spec;
  if (kind == "iid") {
    reject_unknown_keys(p, "process", {"kind"});
    spec.kind = ProcessKind::IidExp;
  } else if (kind == "arch") {
    reject_unknown_keys(p, "process",
                        {"kind", "eta1", "eta2", "lambda1", "lambda2",
                         "burnin", "theta_components"});
    spec.kind = ProcessKind::Arch;
    if (p.contains("eta1")) spec.arch.eta1 = as_real(p["eta1"], "eta1");
    if (p.contains("eta2")) spec.arch.eta2 = as_real(p["eta2"], "eta2");
    if (p.contains("lambda1"))
      spec.arch.lambda1 = as_real(p["lambda1"], "lambda1");
    if (p.contains("lambda2"))
      spec.arch.lambda2 = as_real(p["lambda2"], "lambda2");
    if (p.contains("burnin"))
      spec.arch.burnin =
          static_cast<std::size_t>(as_uint(p["burnin"], "burnin"));
    if (p.contains("theta_components")) {
      const auto& tc = p["theta_components"];
      if (!tc.is_array() || tc.size() != 2)
        throw ConfigError("'theta_components' must be an array of 2 numbers");
      spec.arch_theta_comp1 = as_real(tc[0], "theta_components[0]");
      spec.arch_theta_comp2 = as_real(tc[1], "theta_components[1]");
    }
    spec.arch.validate();
  } else if (kind == "ar1") {
    reject_unknown_keys(p, "process",
                        {"kind", "rho1", "rho2", "alpha", "burnin"});
    spec.kind = ProcessKind::Ar1;
    const double rho1 =
        p.contains("rho1") ? as_real(p["rho1"], "rho1") : 0.5;
    const double rho2 =
        p.contains("rho2") ? as_real(p["rho2"], "rho2") : 0.5;
    const double alpha =
        p.contains("alpha") ? as_real(p["alpha"], "alpha") : 0.5;
    spec.ar1 = Ar1Params(rho1, rho2, alpha);
    if (p.contains("burnin"))
      spec.ar1.burnin =
          static_cast<std::size_t>(as_uint(p["burnin"], "burnin"));
  } else {
    throw ConfigError("process kind must be 'iid', 'arch' or 'ar1'; got '" +
                      kind + "'");
  }
  return spec;
}

inline EstimatorSpec parse_estimator(const Json& e, std::size_t index) {
  const std::string where = "estimators[" + std::to_string(index) + "]";
  if (!e.is_object()) throw ConfigError(where + " must be an object");
  const auto& id_val = require_key(e, where, "id");
  if (!id_val.is_number_integer())
    throw ConfigError(where + ".id must be an integer");
  EstimatorSpec spec;
  spec.id = id_val.get<int>();

  if (spec.id == 1) {
    reject_unknown_keys(e, where, {"id", "L"});
    if (e.contains("L")) {
      const auto& L = e["L"];
      if (L.is_string() && L.get<std::string>() == "const1") {
        spec.L = HomogeneousNorm::constant_one_diagnostic();
      } else if (L.is_object()) {
        reject_unknown_keys(L, where + ".L", {"c", "a"});
        spec.L = HomogeneousNorm::power(
            as_real(require_key(L, where + ".L", "c"), where + ".L.c"),
            as_real(require_key(L, where + ".L", "a"), where + ".L.a"));
      } else {
        throw ConfigError(where + ".L must be {c, a} or \"const1\"");
      }
    }
  } else if (spec.id == 2) {
    reject_unknown_keys(e, where, {"id", "kappa"});
    if (e.contains("kappa")) spec.kappa = as_real(e["kappa"], where + ".kappa");
  } else if (spec.id == 3) {
    reject_unknown_keys(e, where, {"id", "sigma", "phi", "quad_points"});
    if (e.contains("sigma")) spec.sigma = as_real(e["sigma"], where + ".sigma");
    if (e.contains("phi")) spec.phi = as_real(e["phi"], where + ".phi");
    if (e.contains("quad_points"))
      spec.quad_points = static_cast<std::size_t>(
          as_uint(e["quad_points"], where + ".quad_points"));
  } else {
    throw ConfigError(where + ".id must be 1, 2 or 3");
  }
  spec.validate();
  return spec;
}

inline RunConfig build_run_config(const Json& doc);

}  // namespace detail

inline RunConfig parse_run_config(const std::string& json_text) {
  detail::Json doc;
  try {
    doc = detail::Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");

  try {
    return detail::build_run_config(doc);
  } catch (const nlohmann::json::exception& e) {
    // wrong JSON types surface as nlohmann exceptions; rebrand them
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    // parameter validation (rho range, eta sign, ...) is a config problem too
    throw ConfigError(std::string("config: ") + e.what());
  }
}

namespace detail {

inline RunConfig build_run_config(const Json& doc) {
  detail::reject_unknown_keys(doc, "config",
                              {"rng", "process", "n", "replications",
                               "kn_grid", "estimators", "angles", "seed",
                               "output"});

  RunConfig rc;
  rc.rng_id =
      detail::require_key(doc, "config", "rng").get<std::string>();
  if (rc.rng_id != kRngId)
    throw ConfigError("config expects rng '" + rc.rng_id +
                      "' but this build provides '" + kRngId + "'");

  rc.experiment.process =
      detail::parse_process(detail::require_key(doc, "config", "process"));
  rc.experiment.n = static_cast<std::size_t>(
      detail::as_uint(detail::require_key(doc, "config", "n"), "n"));
  rc.experiment.replications = static_cast<std::size_t>(detail::as_uint(
      detail::require_key(doc, "config", "replications"), "replications"));

  const auto& grid = detail::require_key(doc, "config", "kn_grid");
  if (!grid.is_array() || grid.empty())
    throw ConfigError("'kn_grid' must be a non-empty array");
  for (const auto& k : grid)
    rc.experiment.kn_grid.push_back(
        static_cast<std::size_t>(detail::as_uint(k, "kn_grid entry")));

  const auto& ests = detail::require_key(doc, "config", "estimators");
  if (!ests.is_array() || ests.empty())
    throw ConfigError("'estimators' must be a non-empty array");
  for (std::size_t i = 0; i < ests.size(); ++i)
    rc.experiment.estimators.push_back(detail::parse_estimator(ests[i], i));

  if (doc.contains("angles"))
    rc.experiment.angle_count =
        static_cast<std::size_t>(detail::as_uint(doc["angles"], "angles"));

  rc.experiment.base_seed.value =
      detail::as_uint(detail::require_key(doc, "config", "seed"), "seed");
  rc.output = detail::require_key(doc, "config", "output").get<std::string>();
  if (rc.output.empty()) throw ConfigError("'output' must not be empty");

  rc.experiment.validate();
  return rc;
}

}  // namespace detail

}  // namespace mei
