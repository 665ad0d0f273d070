// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "infowave/common.hpp"
#include "infowave/gmd_model.hpp"
#include "infowave/objective.hpp"
#include "infowave/optimizer.hpp"
#include "infowave/rng.hpp"

namespace infowave {

using Json = nlohmann::ordered_json;

// One mixture component's spectrum. floor_scale is relative: the absolute
// bin floor is floor_scale times the mean band-only spectrum level.
struct PsdComponentConfig {
  double floor_scale = 1e-6;
  std::vector<PsdBand> bands;
};

struct MixtureConfig {
  std::vector<double> weights;
  std::vector<PsdComponentConfig> psd;
};

struct ScenarioConfig {
  int code_length = 64;
  int tir_length = 64;
  double energy = 1.0;
  double scr_db = 0.0;
  double lambda_min = 1e-8;
  double lambda_max = 1e8;
  MixtureConfig target;
  MixtureConfig clutter;
};

struct ObjectiveConfig {
  ObjectiveKind kind = ObjectiveKind::kMiub;
  double wsm_weight = 0.5;
};

struct EvaluationConfig {
  int detection_trials = 10000;
  int estimation_trials = 2000;
  double min_pfa = 1e-2;
  std::vector<double> scr_grid_db{-5.0, 0.0, 5.0};
  int doppler_points = 129;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  ObjectiveConfig objective;
  std::string algorithm = "pcdoa";  // or "pso"
  OptimizerConfig optimizer;
  PsoConfig pso;
  EvaluationConfig evaluation;
  std::vector<std::string> stages{"optimize", "evaluate", "analyze"};
  std::uint64_t seed = 1;
  std::string output_dir = "out";
};

namespace detail {

inline void expect_keys(const Json& j, std::initializer_list<const char*> keys,
                        const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, const T& fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

}  // namespace detail

inline PsdComponentConfig parse_psd_component(const Json& j, const std::string& where) {
  detail::expect_keys(j, {"floor_scale", "bands"}, where);
  PsdComponentConfig out;
  out.floor_scale = detail::get_or(j, "floor_scale", out.floor_scale, where);
  if (!j.contains("bands") || !j.at("bands").is_array() || j.at("bands").empty())
    throw ConfigError(where + ": 'bands' must be a nonempty array");
  for (std::size_t i = 0; i < j.at("bands").size(); ++i) {
    const Json& b = j.at("bands").at(i);
    std::string bw = where + ".bands[" + std::to_string(i) + "]";
    detail::expect_keys(b, {"center", "width", "power"}, bw);
    PsdBand band;
    band.center = detail::get_or(b, "center", band.center, bw);
    band.width = detail::get_or(b, "width", band.width, bw);
    band.power = detail::get_or(b, "power", band.power, bw);
    out.bands.push_back(band);
  }
  return out;
}

inline MixtureConfig parse_mixture(const Json& j, const std::string& where) {
  detail::expect_keys(j, {"weights", "psd"}, where);
  MixtureConfig out;
  out.weights = detail::get_or(j, "weights", std::vector<double>{}, where);
  if (out.weights.empty()) throw ConfigError(where + ": 'weights' must be nonempty");
  if (!j.contains("psd") || !j.at("psd").is_array())
    throw ConfigError(where + ": 'psd' must be an array");
  for (std::size_t i = 0; i < j.at("psd").size(); ++i)
    out.psd.push_back(
        parse_psd_component(j.at("psd").at(i), where + ".psd[" + std::to_string(i) + "]"));
  if (out.psd.size() != out.weights.size())
    throw ConfigError(where + ": weights and psd lists differ in length");
  return out;
}

inline ExperimentConfig parse_config(const Json& j) {
  detail::expect_keys(j,
                      {"scenario", "objective", "algorithm", "optimizer", "pso",
                       "evaluation", "stages", "seed", "output_dir"},
                      "config");
  ExperimentConfig cfg;

  if (j.contains("scenario")) {
    const Json& s = j.at("scenario");
    detail::expect_keys(s,
                        {"code_length", "tir_length", "energy", "scr_db", "lambda_min",
                         "lambda_max", "target", "clutter"},
                        "scenario");
    cfg.scenario.code_length =
        detail::get_or(s, "code_length", cfg.scenario.code_length, "scenario");
    cfg.scenario.tir_length =
        detail::get_or(s, "tir_length", cfg.scenario.tir_length, "scenario");
    cfg.scenario.energy = detail::get_or(s, "energy", cfg.scenario.energy, "scenario");
    cfg.scenario.scr_db = detail::get_or(s, "scr_db", cfg.scenario.scr_db, "scenario");
    cfg.scenario.lambda_min =
        detail::get_or(s, "lambda_min", cfg.scenario.lambda_min, "scenario");
    cfg.scenario.lambda_max =
        detail::get_or(s, "lambda_max", cfg.scenario.lambda_max, "scenario");
    if (!s.contains("target") || !s.contains("clutter"))
      throw ConfigError("scenario: 'target' and 'clutter' blocks are required");
    cfg.scenario.target = parse_mixture(s.at("target"), "scenario.target");
    cfg.scenario.clutter = parse_mixture(s.at("clutter"), "scenario.clutter");
  } else {
    throw ConfigError("config: 'scenario' block is required");
  }

  if (j.contains("objective")) {
    const Json& o = j.at("objective");
    detail::expect_keys(o, {"kind", "wsm_weight"}, "objective");
    std::string kind = detail::get_or<std::string>(o, "kind", "miub", "objective");
    if (kind == "miub")
      cfg.objective.kind = ObjectiveKind::kMiub;
    else if (kind == "mi")
      cfg.objective.kind = ObjectiveKind::kMi;
    else if (kind == "wsm")
      cfg.objective.kind = ObjectiveKind::kWsm;
    else if (kind == "rpc")
      cfg.objective.kind = ObjectiveKind::kRpc;
    else
      throw ConfigError("objective.kind: expected miub | mi | wsm | rpc, got '" + kind + "'");
    cfg.objective.wsm_weight =
        detail::get_or(o, "wsm_weight", cfg.objective.wsm_weight, "objective");
  }

  cfg.algorithm = detail::get_or<std::string>(j, "algorithm", cfg.algorithm, "config");
  if (cfg.algorithm != "pcdoa" && cfg.algorithm != "pso")
    throw ConfigError("algorithm: expected pcdoa | pso, got '" + cfg.algorithm + "'");

  if (j.contains("optimizer")) {
    const Json& o = j.at("optimizer");
    detail::expect_keys(o,
                        {"population", "iterations", "lfm_fraction", "phase_split",
                         "groups", "chaos_iterations", "lfm_jitter", "elitism"},
                        "optimizer");
    cfg.optimizer.population =
        detail::get_or(o, "population", cfg.optimizer.population, "optimizer");
    cfg.optimizer.iterations =
        detail::get_or(o, "iterations", cfg.optimizer.iterations, "optimizer");
    cfg.optimizer.lfm_fraction =
        detail::get_or(o, "lfm_fraction", cfg.optimizer.lfm_fraction, "optimizer");
    cfg.optimizer.phase_split =
        detail::get_or(o, "phase_split", cfg.optimizer.phase_split, "optimizer");
    cfg.optimizer.groups = detail::get_or(o, "groups", cfg.optimizer.groups, "optimizer");
    cfg.optimizer.chaos_iterations =
        detail::get_or(o, "chaos_iterations", cfg.optimizer.chaos_iterations, "optimizer");
    cfg.optimizer.lfm_jitter =
        detail::get_or(o, "lfm_jitter", cfg.optimizer.lfm_jitter, "optimizer");
    cfg.optimizer.elitism = detail::get_or(o, "elitism", cfg.optimizer.elitism, "optimizer");
  }

  if (j.contains("pso")) {
    const Json& o = j.at("pso");
    detail::expect_keys(
        o, {"population", "iterations", "inertia", "cognitive", "social", "velocity_clamp"},
        "pso");
    cfg.pso.population = detail::get_or(o, "population", cfg.pso.population, "pso");
    cfg.pso.iterations = detail::get_or(o, "iterations", cfg.pso.iterations, "pso");
    cfg.pso.inertia = detail::get_or(o, "inertia", cfg.pso.inertia, "pso");
    cfg.pso.cognitive = detail::get_or(o, "cognitive", cfg.pso.cognitive, "pso");
    cfg.pso.social = detail::get_or(o, "social", cfg.pso.social, "pso");
    cfg.pso.velocity_clamp =
        detail::get_or(o, "velocity_clamp", cfg.pso.velocity_clamp, "pso");
  }

  if (j.contains("evaluation")) {
    const Json& e = j.at("evaluation");
    detail::expect_keys(e,
                        {"detection_trials", "estimation_trials", "min_pfa", "scr_grid_db",
                         "doppler_points"},
                        "evaluation");
    cfg.evaluation.detection_trials =
        detail::get_or(e, "detection_trials", cfg.evaluation.detection_trials, "evaluation");
    cfg.evaluation.estimation_trials = detail::get_or(
        e, "estimation_trials", cfg.evaluation.estimation_trials, "evaluation");
    cfg.evaluation.min_pfa = detail::get_or(e, "min_pfa", cfg.evaluation.min_pfa, "evaluation");
    cfg.evaluation.scr_grid_db =
        detail::get_or(e, "scr_grid_db", cfg.evaluation.scr_grid_db, "evaluation");
    cfg.evaluation.doppler_points =
        detail::get_or(e, "doppler_points", cfg.evaluation.doppler_points, "evaluation");
  }

  cfg.stages = detail::get_or(j, "stages", cfg.stages, "config");
  for (const std::string& st : cfg.stages)
    if (st != "optimize" && st != "evaluate" && st != "analyze")
      throw ConfigError("stages: unknown stage '" + st + "'");
  cfg.seed = detail::get_or(j, "seed", cfg.seed, "config");
  cfg.output_dir = detail::get_or<std::string>(j, "output_dir", cfg.output_dir, "config");
  return cfg;
}

inline Json to_json(const PsdComponentConfig& c) {
  Json bands = Json::array();
  for (const PsdBand& b : c.bands)
    bands.push_back({{"center", b.center}, {"width", b.width}, {"power", b.power}});
  return Json{{"floor_scale", c.floor_scale}, {"bands", bands}};
}

inline Json to_json(const MixtureConfig& m) {
  Json psd = Json::array();
  for (const PsdComponentConfig& c : m.psd) psd.push_back(to_json(c));
  return Json{{"weights", m.weights}, {"psd", psd}};
}

inline Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["scenario"] = Json{{"code_length", cfg.scenario.code_length},
                       {"tir_length", cfg.scenario.tir_length},
                       {"energy", cfg.scenario.energy},
                       {"scr_db", cfg.scenario.scr_db},
                       {"lambda_min", cfg.scenario.lambda_min},
                       {"lambda_max", cfg.scenario.lambda_max},
                       {"target", to_json(cfg.scenario.target)},
                       {"clutter", to_json(cfg.scenario.clutter)}};
  j["objective"] =
      Json{{"kind", to_string(cfg.objective.kind)}, {"wsm_weight", cfg.objective.wsm_weight}};
  j["algorithm"] = cfg.algorithm;
  j["optimizer"] = Json{{"population", cfg.optimizer.population},
                        {"iterations", cfg.optimizer.iterations},
                        {"lfm_fraction", cfg.optimizer.lfm_fraction},
                        {"phase_split", cfg.optimizer.phase_split},
                        {"groups", cfg.optimizer.groups},
                        {"chaos_iterations", cfg.optimizer.chaos_iterations},
                        {"lfm_jitter", cfg.optimizer.lfm_jitter},
                        {"elitism", cfg.optimizer.elitism}};
  j["pso"] = Json{{"population", cfg.pso.population},
                  {"iterations", cfg.pso.iterations},
                  {"inertia", cfg.pso.inertia},
                  {"cognitive", cfg.pso.cognitive},
                  {"social", cfg.pso.social},
                  {"velocity_clamp", cfg.pso.velocity_clamp}};
  j["evaluation"] = Json{{"detection_trials", cfg.evaluation.detection_trials},
                         {"estimation_trials", cfg.evaluation.estimation_trials},
                         {"min_pfa", cfg.evaluation.min_pfa},
                         {"scr_grid_db", cfg.evaluation.scr_grid_db},
                         {"doppler_points", cfg.evaluation.doppler_points}};
  j["stages"] = cfg.stages;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  return j;
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
  return to_json(cfg).dump(2) + "\n";
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  return parse_config(j);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// Identity hash carried in every output header: FNV-1a over the canonical
// serialization. Identifies the experiment content; seed and storage
// location are carried separately (run_id = hash + seed suffix).
inline std::string config_hash(const ExperimentConfig& cfg) {
  ExperimentConfig canon = cfg;
  canon.seed = 0;
  canon.output_dir.clear();
  std::uint64_t h = fnv1a64(serialize_config(canon));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// Absolute PSD spec for one mixture component at a given dimension.
inline PsdSpec materialize_psd(const PsdComponentConfig& c, int dim) {
  PsdSpec spec;
  spec.bands = c.bands;
  spec.dim = dim;
  spec.floor = 0.0;
  check_psd_spec(spec);
  double mean = 0.0;
  for (int i = 0; i < dim; ++i) {
    double f = static_cast<double>(i) / dim;
    if (f >= 0.5) f -= 1.0;
    mean += psd_value(spec, f);
  }
  mean /= static_cast<double>(dim);
  spec.floor = c.floor_scale * mean;
  return spec;
}

inline GmdModel build_mixture(const MixtureConfig& m, int dim, double lambda_min,
                              double lambda_max) {
  GmdModel model;
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    GaussianComponent comp;
    comp.weight = m.weights[i];
    comp.covariance =
        synth_covariance_from_psd(materialize_psd(m.psd[i], dim), lambda_min, lambda_max);
    model.components.push_back(std::move(comp));
  }
  check_model_shape(model);
  return model;
}

// Scenario synthesis: clutter in the receive space, target in tap space,
// then SCR calibration.
inline Scenario build_scenario(const ScenarioConfig& sc) {
  if (sc.code_length < 1 || sc.tir_length < 1)
    throw ConfigError("scenario: code_length and tir_length must be positive");
  Scenario out;
  out.code_length = sc.code_length;
  out.energy = sc.energy;
  out.scr_db = sc.scr_db;
  int receive_dim = sc.code_length + sc.tir_length - 1;
  out.target = build_mixture(sc.target, sc.tir_length, sc.lambda_min, sc.lambda_max);
  out.clutter = build_mixture(sc.clutter, receive_dim, sc.lambda_min, sc.lambda_max);
  return calibrated(out);
}

}  // namespace infowave
