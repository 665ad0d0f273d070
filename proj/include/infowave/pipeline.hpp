// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "infowave/config.hpp"
#include "infowave/evaluation.hpp"
#include "infowave/io.hpp"
#include "infowave/objective.hpp"
#include "infowave/optimizer.hpp"
#include "infowave/oracle.hpp"
#include "infowave/waveform.hpp"

namespace infowave {

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string role;
};

struct ResultManifest {
  std::string run_id;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> files;
  std::string created_utc;
  bool complete = false;
};

namespace detail {

inline std::string utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return std::string(buf);
}

inline Json manifest_json(const ResultManifest& m) {
  Json files = Json::array();
  for (const ManifestEntry& e : m.files) files.push_back({{"path", e.path}, {"role", e.role}});
  return Json{{"run_id", m.run_id},
              {"config_hash", m.config_hash},
              {"seed", m.seed},
              {"files", files},
              {"created_utc", m.created_utc},
              {"complete", m.complete}};
}

}  // namespace detail

inline void write_manifest(const std::string& path, const ResultManifest& m) {
  write_text_file(path, detail::manifest_json(m).dump(2) + "\n");
}

inline bool stage_selected(const ExperimentConfig& cfg, const std::string& stage) {
  return std::find(cfg.stages.begin(), cfg.stages.end(), stage) != cfg.stages.end();
}

// Full pipeline: materialize the scenario, produce the waveform (optimizer
// run or random code), then the selected evaluation and analysis artifacts.
// Output bytes depend only on (config, seed), never on the thread count.
inline ResultManifest run_experiment(const ExperimentConfig& cfg, unsigned threads = 1) {
  namespace fs = std::filesystem;
  ResultManifest manifest;
  manifest.config_hash = config_hash(cfg);
  manifest.seed = cfg.seed;
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "-%016llx", static_cast<unsigned long long>(cfg.seed));
    manifest.run_id = manifest.config_hash + buf;
  }
  manifest.created_utc = detail::utc_now();

  fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);
  FileHeader header{manifest.config_hash, cfg.seed};

  auto emit = [&](const std::string& name, const std::string& body, const std::string& role) {
    write_text_file((out_dir / name).string(), body);
    manifest.files.push_back({name, role});
  };

  try {
    emit("config.json", serialize_config(cfg), "config");
    Scenario scenario = build_scenario(cfg.scenario);

    bool want_optimize = stage_selected(cfg, "optimize");
    bool want_evaluate = stage_selected(cfg, "evaluate");
    bool want_analyze = stage_selected(cfg, "analyze");

    Waveform waveform;
    if (cfg.objective.kind == ObjectiveKind::kRpc) {
      Rng rng(derive_seed(cfg.seed, "rpc"));
      waveform = random_phase_code(scenario.code_length, scenario.amplitude(), rng);
    } else {
      if (!want_optimize)
        throw ConfigError("stages: objective '" + to_string(cfg.objective.kind) +
                          "' requires the optimize stage");
      FitnessFn fitness =
          make_fitness(scenario, cfg.objective.kind, cfg.objective.wsm_weight);
      RunTrace trace;
      if (cfg.algorithm == "pcdoa") {
        OptimizerConfig oc = cfg.optimizer;
        oc.seed = derive_seed(cfg.seed, "optimizer");
        trace = run_pcdoa(fitness, scenario, oc, threads);
      } else {
        PsoConfig pc = cfg.pso;
        pc.seed = derive_seed(cfg.seed, "optimizer");
        trace = run_pso(fitness, scenario, pc, threads);
      }
      waveform = phases_to_waveform(trace.best.phases, scenario.amplitude());
      emit("trace.txt", trace_text(trace, header), "trace");
      emit("objective.txt",
           breakdown_text(miub_objective(waveform, scenario), header), "objective");
    }
    emit("waveform.txt", waveform_text(waveform, header), "waveform");

    if (want_evaluate) {
      DetectionRun det;
      det.scenario = scenario;
      det.waveform = waveform;
      det.trials = cfg.evaluation.detection_trials;
      det.min_pfa = cfg.evaluation.min_pfa;
      det.seed = derive_seed(cfg.seed, "detection");
      emit("roc.txt", roc_text(roc_curve(det, threads), header), "roc");

      std::vector<LabeledWaveform> lw{{to_string(cfg.objective.kind), waveform}};
      std::vector<MseRow> rows =
          mse_vs_scr(scenario, lw, cfg.evaluation.scr_grid_db,
                     cfg.evaluation.estimation_trials, derive_seed(cfg.seed, "estimation"),
                     threads);
      emit("mse.txt", mse_text(rows, header), "mse");
    }

    if (want_analyze) {
      emit("autocorrelation.txt", autocorrelation_text(autocorrelation(waveform), header),
           "autocorr");
      emit("ambiguity.txt",
           ambiguity_text(ambiguity(waveform, doppler_grid(cfg.evaluation.doppler_points)),
                          header),
           "ambiguity");
    }

    manifest.complete = true;
    write_manifest((out_dir / "manifest.json").string(), manifest);
  } catch (...) {
    manifest.complete = false;
    write_manifest((out_dir / "manifest.json").string(), manifest);
    throw;
  }
  return manifest;
}

struct ValidationCheck {
  std::string name;
  bool pass = false;
  std::string details;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool pass = true;
};

namespace detail {

inline void add_check(ValidationReport& rep, const std::string& name, bool pass,
                      const std::string& details) {
  rep.checks.push_back({name, pass, details});
  rep.pass = rep.pass && pass;
}

}  // namespace detail

// Oracle suite over a small scenario: decomposition identity, degenerate
// cases, approximation sanity, Lipschitz bound, schedule and wrap algebra.
inline ValidationReport validate_experiment(const ExperimentConfig& cfg,
                                            unsigned threads = 1) {
  ValidationReport rep;
  Scenario scenario = build_scenario(cfg.scenario);
  if (scenario.receive_dim() > 24)
    throw ValidationError("validate: receive dimension " +
                          std::to_string(scenario.receive_dim()) +
                          " too large for the oracle suite (max 24)");

  Rng rng(derive_seed(cfg.seed, "validate-waveform"));
  Waveform probe = random_phase_code(scenario.code_length, scenario.amplitude(), rng);

  // Model diagnostics.
  {
    ModelDiagnostics dt =
        validate_model(scenario.target, cfg.scenario.lambda_min, cfg.scenario.lambda_max);
    ModelDiagnostics dc =
        validate_model(scenario.clutter, cfg.scenario.lambda_min, cfg.scenario.lambda_max);
    detail::add_check(rep, "model-eigenvalue-bounds", dt.pass && dc.pass,
                      "target pass=" + std::to_string(dt.pass) +
                          " clutter pass=" + std::to_string(dc.pass));
  }

  // Decomposition identity: criterion = information + marginal divergence.
  {
    McEstimate miub = mc_miub(scenario, probe, {200, 500}, derive_seed(cfg.seed, "v-miub"),
                              threads);
    McEstimate mi = mc_mutual_information(scenario, probe, 20000,
                                          derive_seed(cfg.seed, "v-mi"), threads);
    CMatrix sm = convolution_matrix_of(probe.samples, scenario.tir_length());
    CompositeLikelihood comp =
        composite_covariances(sm, scenario.target, scenario.clutter);
    McEstimate kl = mc_kl(to_model(comp), scenario.clutter, 20000,
                          derive_seed(cfg.seed, "v-kl"), threads);
    double gap = std::abs(miub.value - (mi.value + kl.value));
    double se = std::sqrt(miub.se * miub.se + mi.se * mi.se + kl.se * kl.se);
    detail::add_check(rep, "decomposition-identity", gap <= 3.0 * se,
                      "gap=" + format_full(gap) + " combined_se=" + format_full(se));
  }

  // Self divergence is zero.
  {
    McEstimate self = mc_kl(scenario.clutter, scenario.clutter, 2000,
                            derive_seed(cfg.seed, "v-self"), threads);
    detail::add_check(rep, "self-divergence-zero",
                      std::abs(self.value) <= std::max(3.0 * self.se, 1e-12),
                      "value=" + format_full(self.value) + " se=" + format_full(self.se));
  }

  // Zero target: no information.
  {
    Scenario zero = scenario;
    for (GaussianComponent& c : zero.target.components) c.covariance.setZero();
    McEstimate mi0 = mc_mutual_information(zero, probe, 2000,
                                           derive_seed(cfg.seed, "v-mi0"), threads);
    McEstimate miub0 =
        mc_miub(zero, probe, {100, 100}, derive_seed(cfg.seed, "v-miub0"), threads);
    bool ok = std::abs(mi0.value) <= std::max(3.0 * mi0.se, 1e-12) &&
              std::abs(miub0.value) <= std::max(3.0 * miub0.se, 1e-12);
    detail::add_check(rep, "zero-target-no-information", ok,
                      "mi=" + format_full(mi0.value) + " miub=" + format_full(miub0.value));
  }

  // Closed-form approximations against their oracles (informational gaps,
  // hard failure only if wildly inconsistent).
  {
    ApproximationReportPair pair = approximation_error_report(
        scenario, probe, 20000, derive_seed(cfg.seed, "v-approx"), threads);
    detail::add_check(rep, "approximation-report",
                      std::isfinite(pair.mi.abs_gap) && std::isfinite(pair.kl.abs_gap),
                      "mi_gap=" + format_full(pair.mi.abs_gap) +
                          " kl_gap=" + format_full(pair.kl.abs_gap) +
                          " trace_cy=" + format_full(pair.mi.total_variance_trace));
  }

  // Covariance increment bound.
  {
    LipschitzReport lip =
        lipschitz_probe(scenario, 200, derive_seed(cfg.seed, "v-lip"), threads);
    detail::add_check(rep, "covariance-lipschitz-bound", lip.violations == 0,
                      "max_ratio=" + format_full(lip.max_covariance_ratio) +
                          " bound=" + format_full(lip.bound));
  }

  // Schedule endpoints and wrap algebra.
  {
    bool ok = cosine_schedule(0, 100) == 1.0 && cosine_schedule(50, 100) == 0.5 &&
              cosine_schedule(100, 100) == 0.0;
    Rng wr(derive_seed(cfg.seed, "v-wrap"));
    for (int i = 0; i < 10000 && ok; ++i) {
      double x = wr.uniform(-50.0, 50.0);
      double w1 = wrap_phase(x);
      ok = ok && w1 >= -kPi && w1 < kPi && wrap_phase(w1) == w1;
    }
    detail::add_check(rep, "schedule-and-wrap", ok, ok ? "exact" : "violation found");
  }

  return rep;
}

inline std::string validation_text(const ValidationReport& rep, const FileHeader& h) {
  std::ostringstream os;
  os << header_lines(h);
  os << "# columns: check, status, details\n";
  for (const ValidationCheck& c : rep.checks)
    os << c.name << ", " << (c.pass ? "pass" : "FAIL") << ", " << c.details << "\n";
  os << "# overall: " << (rep.pass ? "pass" : "FAIL") << "\n";
  return os.str();
}

}  // namespace infowave
