// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "infowave/common.hpp"
#include "infowave/gmd_model.hpp"
#include "infowave/rng.hpp"
#include "infowave/waveform.hpp"

namespace infowave {

struct OptimizerConfig {
  int population = 200;
  int iterations = 2000;
  double lfm_fraction = 0.3;     // share of chirp-seeded individuals
  double phase_split = 0.9;      // explore for t <= phase_split * T
  int groups = 5;
  int chaos_iterations = 100;
  double lfm_jitter = kPi / 20.0;
  std::uint64_t seed = 0;
  int elitism = 2;
};

inline void check_optimizer_config(const OptimizerConfig& c) {
  if (c.population < 1) throw ValidationError("optimizer: population must be positive");
  if (c.iterations < 1) throw ValidationError("optimizer: iterations must be positive");
  if (!(c.lfm_fraction > 0.0 && c.lfm_fraction < 1.0))
    throw ValidationError("optimizer: lfm fraction must lie in (0, 1)");
  if (!(c.phase_split > 0.0 && c.phase_split <= 1.0))
    throw ValidationError("optimizer: phase split must lie in (0, 1]");
  if (c.groups < 1 || c.groups > c.population)
    throw ValidationError("optimizer: group count must lie in [1, population]");
  if (c.chaos_iterations < 1)
    throw ValidationError("optimizer: chaos iteration count must be positive");
  if (!(c.lfm_jitter > 0.0 && c.lfm_jitter < kPi))
    throw ValidationError("optimizer: lfm jitter must lie in (0, pi)");
  if (c.elitism < 0) throw ValidationError("optimizer: elitism count must be nonnegative");
}

struct PsoConfig {
  int population = 200;
  int iterations = 2000;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  double velocity_clamp = kPi;
  std::uint64_t seed = 0;
};

inline void check_pso_config(const PsoConfig& c) {
  if (c.population < 1) throw ValidationError("pso: population must be positive");
  if (c.iterations < 1) throw ValidationError("pso: iterations must be positive");
  if (!(c.inertia >= 0.0) || !(c.cognitive >= 0.0) || !(c.social >= 0.0))
    throw ValidationError("pso: coefficients must be nonnegative");
  if (!(c.velocity_clamp > 0.0)) throw ValidationError("pso: velocity clamp must be positive");
}

struct Candidate {
  PhaseVector phases;
  double fitness = 0.0;
  bool evaluated = false;
};

struct TraceRow {
  int iteration = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  std::string phase;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  Candidate best;
  std::uint64_t evaluations = 0;
};

// Initialization partition: floor(eta * Np) chirp seeds, half the remainder
// chaotic, the rest uniform.
struct PartitionCounts {
  int lfm = 0;
  int chaos = 0;
  int random = 0;
};

inline PartitionCounts partition_counts(int population, double lfm_fraction) {
  PartitionCounts p;
  p.lfm = static_cast<int>(std::floor(lfm_fraction * population));
  p.chaos = (population - p.lfm) / 2;
  p.random = population - p.lfm - p.chaos;
  return p;
}

// Chirp-like seeds: theta_n = wrap(beta * pi * (n-1)^2 / (N-1) + jitter),
// beta ~ U(-1, 1), jitter ~ U(-delta, delta). N = 1 has no quadratic term.
inline std::vector<PhaseVector> init_lfm(int count, int n, double delta, Rng& rng) {
  if (n < 1) throw ValidationError("init_lfm: code length must be positive");
  if (count < 0) throw ValidationError("init_lfm: negative count");
  if (!(delta >= 0.0)) throw ValidationError("init_lfm: negative jitter bound");
  std::vector<PhaseVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double beta = rng.uniform(-1.0, 1.0);
    PhaseVector theta(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      double quad = n == 1 ? 0.0
                           : beta * kPi * static_cast<double>(j) * static_cast<double>(j) /
                                 static_cast<double>(n - 1);
      theta[static_cast<std::size_t>(j)] = wrap_phase(quad + rng.uniform(-delta, delta));
    }
    out.push_back(std::move(theta));
  }
  return out;
}

// Logistic-map seeds: coordinates start uniform in (0, 1) excluding the
// map's degenerate points, burn in `iterations` steps of c <- 4c(1-c), then
// map affinely onto [-pi, pi).
inline std::vector<PhaseVector> init_chaos(int count, int n, int iterations, Rng& rng) {
  if (n < 1) throw ValidationError("init_chaos: code length must be positive");
  if (count < 0) throw ValidationError("init_chaos: negative count");
  std::vector<PhaseVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    PhaseVector theta(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      double c;
      do {
        c = rng.unit();
      } while (c <= 1e-9 || c >= 1.0 - 1e-9 || c == 0.25 || c == 0.5 || c == 0.75);
      for (int it = 0; it < iterations; ++it) c = 4.0 * c * (1.0 - c);
      theta[static_cast<std::size_t>(j)] = wrap_phase(-kPi + kTwoPi * c);
    }
    out.push_back(std::move(theta));
  }
  return out;
}

inline std::vector<PhaseVector> init_random(int count, int n, Rng& rng) {
  if (n < 1) throw ValidationError("init_random: code length must be positive");
  if (count < 0) throw ValidationError("init_random: negative count");
  std::vector<PhaseVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    PhaseVector theta(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      theta[static_cast<std::size_t>(j)] = wrap_phase(rng.uniform(-kPi, kPi));
    out.push_back(std::move(theta));
  }
  return out;
}

// (cos(pi t / T) + 1) / 2; hits 1, 1/2, 0 exactly at t = 0, T/2, T.
inline double cosine_schedule(std::int64_t t, std::int64_t total) {
  if (total < 1) throw ValidationError("cosine_schedule: total must be positive");
  if (t < 0 || t > total) throw ValidationError("cosine_schedule: t outside [0, T]");
  double r = static_cast<double>(t) / static_cast<double>(total);
  return 0.5 * (std::cos(kPi * r) + 1.0);
}

namespace detail {

// k ~ U_int[lo, hi] perturbed dimensions, base phases either the
// candidate's own (exploration) or the guide's (exploitation).
inline PhaseVector perturb_subset(const PhaseVector& own, const PhaseVector& base,
                                  int k_lo, int k_hi, double scale, Rng& rng) {
  int n = static_cast<int>(own.size());
  k_lo = std::clamp(k_lo, 1, n);
  k_hi = std::clamp(k_hi, k_lo, n);
  int k = static_cast<int>(rng.uniform_int(k_lo, k_hi));
  std::vector<std::size_t> picked = rng.sample_indices(own.size(), static_cast<std::size_t>(k));
  PhaseVector out = own;
  for (std::size_t idx : picked) {
    double delta = rng.uniform(-kPi, kPi);
    out[idx] = wrap_phase(base[idx] + scale * delta);
  }
  return out;
}

}  // namespace detail

// Exploration: perturb a random small subset of the candidate's own phases,
// step scale annealed by the cosine schedule.
inline PhaseVector explore_step(const PhaseVector& phases, int groups, std::int64_t t,
                                std::int64_t total, Rng& rng) {
  if (groups < 1) throw ValidationError("explore_step: group count must be positive");
  int n = static_cast<int>(phases.size());
  if (n < 1) throw ValidationError("explore_step: empty phase vector");
  double zeta = cosine_schedule(t, total);
  int lo = static_cast<int>((n + 8 * groups - 1) / (8 * groups));
  int hi = static_cast<int>((n + 3 * groups - 1) / (3 * groups));
  return detail::perturb_subset(phases, phases, lo, hi, zeta, rng);
}

// Exploitation: selected dimensions jump onto the global best plus an
// annealed perturbation; unselected dimensions keep the candidate's values.
inline PhaseVector exploit_step(const PhaseVector& phases, const PhaseVector& global_best,
                                std::int64_t t, std::int64_t total, Rng& rng) {
  if (phases.size() != global_best.size())
    throw ValidationError("exploit_step: dimension mismatch");
  int n = static_cast<int>(phases.size());
  if (n < 1) throw ValidationError("exploit_step: empty phase vector");
  double eta = cosine_schedule(t, total);
  int hi = std::max(2, (n + 2) / 3);
  return detail::perturb_subset(phases, global_best, 1, hi, eta, rng);
}

using FitnessFn = std::function<double(const Waveform&)>;

namespace detail {

inline void evaluate_population(std::vector<Candidate>& pop, const FitnessFn& fitness,
                                double amplitude, unsigned threads,
                                std::uint64_t& evaluations) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (!pop[i].evaluated) todo.push_back(i);
  parallel_for(todo.size(), threads, [&](std::size_t j) {
    Candidate& c = pop[todo[j]];
    c.fitness = fitness(phases_to_waveform(c.phases, amplitude));
    c.evaluated = true;
  });
  evaluations += todo.size();
}

inline std::size_t argmax_fitness(const std::vector<Candidate>& pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (pop[i].fitness > pop[best].fitness) best = i;
  return best;
}

inline double mean_fitness(const std::vector<Candidate>& pop) {
  std::vector<double> f(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) f[i] = pop[i].fitness;
  return pairwise_sum(f) / static_cast<double>(pop.size());
}

// Descending-fitness order of the top `count` population indices.
inline std::vector<std::size_t> top_indices(const std::vector<Candidate>& pop,
                                            std::size_t count) {
  std::vector<std::size_t> order(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pop[a].fitness > pop[b].fitness;
  });
  order.resize(std::min(count, order.size()));
  return order;
}

}  // namespace detail

// Population metaheuristic over the phase torus: hybrid initialization,
// grouped exploration for t <= phase_split * T, global-best exploitation
// afterwards, greedy per-slot replacement plus top-elite reinstatement.
inline RunTrace run_pcdoa(const FitnessFn& fitness, const Scenario& scenario,
                          const OptimizerConfig& config, unsigned threads = 1) {
  check_optimizer_config(config);
  int n = scenario.code_length;
  if (n < 1) throw ValidationError("run_pcdoa: code length must be positive");
  double amplitude = scenario.amplitude();

  PartitionCounts parts = partition_counts(config.population, config.lfm_fraction);
  Rng init_rng(derive_seed(config.seed, "pcdoa-init"));
  std::vector<Candidate> pop;
  pop.reserve(static_cast<std::size_t>(config.population));
  for (PhaseVector& p : init_lfm(parts.lfm, n, config.lfm_jitter, init_rng))
    pop.push_back({std::move(p), 0.0, false});
  for (PhaseVector& p : init_chaos(parts.chaos, n, config.chaos_iterations, init_rng))
    pop.push_back({std::move(p), 0.0, false});
  for (PhaseVector& p : init_random(parts.random, n, init_rng))
    pop.push_back({std::move(p), 0.0, false});

  RunTrace trace;
  detail::evaluate_population(pop, fitness, amplitude, threads, trace.evaluations);
  Candidate global_best = pop[detail::argmax_fitness(pop)];
  trace.rows.push_back({0, global_best.fitness, detail::mean_fitness(pop), "init"});

  std::size_t np = pop.size();
  for (int t = 1; t <= config.iterations; ++t) {
    bool exploring = static_cast<double>(t) <=
                     config.phase_split * static_cast<double>(config.iterations);

    std::vector<Candidate> offspring(np);
    std::vector<bool> pass_through(np, false);

    if (exploring) {
      // Random contiguous-block grouping; each group's best passes through.
      Rng iter_rng(derive_seed(config.seed, "pcdoa-iter", static_cast<std::uint64_t>(t)));
      std::vector<std::size_t> order(np);
      for (std::size_t i = 0; i < np; ++i) order[i] = i;
      iter_rng.shuffle(order);
      std::size_t groups = static_cast<std::size_t>(config.groups);
      for (std::size_t g = 0; g < groups; ++g) {
        std::size_t lo = np * g / groups;
        std::size_t hi = np * (g + 1) / groups;
        if (lo >= hi) continue;
        std::size_t elite = order[lo];
        for (std::size_t j = lo; j < hi; ++j)
          if (pop[order[j]].fitness > pop[elite].fitness) elite = order[j];
        pass_through[elite] = true;
      }
    }

    for (std::size_t i = 0; i < np; ++i) {
      if (pass_through[i]) {
        offspring[i] = pop[i];
        continue;
      }
      Rng cand_rng(derive_seed(config.seed, "pcdoa-cand",
                               static_cast<std::uint64_t>(t) * np + i));
      PhaseVector next =
          exploring
              ? explore_step(pop[i].phases, config.groups, t, config.iterations, cand_rng)
              : exploit_step(pop[i].phases, global_best.phases, t, config.iterations,
                             cand_rng);
      offspring[i] = {std::move(next), 0.0, false};
    }
    detail::evaluate_population(offspring, fitness, amplitude, threads, trace.evaluations);

    // Greedy per-slot selection keeps every elite's slot at least as fit,
    // so the explicit reinstatement below is a guard, not the usual path.
    std::vector<std::size_t> elites =
        detail::top_indices(pop, static_cast<std::size_t>(config.elitism));
    std::vector<Candidate> elite_copies;
    elite_copies.reserve(elites.size());
    for (std::size_t e : elites) elite_copies.push_back(pop[e]);

    for (std::size_t i = 0; i < np; ++i)
      if (offspring[i].fitness > pop[i].fitness) pop[i] = std::move(offspring[i]);

    for (const Candidate& e : elite_copies) {
      bool present = false;
      for (const Candidate& c : pop)
        if (c.fitness >= e.fitness) {
          present = true;
          break;
        }
      if (!present) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < np; ++i)
          if (pop[i].fitness < pop[worst].fitness) worst = i;
        pop[worst] = e;
      }
    }

    std::size_t best_idx = detail::argmax_fitness(pop);
    if (pop[best_idx].fitness > global_best.fitness) global_best = pop[best_idx];
    trace.rows.push_back({t, global_best.fitness, detail::mean_fitness(pop),
                          exploring ? "explore" : "exploit"});
  }
  trace.best = global_best;
  return trace;
}

// Canonical global-best particle swarm over wrapped phases; velocities are
// clamped, positions and attraction differences wrapped.
inline RunTrace run_pso(const FitnessFn& fitness, const Scenario& scenario,
                        const PsoConfig& config, unsigned threads = 1) {
  check_pso_config(config);
  int n = scenario.code_length;
  if (n < 1) throw ValidationError("run_pso: code length must be positive");
  double amplitude = scenario.amplitude();
  std::size_t np = static_cast<std::size_t>(config.population);

  Rng init_rng(derive_seed(config.seed, "pso-init"));
  std::vector<Candidate> pop;
  pop.reserve(np);
  for (PhaseVector& p : init_random(config.population, n, init_rng))
    pop.push_back({std::move(p), 0.0, false});
  std::vector<PhaseVector> velocity(np, PhaseVector(static_cast<std::size_t>(n), 0.0));

  RunTrace trace;
  detail::evaluate_population(pop, fitness, amplitude, threads, trace.evaluations);
  std::vector<Candidate> pbest = pop;
  Candidate global_best = pop[detail::argmax_fitness(pop)];
  trace.rows.push_back({0, global_best.fitness, detail::mean_fitness(pop), "init"});

  for (int t = 1; t <= config.iterations; ++t) {
    for (std::size_t i = 0; i < np; ++i) {
      Rng cand_rng(derive_seed(config.seed, "pso-cand",
                               static_cast<std::uint64_t>(t) * np + i));
      for (int d = 0; d < n; ++d) {
        std::size_t dd = static_cast<std::size_t>(d);
        double r1 = cand_rng.unit();
        double r2 = cand_rng.unit();
        double v = config.inertia * velocity[i][dd] +
                   config.cognitive * r1 * wrap_phase(pbest[i].phases[dd] - pop[i].phases[dd]) +
                   config.social * r2 * wrap_phase(global_best.phases[dd] - pop[i].phases[dd]);
        v = std::clamp(v, -config.velocity_clamp, config.velocity_clamp);
        velocity[i][dd] = v;
        pop[i].phases[dd] = wrap_phase(pop[i].phases[dd] + v);
      }
      pop[i].evaluated = false;
    }
    detail::evaluate_population(pop, fitness, amplitude, threads, trace.evaluations);
    for (std::size_t i = 0; i < np; ++i)
      if (pop[i].fitness > pbest[i].fitness) pbest[i] = pop[i];
    std::size_t best_idx = detail::argmax_fitness(pbest);
    if (pbest[best_idx].fitness > global_best.fitness) global_best = pbest[best_idx];
    trace.rows.push_back({t, global_best.fitness, detail::mean_fitness(pop), "pso"});
  }
  trace.best = global_best;
  return trace;
}

inline Waveform random_phase_code(int n, double amplitude, Rng& rng) {
  if (n < 1) throw ValidationError("random_phase_code: code length must be positive");
  PhaseVector theta(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    theta[static_cast<std::size_t>(j)] = wrap_phase(rng.uniform(-kPi, kPi));
  return phases_to_waveform(theta, amplitude);
}

}  // namespace infowave
