// SPDX-License-Identifier: Apache-2.0
//
// romaxl — rotatable planar-array XL-MIMO LoS channel analysis for
// high-speed rail links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Adaptive differential evolution with a generation-scheduled mutation factor,
// maximizing a lexicographic (rank, capacity) fitness over panel rotation
// angles.

#ifndef ROMAXL_OPTIMIZER_HPP
#define ROMAXL_OPTIMIZER_HPP

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "romaxl/correlation.hpp"

namespace romaxl {

/// Lexicographic objective value: rank first, capacity as the tie-break
/// within a rank plateau.
struct Fitness {
  int rank = 0;
  double capacity = 0.0;

  friend auto operator<=>(const Fitness&, const Fitness&) = default;
};

struct DEConfig {
  enum class Crossover {
    /// One draw per individual; the whole mutant vector replaces the trial
    /// when the draw exceeds cr (so cr is the probability of keeping the
    /// parent vector).
    whole_vector,
    /// Standard per-dimension binomial crossover: each dimension takes the
    /// mutant when its draw falls below cr, with one dimension forced.
    binomial,
  };

  int population = 40;
  int dims = 4;
  int generations = 100;
  double f0 = 0.5;  ///< base mutation factor
  double cr = 0.2;  ///< crossover operator, in [0, 1]
  std::uint64_t seed = 1;
  std::vector<std::array<double, 2>> bounds;  ///< per-dimension [lo, hi]
  Crossover crossover = Crossover::whole_vector;

  void validate() const {
    if (population < 4)
      throw std::invalid_argument("DEConfig: population must be >= 4 (mutation needs three distinct peers)");
    if (dims < 1) throw std::invalid_argument("DEConfig: dims must be >= 1");
    if (generations < 1) throw std::invalid_argument("DEConfig: generations must be >= 1");
    if (!(f0 > 0.0)) throw std::invalid_argument("DEConfig: f0 must be positive");
    if (!(cr >= 0.0 && cr <= 1.0)) throw std::invalid_argument("DEConfig: cr must be in [0, 1]");
    if (bounds.size() != static_cast<std::size_t>(dims))
      throw std::invalid_argument("DEConfig: bounds must have one [lo, hi] pair per dimension");
    for (const auto& b : bounds)
      if (!(b[0] <= b[1])) throw std::invalid_argument("DEConfig: bound lo must not exceed hi");
  }
};

struct DETraceEntry {
  std::vector<double> x;
  Fitness fitness;
};

struct DEResult {
  std::vector<double> best;
  Fitness fitness;
  std::vector<DETraceEntry> trace;  ///< incumbent best after init and after each generation
};

/// Generation-scheduled mutation factor: f0 * 2^exp(1 - gen/(gen + 1 - g)).
/// Starts at 2*f0 (g = 1) and decays toward f0 by the final generation.
inline double mutation_scale(int g, int gen, double f0) {
  if (g < 1 || g > gen) throw std::invalid_argument("mutation_scale: g must be in [1, gen]");
  const double lamb = std::exp(1.0 - static_cast<double>(gen) / (gen + 1 - g));
  return f0 * std::pow(2.0, lamb);
}

/// Rank of the gain matrix for the given rotation angles (a1, b1, a2, b2),
/// with the capacity of the gain matrix as the tie-break. The gain matrix is
/// the Gram of the spatial-multiplexing factor, so its capacity is referenced
/// to the center-distance path gain.
inline Fitness rank_objective(const std::array<double, 4>& angles, const Scenario& scenario,
                              const PowerPolicy& policy, double rank_tol = kDefaultRankTol) {
  Scenario posed = scenario;
  posed.tx_pose = {angles[0], angles[1]};
  posed.rx_pose = {angles[2], angles[3]};
  const GainMatrix gain = gain_matrix(factorized_channel(posed));
  return {numerical_rank(gain, rank_tol), capacity(gain, policy, rank_tol)};
}

/// Differential evolution, maximizing the objective:
///   - seeded uniform initialization within bounds;
///   - per generation, mutants x_r1 + F * (x_r2 - x_r3) with distinct peers,
///     clamped to bounds, F from mutation_scale;
///   - crossover per DEConfig::Crossover;
///   - greedy one-to-one selection (trial kept when not worse than the
///     parent, so plateaus can still drift).
/// Exactly population evaluations at initialization plus population per
/// generation. The RNG stream is consumed in a fixed order, so a given
/// (config, objective) pair is fully reproducible.
template <typename Objective>
DEResult de_optimize(Objective&& objective, const DEConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, config.population - 1);

  const auto clamp_to_bounds = [&](std::vector<double>& x) {
    for (int d = 0; d < config.dims; ++d) {
      if (x[d] < config.bounds[d][0]) x[d] = config.bounds[d][0];
      if (x[d] > config.bounds[d][1]) x[d] = config.bounds[d][1];
    }
  };

  std::vector<std::vector<double>> population(config.population,
                                              std::vector<double>(config.dims));
  std::vector<Fitness> fitness(config.population);
  for (auto& x : population)
    for (int d = 0; d < config.dims; ++d)
      x[d] = config.bounds[d][0] + (config.bounds[d][1] - config.bounds[d][0]) * unit(rng);
  for (int i = 0; i < config.population; ++i) fitness[i] = objective(population[i]);

  const auto incumbent = [&]() {
    int best = 0;
    for (int i = 1; i < config.population; ++i)
      if (fitness[i] > fitness[best]) best = i;
    return DETraceEntry{population[best], fitness[best]};
  };

  DEResult result;
  result.trace.reserve(config.generations + 1);
  result.trace.push_back(incumbent());

  std::vector<std::vector<double>> mutants(config.population,
                                           std::vector<double>(config.dims));
  for (int g = 1; g <= config.generations; ++g) {
    const double scale = mutation_scale(g, config.generations, config.f0);
    for (int i = 0; i < config.population; ++i) {
      int r1, r2, r3;
      do r1 = pick(rng); while (r1 == i);
      do r2 = pick(rng); while (r2 == i || r2 == r1);
      do r3 = pick(rng); while (r3 == i || r3 == r1 || r3 == r2);
      for (int d = 0; d < config.dims; ++d)
        mutants[i][d] = population[r1][d] + scale * (population[r2][d] - population[r3][d]);
      clamp_to_bounds(mutants[i]);
    }
    for (int i = 0; i < config.population; ++i) {
      std::vector<double> trial = population[i];
      if (config.crossover == DEConfig::Crossover::whole_vector) {
        if (unit(rng) > config.cr) trial = mutants[i];
      } else {
        std::uniform_int_distribution<int> pick_dim(0, config.dims - 1);
        const int forced = pick_dim(rng);
        for (int d = 0; d < config.dims; ++d)
          if (unit(rng) < config.cr || d == forced) trial[d] = mutants[i][d];
      }
      const Fitness trial_fitness = objective(trial);
      if (trial_fitness >= fitness[i]) {
        population[i] = std::move(trial);
        fitness[i] = trial_fitness;
      }
    }
    result.trace.push_back(incumbent());
  }

  result.best = result.trace.back().x;
  result.fitness = result.trace.back().fitness;
  return result;
}

}  // namespace romaxl

#endif  // ROMAXL_OPTIMIZER_HPP
