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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "romaxl/optimizer.hpp"

using namespace romaxl;

namespace {

DEConfig smoke_config(std::uint64_t seed = 7) {
  DEConfig cfg;
  cfg.population = 20;
  cfg.dims = 1;
  cfg.generations = 60;
  cfg.f0 = 0.5;
  cfg.cr = 0.2;
  cfg.seed = seed;
  cfg.bounds = {{0.0, 1.0}};
  return cfg;
}

Fitness smoke_objective(const std::vector<double>& x) {
  return {1, -(x[0] - 0.3) * (x[0] - 0.3)};
}

}  // namespace

TEST_CASE("mutation_scale - schedule endpoints and a mid-run value")
{
  // g = 1: lamb = exp(0) = 1, so F = 2 f0
  CHECK(mutation_scale(1, 100, 0.5) == 1.0);
  CHECK(mutation_scale(1, 7, 0.25) == 0.5);
  // final generation of a long run: lamb = exp(1 - gen) ~ 0, F ~ f0
  CHECK(mutation_scale(100, 100, 0.5) == Catch::Approx(0.5).epsilon(1e-12));
  // mid-run: 0.5 * 2^exp(1 - 100/51)
  CHECK(mutation_scale(50, 100, 0.5) == Catch::Approx(0.6518413125583441).epsilon(1e-12));

  CHECK_THROWS_AS(mutation_scale(0, 100, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mutation_scale(101, 100, 0.5), std::invalid_argument);
}

TEST_CASE("de_optimize - converges on the quadratic smoke objective")
{
  const DEResult result = de_optimize(smoke_objective, smoke_config());
  CHECK(std::abs(result.best[0] - 0.3) < 1e-2);

  SECTION("binomial crossover converges as well")
  {
    DEConfig cfg = smoke_config();
    cfg.crossover = DEConfig::Crossover::binomial;
    cfg.cr = 0.9;
    const DEResult alt = de_optimize(smoke_objective, cfg);
    CHECK(std::abs(alt.best[0] - 0.3) < 1e-2);
  }
}

TEST_CASE("de_optimize - spends exactly (gen + 1) * num evaluations")
{
  int calls = 0;
  const auto counting = [&](const std::vector<double>& x) {
    ++calls;
    return smoke_objective(x);
  };
  const DEConfig cfg = smoke_config();
  de_optimize(counting, cfg);
  CHECK(calls == (cfg.generations + 1) * cfg.population);
}

TEST_CASE("de_optimize - identical seeds give identical traces")
{
  const DEResult a = de_optimize(smoke_objective, smoke_config(123));
  const DEResult b = de_optimize(smoke_objective, smoke_config(123));
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t g = 0; g < a.trace.size(); ++g) {
    CHECK(a.trace[g].x == b.trace[g].x);
    CHECK(a.trace[g].fitness == b.trace[g].fitness);
  }
}

TEST_CASE("de_optimize - every evaluated point respects the bounds")
{
  DEConfig cfg;
  cfg.population = 12;
  cfg.dims = 3;
  cfg.generations = 25;
  cfg.f0 = 2.0;  // aggressive mutation to force clamping
  cfg.cr = 0.2;
  cfg.seed = 31;
  cfg.bounds = {{-1.0, 2.0}, {0.0, 0.5}, {-3.0, -1.0}};
  bool in_bounds = true;
  const auto checking = [&](const std::vector<double>& x) {
    for (int d = 0; d < cfg.dims; ++d)
      if (x[d] < cfg.bounds[d][0] || x[d] > cfg.bounds[d][1]) in_bounds = false;
    return Fitness{0, -(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])};
  };
  de_optimize(checking, cfg);
  CHECK(in_bounds);
}

TEST_CASE("de_optimize - trace is lexicographically nondecreasing across seeds")
{
  // integer plateaus plus a continuous tie-break exercise both fitness keys
  const auto stepped = [](const std::vector<double>& x) {
    return Fitness{static_cast<int>(std::floor(2.0 * (x[0] + x[1]))),
                   -(x[0] - 0.7) * (x[0] - 0.7)};
  };
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    DEConfig cfg;
    cfg.population = 10;
    cfg.dims = 2;
    cfg.generations = 30;
    cfg.seed = seed;
    cfg.bounds = {{0.0, 1.0}, {0.0, 1.0}};
    const DEResult result = de_optimize(stepped, cfg);
    REQUIRE(result.trace.size() == 31);
    for (std::size_t g = 1; g < result.trace.size(); ++g)
      CHECK(result.trace[g].fitness >= result.trace[g - 1].fitness);
    CHECK(result.fitness == result.trace.back().fitness);
  }
}

TEST_CASE("de_optimize - configuration validation")
{
  DEConfig cfg = smoke_config();
  cfg.population = 3;
  CHECK_THROWS_AS(de_optimize(smoke_objective, cfg), std::invalid_argument);

  cfg = smoke_config();
  cfg.bounds = {};
  CHECK_THROWS_AS(de_optimize(smoke_objective, cfg), std::invalid_argument);

  cfg = smoke_config();
  cfg.cr = 1.5;
  CHECK_THROWS_AS(de_optimize(smoke_objective, cfg), std::invalid_argument);

  cfg = smoke_config();
  cfg.bounds = {{1.0, 0.0}};
  CHECK_THROWS_AS(de_optimize(smoke_objective, cfg), std::invalid_argument);
}

TEST_CASE("rank_objective - rank limits across spacings")
{
  Scenario s;
  s.carrier_hz = kSpeedOfLight / 0.015;
  s.rx_center = {30.0, 4.0, 10.0};
  const PowerPolicy policy = PowerPolicy::from_snr_db(15.0);

  SECTION("full rank at the parallel-panel optimal spacing (4x4)")
  {
    s.tx = {4, 4, 0.1, 0.1};
    s.rx = {4, 4, 0.1, 0.1};
    const double d_star = optimal_spacing(s);
    s.tx.spacing_h = s.tx.spacing_v = d_star;
    s.rx.spacing_h = s.rx.spacing_v = d_star;
    const Fitness fit = rank_objective({0.0, 0.0, 0.0, 0.0}, s, policy);
    CHECK(fit.rank == 16);
    CHECK(fit.capacity > 0.0);
  }

  SECTION("singleton panels always have rank 1")
  {
    s.tx = {1, 1, 0.1, 0.1};
    s.rx = {1, 1, 0.1, 0.1};
    CHECK(rank_objective({0.7, 0.3, -0.4, 1.0}, s, policy).rank == 1);
  }

  SECTION("near-co-located elements collapse to rank 1 regardless of angles")
  {
    s.tx = {3, 3, 1e-6, 1e-6};
    s.rx = {3, 3, 1e-6, 1e-6};
    CHECK(rank_objective({0.0, 0.0, 0.0, 0.0}, s, policy).rank == 1);
    CHECK(rank_objective({0.9, 0.8, -0.7, 0.6}, s, policy).rank == 1);
  }
}
