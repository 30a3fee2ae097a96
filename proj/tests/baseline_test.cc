/*
 * Copyright 2026 The FragShap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "fragshap/baseline.h"

#include <numeric>
#include <vector>

#include "fragshap/exact.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace fragshap {
namespace {

TEST(Flattened, RoundTrips) {
  const FlattenedGame g(3, 4);
  EXPECT_EQ(g.players(), 12);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(g.Unflatten(g.Flatten(i, j)), std::make_pair(i, j));
    }
  }
}

TEST(PermutationShapley, ExhaustiveMatchesSubsetOracle) {
  const std::vector<double> weights = {0.3, -0.1, 0.7, 0.2, 0.05};
  // A non-additive game: weighted sum plus a pairwise bonus.
  auto u = [&](const std::vector<char>& present) {
    double v = 0.0;
    for (size_t p = 0; p < present.size(); ++p) v += present[p] * weights[p];
    if (present[0] && present[3]) v += 0.4;
    return v;
  };
  PermutationShapleyConfig cfg;
  cfg.exhaustive = true;
  const auto got = PermutationShapley(5, u, cfg);
  const auto want = oracle::Shapley1d(5, [&](uint64_t s) {
    std::vector<char> present(5);
    for (int p = 0; p < 5; ++p) present[p] = (s >> p) & 1u;
    return u(present);
  });
  for (int p = 0; p < 5; ++p) EXPECT_NEAR(got[p], want[p], 1e-12);
}

TEST(PermutationShapley, SampledIsEfficientAndReproducible) {
  auto u = [](const std::vector<char>& present) {
    int count = std::accumulate(present.begin(), present.end(), 0);
    return count * count / 36.0;
  };
  PermutationShapleyConfig cfg;
  cfg.budget = 20;
  cfg.seed = 4;
  const auto a = PermutationShapley(6, u, cfg);
  EXPECT_NEAR(std::accumulate(a.begin(), a.end(), 0.0), 1.0, 1e-12);
  cfg.workers = 3;
  EXPECT_EQ(PermutationShapley(6, u, cfg), a);
}

TEST(Direct1d, MatchesRowSumsOfExact) {
  const SyntheticGame g = SyntheticGame::Random(3, 3, 6);
  PermutationShapleyConfig cfg;
  cfg.exhaustive = true;
  const auto samples = Direct1dShapley(g.AsUtility(), 3, 3, Axis::kSamples, cfg);
  const auto rows = ReduceTo1d(ExactValues(g.AsUtility(), 3, 3), SumOver::kColumns);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(samples[i], rows[i], 1e-12);
}

TEST(ImputedUtility, EndpointsAndImputation) {
  SyntheticDataOptions gen;
  gen.samples = 12;
  gen.features = 3;
  gen.informative = 3;
  const Dataset train = MakeSyntheticClassification(gen);
  gen.seed = 1;
  const Dataset test = MakeSyntheticClassification(gen);
  const BlockGrid grid = BlockGrid::Uniform(12, 3, 4, 3);
  LearnerSpec learner;
  learner.k = 3;
  const SetUtilityFn u = MakeImputedBlockUtility(train, test, grid, learner);
  EXPECT_EQ(u(std::vector<char>(12, 0)), 0.0);
  EXPECT_EQ(u(std::vector<char>(12, 1)), TrainAndScore(train, test, learner));

  // Only block (0, 1) present: rows of group 0, columns other than 1 at the
  // column means.
  std::vector<char> present(12, 0);
  present[FlattenedGame(4, 3).Flatten(0, 1)] = 1;
  Dataset expected = train.SelectRows(grid.row_members(0));
  for (int c : {0, 2}) {
    double mean = 0.0;
    for (int r = 0; r < 12; ++r) mean += train.features(r, c);
    for (int r = 0; r < expected.samples(); ++r) expected.features(r, c) = mean / 12;
  }
  EXPECT_EQ(u(present), TrainAndScore(expected, test, learner));
}

TEST(Baseline1d, EfficiencyOnData) {
  SyntheticDataOptions gen;
  gen.samples = 10;
  gen.features = 2;
  gen.informative = 2;
  const Dataset train = MakeSyntheticClassification(gen);
  gen.seed = 3;
  const Dataset test = MakeSyntheticClassification(gen);
  LearnerSpec learner;
  learner.k = 3;
  PermutationShapleyConfig cfg;
  cfg.budget = 5;
  const ValueGrid v = Baseline1dValues(train, test, BlockGrid::Cells(10, 2),
                                       learner, cfg);
  EXPECT_EQ(v.method, ValueMethod::kBaseline1d);
  EXPECT_NEAR(v.values.Sum(), TrainAndScore(train, test, learner), 1e-12);
}

}  // namespace
}  // namespace fragshap
