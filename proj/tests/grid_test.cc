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


#include "fragshap/grid.h"

#include <set>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"

namespace fragshap {
namespace {

TEST(GroupSet, BasicOperations) {
  GroupSet s = GroupSet::Of({0, 3, 5});
  EXPECT_EQ(s.Count(), 3);
  EXPECT_TRUE(s.Contains(3));
  EXPECT_FALSE(s.Contains(1));
  s.Erase(3);
  EXPECT_EQ(s.Members(), (std::vector<int>{0, 5}));
  EXPECT_EQ(s.With(1).Count(), 3);
  EXPECT_EQ(GroupSet::Full(64).Count(), 64);
  EXPECT_TRUE(GroupSet().Empty());
}

TEST(BlockGrid, CellsAndUniform) {
  const BlockGrid cells = BlockGrid::Cells(3, 2);
  EXPECT_TRUE(cells.IsCells());
  EXPECT_EQ(cells.n(), 3);
  EXPECT_EQ(cells.m(), 2);

  const BlockGrid grid = BlockGrid::Uniform(7, 5, 3, 2);
  EXPECT_EQ(grid.n(), 3);
  EXPECT_EQ(grid.m(), 2);
  std::set<int> seen;
  for (int i = 0; i < grid.n(); ++i) {
    for (int r : grid.row_members(i)) {
      EXPECT_TRUE(seen.insert(r).second);
      EXPECT_EQ(grid.row_group_of(r), i);
    }
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(grid.RawFeatures(GroupSet::Full(2)).size(), 5u);
}

TEST(BlockGrid, RejectsBadPartitions) {
  // Overlap.
  EXPECT_THROW(BlockGrid({{0, 1}, {1}}, {{0}}), std::invalid_argument);
  // Gap.
  EXPECT_THROW(BlockGrid({{0}, {2}}, {{0}}), std::invalid_argument);
  // Empty group.
  EXPECT_THROW(BlockGrid({{0}, {}}, {{0}}), std::invalid_argument);
  EXPECT_THROW(BlockGrid::Uniform(2, 2, 3, 1), std::invalid_argument);
}

TEST(BlockGrid, ParsesJson) {
  const BlockGrid grid = ParsePartitionJson(
      R"({"row_groups": [[0, 2], [1]], "col_groups": [[1], [0]]})", 3, 2);
  EXPECT_EQ(grid.n(), 2);
  EXPECT_EQ(grid.row_group_of(2), 0);
  EXPECT_EQ(grid.col_group_of(0), 1);
  EXPECT_TRUE(ParsePartitionJson(R"("cells")", 4, 3).IsCells());
  EXPECT_THROW(ParsePartitionJson("{not json", 3, 2), std::invalid_argument);
  EXPECT_THROW(ParsePartitionJson(R"({"row_groups": [[0]], "col_groups": [[0]]})",
                                  3, 2),
               std::invalid_argument);
}

TEST(Marginal, FourTermsAndRejectsMembers) {
  const SyntheticGame g = SyntheticGame::Random(2, 2, 7);
  const Coalition c{GroupSet::Of({1}), GroupSet::Of({1})};
  const double expected =
      g(Coalition{GroupSet::Of({0, 1}), GroupSet::Of({0, 1})}) + g(c) -
      g(Coalition{GroupSet::Of({0, 1}), GroupSet::Of({1})}) -
      g(Coalition{GroupSet::Of({1}), GroupSet::Of({0, 1})});
  EXPECT_DOUBLE_EQ(MarginalContribution(g.AsUtility(), 0, 0, c), expected);
  EXPECT_THROW(MarginalContribution(g.AsUtility(), 1, 0, c),
               std::invalid_argument);
}

TEST(Enumeration, VisitsEveryCoalitionOnce) {
  for (int n = 1; n <= 4; ++n) {
    for (int m = 1; m <= 3; ++m) {
      std::set<std::pair<uint64_t, uint64_t>> seen;
      ForEachCoalition(n, m, 0, m - 1, [&](const Coalition& c) {
        EXPECT_FALSE(c.samples.Contains(0));
        EXPECT_FALSE(c.features.Contains(m - 1));
        EXPECT_TRUE(
            seen.insert({c.samples.bits(), c.features.bits()}).second);
      });
      EXPECT_EQ(seen.size(), (size_t{1} << (n - 1)) * (size_t{1} << (m - 1)));
    }
  }
}

TEST(Enumeration, CapIsEnforced) {
  EXPECT_THROW(EnumerateCoalitions(20, 10, 0, 0, 24), EnumerationCapError);
  EXPECT_NO_THROW(EnumerateCoalitions(3, 3, 0, 0, 4));
}

TEST(SyntheticGame, EmptySidesAreZero) {
  const SyntheticGame g = SyntheticGame::Random(3, 2, 1);
  for (uint64_t s = 0; s < 8; ++s) {
    EXPECT_EQ(g(oracle::MakeCoalition(s, 0)), 0.0);
  }
  for (uint64_t f = 0; f < 4; ++f) {
    EXPECT_EQ(g(oracle::MakeCoalition(0, f)), 0.0);
  }
}

TEST(SyntheticGame, CombineIsPointwise) {
  const SyntheticGame a = SyntheticGame::Random(2, 3, 1);
  const SyntheticGame b = SyntheticGame::Random(2, 3, 2);
  const SyntheticGame c = SyntheticGame::Combine(2.0, a, -0.5, b);
  for (uint64_t s = 1; s < 4; ++s) {
    for (uint64_t f = 1; f < 8; ++f) {
      const Coalition k = oracle::MakeCoalition(s, f);
      EXPECT_NEAR(c(k), 2.0 * a(k) - 0.5 * b(k), 1e-15);
    }
  }
}

TEST(SyntheticGame, RelabeledMovesCoalitions) {
  const SyntheticGame g = SyntheticGame::Random(3, 2, 11);
  const std::vector<int> rp = {2, 0, 1};
  const std::vector<int> cp = {1, 0};
  const SyntheticGame r = g.Relabeled(rp, cp);
  // The relabelled game on the image of a coalition equals the original.
  for (uint64_t s = 1; s < 8; ++s) {
    for (uint64_t f = 1; f < 4; ++f) {
      uint64_t is = 0;
      uint64_t jf = 0;
      for (int x = 0; x < 3; ++x) {
        if ((s >> x) & 1u) is |= uint64_t{1} << rp[x];
      }
      for (int y = 0; y < 2; ++y) {
        if ((f >> y) & 1u) jf |= uint64_t{1} << cp[y];
      }
      EXPECT_EQ(r(oracle::MakeCoalition(is, jf)),
                g(oracle::MakeCoalition(s, f)));
    }
  }
}

TEST(SyntheticGame, PlantedDummyHasConstantMarginal) {
  const SyntheticGame g =
      SyntheticGame::Random(3, 3, 5).WithPlantedDummy(1, 2, 0.25);
  ForEachCoalition(3, 3, 1, 2, [&](const Coalition& c) {
    EXPECT_NEAR(MarginalContribution(g.AsUtility(), 1, 2, c), 0.25, 1e-12);
  });
}

TEST(ValueMethod, Names) {
  EXPECT_EQ(ToString(ValueMethod::kExact), "exact");
  EXPECT_EQ(ToString(ValueMethod::kMonteCarlo), "mc");
  EXPECT_EQ(ToString(ValueMethod::kKnn), "knn");
  EXPECT_EQ(ToString(ValueMethod::kBaseline1d), "baseline1d");
}

}  // namespace
}  // namespace fragshap
