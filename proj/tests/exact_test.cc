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


#include "fragshap/exact.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "fragshap/random.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace fragshap {
namespace {

TEST(Weights, MatchFactorialFormula) {
  for (int n = 1; n <= 6; ++n) {
    for (int m = 1; m <= 6; ++m) {
      const WeightTable w(n, m);
      for (int s = 0; s < n; ++s) {
        for (int f = 0; f < m; ++f) {
          const double expected =
              oracle::Factorial(s) * oracle::Factorial(n - s - 1) /
              oracle::Factorial(n) * oracle::Factorial(f) *
              oracle::Factorial(m - f - 1) / oracle::Factorial(m);
          EXPECT_NEAR(w(s, f), expected, 1e-15 + 1e-12 * expected);
        }
      }
    }
  }
}

TEST(Weights, RecursionHoldsUpToEight) {
  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= 8; ++m) {
      const WeightRecursionReport r = VerifyWeightRecursion(n, m);
      EXPECT_TRUE(r.pass) << n << "x" << m;
      EXPECT_LT(r.max_residual, 1e-12);
    }
  }
}

TEST(Weights, OneByOneIsTheMarginalItself) {
  // The sole block collects h({0},{0}).
  const SyntheticGame g = SyntheticGame::Random(1, 1, 3);
  EXPECT_NEAR(ExactValues(g.AsUtility(), 1, 1).values(0, 0), g.GrandValue(),
              1e-15);
}

TEST(Exact, MatchesSubsetOracle) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const int m = 1 + static_cast<int>((seed / 3) % 3);
    const SyntheticGame g = SyntheticGame::Random(n, m, seed);
    const Matrix want = oracle::Shapley2dBySubsets(g.AsUtility(), n, m);
    EXPECT_LT(MaxAbsDiff(ExactValues(g.AsUtility(), n, m).values, want), 1e-12);
    EXPECT_LT(MaxAbsDiff(WeightedSubsetValues(g.AsUtility(), n, m).values, want),
              1e-12);
    EXPECT_LT(MaxAbsDiff(PermutationAverageValues(g.AsUtility(), n, m).values,
                         want),
              1e-12);
  }
}

TEST(Exact, ProductGameSplitsEvenly) {
  // h = |S||F| gives every block exactly one.
  const SyntheticGame g = SyntheticGame::Product(3, 4);
  const Matrix v = ExactValues(g.AsUtility(), 3, 4).values;
  for (double x : v.data()) EXPECT_NEAR(x, 1.0, 1e-12);
}

TEST(Exact, AdditiveGameReturnsItsTable) {
  Matrix a(3, 2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) a(i, j) = 0.1 * i - 0.3 * j + 0.05;
  }
  const SyntheticGame g = SyntheticGame::Additive(a);
  EXPECT_LT(MaxAbsDiff(ExactValues(g.AsUtility(), 3, 2).values, a), 1e-12);
}

TEST(Exact, ConstantGameLandsOnTheLastBlockShare) {
  // h = c on every non-degenerate coalition: efficiency forces sum c and
  // symmetry spreads it evenly.
  const SyntheticGame g = SyntheticGame::Constant(2, 3, 0.6);
  const Matrix v = ExactValues(g.AsUtility(), 2, 3).values;
  for (double x : v.data()) EXPECT_NEAR(x, 0.1, 1e-12);
}

TEST(Exact, TransposeCommutes) {
  const SyntheticGame g = SyntheticGame::Random(3, 2, 8);
  const Matrix a = ExactValues(g.AsUtility(), 3, 2).values;
  const SyntheticGame t = g.Transposed();
  const Matrix b = ExactValues(t.AsUtility(), 2, 3).values;
  EXPECT_LT(MaxAbsDiff(a.Transposed(), b), 1e-12);
}

TEST(Exact, ParallelMatchesSerialBitwise) {
  const SyntheticGame g = SyntheticGame::Random(4, 4, 2);
  EXPECT_EQ(ExactValues(g.AsUtility(), 4, 4, {24, 1}).values,
            ExactValues(g.AsUtility(), 4, 4, {24, 4}).values);
}

TEST(Exact, CapRaisesLengthError) {
  const UtilityFn h = [](const Coalition&) { return 1.0; };
  EXPECT_THROW(ExactValues(h, 20, 10), EnumerationCapError);
  EXPECT_THROW(ExactValues(h, 5, 5, {6, 1}), EnumerationCapError);
}

TEST(Axioms, HoldForExact) {
  std::vector<SyntheticGame> games;
  for (uint64_t k = 0; k < 8; ++k) {
    games.push_back(SyntheticGame::Random(2 + k % 2, 2 + k % 3, k));
  }
  const GameValueFn psi = [](const SyntheticGame& g) {
    return ExactValues(g.AsUtility(), g.n(), g.m()).values;
  };
  for (const CheckResult& c : VerifyAxioms(psi, games, 1e-10, 4)) {
    EXPECT_TRUE(c.pass) << c.check << " " << c.max_residual;
  }
}

TEST(Axioms, CatchABrokenValuation) {
  // Dropping the diagonal term breaks efficiency and the dummy axiom.
  std::vector<SyntheticGame> games = {SyntheticGame::Random(2, 2, 1)};
  const GameValueFn broken = [](const SyntheticGame& g) {
    Matrix v = ExactValues(g.AsUtility(), g.n(), g.m()).values;
    v(0, 0) += 0.1;
    return v;
  };
  int failed = 0;
  for (const CheckResult& c : VerifyAxioms(broken, games, 1e-10, 4)) {
    failed += c.pass ? 0 : 1;
  }
  EXPECT_GE(failed, 2);
}

TEST(Reduce, ColumnSumsAreSampleShapley) {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const int n = 2 + static_cast<int>(seed % 2);
    const int m = 1 + static_cast<int>(seed % 3);
    const SyntheticGame g = SyntheticGame::Random(n, m, 100 + seed);
    const ValueGrid v = ExactValues(g.AsUtility(), n, m);
    const auto rows = ReduceTo1d(v, SumOver::kColumns);
    const auto want = oracle::Shapley1d(n, [&](uint64_t s) {
      return oracle::SafeValue(g.AsUtility(), s, (uint64_t{1} << m) - 1);
    });
    for (int i = 0; i < n; ++i) EXPECT_NEAR(rows[i], want[i], 1e-12);
    const auto cols = ReduceTo1d(v, SumOver::kRows);
    const auto want_cols = oracle::Shapley1d(m, [&](uint64_t f) {
      return oracle::SafeValue(g.AsUtility(), (uint64_t{1} << n) - 1, f);
    });
    for (int j = 0; j < m; ++j) EXPECT_NEAR(cols[j], want_cols[j], 1e-12);
  }
}

TEST(Strata, AverageToTheValue) {
  // The value is the mean over (s, f) of the stratum means.
  const SyntheticGame g = SyntheticGame::Random(3, 3, 21);
  const Matrix strata = StratumMeans(g.AsUtility(), 3, 3, 1, 2);
  EXPECT_NEAR(strata.Sum() / 9.0, ExactValues(g.AsUtility(), 3, 3).values(1, 2),
              1e-12);
}

}  // namespace
}  // namespace fragshap
