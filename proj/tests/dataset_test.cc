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


// Tests for data loading, the learners and the utility oracle.

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "fragshap/dataset.h"
#include "fragshap/learners.h"
#include "fragshap/utility.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace fragshap {
namespace {

TEST(Csv, ReadsQuotedFieldsAndLabels) {
  const CsvTable t = ReadCsvTable(
      "a,\"b,c\",label\n1,2.5,yes\n3,-1,no\n", CsvOptions{"label", false});
  ASSERT_EQ(t.feature_names.size(), 2u);
  EXPECT_EQ(t.feature_names[1], "b,c");
  EXPECT_EQ(t.features(1, 1), -1.0);
  EXPECT_EQ(t.labels[0], "yes");
}

TEST(Csv, RejectsNonNumericUnlessImputing) {
  const char* text = "a,b,label\n1,x,0\n3,5,1\n";
  EXPECT_THROW(ReadCsvTable(text, CsvOptions{"label", false}),
               std::invalid_argument);
  const CsvTable t = ReadCsvTable(text, CsvOptions{"label", true});
  EXPECT_EQ(t.features(0, 1), 5.0);
}

TEST(Csv, MissingLabelColumnIsAnError) {
  EXPECT_THROW(ReadCsvTable("a,b\n1,2\n", CsvOptions{"label", false}),
               std::invalid_argument);
}

TEST(Labels, SharedEncodingAcrossFiles) {
  const CsvTable a = ReadCsvTable("x,label\n1,10\n2,2\n", {"label", false});
  const CsvTable b = ReadCsvTable("x,label\n1,2\n", {"label", false});
  const auto encoded = EncodeLabels({a, b});
  // Numeric labels sort numerically: 2 -> 0, 10 -> 1.
  EXPECT_EQ(encoded[0].labels, (std::vector<int>{1, 0}));
  EXPECT_EQ(encoded[1].labels, (std::vector<int>{0}));
  EXPECT_EQ(encoded[0].class_count, 2);
}

TEST(Split, PartitionsRowsDeterministically) {
  SyntheticDataOptions gen;
  gen.samples = 50;
  const Dataset d = MakeSyntheticClassification(gen);
  const auto [train, test] = TrainTestSplit(d, 0.2, 3);
  EXPECT_EQ(train.samples() + test.samples(), 50);
  EXPECT_EQ(test.samples(), 10);
  const auto [train2, test2] = TrainTestSplit(d, 0.2, 3);
  EXPECT_EQ(train.features, train2.features);
  EXPECT_THROW(TrainTestSplit(d, 0.0, 3), std::invalid_argument);
}

TEST(Standardizer, ZeroMeanUnitVariance) {
  Matrix x(4, 2);
  for (int r = 0; r < 4; ++r) {
    x(r, 0) = r;
    x(r, 1) = 7.0;
  }
  const Matrix z = Standardizer::Fit(x).Apply(x);
  double mean = 0.0;
  for (int r = 0; r < 4; ++r) mean += z(r, 0);
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_EQ(z(2, 1), 0.0);
}

TEST(Synthetic, SeededAndBalanced) {
  SyntheticDataOptions gen;
  gen.seed = 9;
  const Dataset a = MakeSyntheticClassification(gen);
  const Dataset b = MakeSyntheticClassification(gen);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(std::accumulate(a.labels.begin(), a.labels.end(), 0), 100);
  gen.seed = 10;
  EXPECT_NE(MakeSyntheticClassification(gen).features, a.features);
}

TEST(Learners, ParseNames) {
  EXPECT_EQ(ParseLearnerKind("knn"), LearnerKind::kKnnClassifier);
  EXPECT_EQ(ParseLearnerKind("logreg"), LearnerKind::kLogisticRegression);
  EXPECT_EQ(ParseLearnerKind("majority_class"), LearnerKind::kMajorityClass);
  EXPECT_THROW(ParseLearnerKind("forest"), std::invalid_argument);
}

TEST(Learners, OneNearestNeighbourByHand) {
  Matrix train(3, 1);
  train(0, 0) = 0.0;
  train(1, 0) = 1.0;
  train(2, 0) = 10.0;
  const std::vector<int> y = {0, 0, 1};
  Matrix test(2, 1);
  test(0, 0) = 0.4;
  test(1, 0) = 8.0;
  LearnerSpec spec;
  spec.k = 1;
  spec.standardize = false;
  EXPECT_EQ(FitPredict(train, y, test, 2, spec), (std::vector<int>{0, 1}));
}

TEST(Learners, SeparableDataIsLearned) {
  SyntheticDataOptions gen;
  gen.separation = 6.0;
  const Dataset train = MakeSyntheticClassification(gen);
  gen.seed = 1;
  const Dataset test = MakeSyntheticClassification(gen);
  for (const char* name : {"knn", "logreg"}) {
    LearnerSpec spec;
    spec.kind = ParseLearnerKind(name);
    EXPECT_GT(TrainAndScore(train, test, spec), 0.95) << name;
  }
  LearnerSpec majority;
  majority.kind = LearnerKind::kMajorityClass;
  EXPECT_NEAR(TrainAndScore(train, test, majority), 0.5, 1e-12);
}

TEST(Learners, EmptyTrainingScoresZero) {
  Matrix empty(0, 2);
  Matrix test(1, 2);
  EXPECT_EQ(TrainAndScore(empty, {}, test, std::vector<int>{0}, 2, {}), 0.0);
}

TEST(Memo, CountsColdAndWarmCalls) {
  int calls = 0;
  MemoizedUtility memo([&](const Coalition& c) {
    ++calls;
    return static_cast<double>(c.samples.Count());
  });
  const Coalition c{GroupSet::Of({0, 1}), GroupSet::Of({0})};
  EXPECT_EQ(memo(c), 2.0);
  EXPECT_EQ(memo(c), 2.0);
  EXPECT_EQ(memo(Coalition{GroupSet(), GroupSet::Of({0})}), 0.0);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(memo.cache_stats(), (CacheStats{1, 1}));
}

TEST(Oracle, MatchesDirectTrainingOnSubmatrix) {
  SyntheticDataOptions gen;
  gen.samples = 12;
  gen.features = 4;
  gen.informative = 4;
  const Dataset train = MakeSyntheticClassification(gen);
  gen.seed = 5;
  gen.samples = 20;
  const Dataset test = MakeSyntheticClassification(gen);
  const BlockGrid grid = BlockGrid::Uniform(12, 4, 3, 2);
  LearnerSpec spec;
  spec.k = 3;
  const UtilityOracle oracle(train, test, grid, spec);
  const Coalition c{GroupSet::Of({0, 2}), GroupSet::Of({1})};
  const auto rows = grid.RawSamples(c.samples);
  const auto cols = grid.RawFeatures(c.features);
  std::vector<int> all_rows(20);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  const double direct = TrainAndScore(train.Subset(rows, cols),
                                      test.Subset(all_rows, cols), spec);
  EXPECT_EQ(oracle(c), direct);
  EXPECT_EQ(oracle(Coalition{GroupSet(), GroupSet::Of({1})}), 0.0);
  EXPECT_THROW(oracle.Compute(Coalition{GroupSet::Of({5}), GroupSet::Of({0})}),
               std::invalid_argument);
}

TEST(Oracle, RejectsMismatchedData) {
  SyntheticDataOptions gen;
  gen.samples = 10;
  gen.features = 3;
  gen.informative = 3;
  const Dataset train = MakeSyntheticClassification(gen);
  gen.features = 4;
  gen.informative = 4;
  const Dataset test = MakeSyntheticClassification(gen);
  EXPECT_THROW(UtilityOracle(train, test, BlockGrid::Cells(10, 3), {}),
               std::invalid_argument);
}

}  // namespace
}  // namespace fragshap
