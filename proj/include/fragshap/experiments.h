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

#ifndef FRAGSHAP_EXPERIMENTS_H_
#define FRAGSHAP_EXPERIMENTS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fragshap/dataset.h"
#include "fragshap/grid.h"
#include "fragshap/knn_shapley.h"
#include "fragshap/learners.h"

namespace fragshap {

struct CellRef {
  int sample = 0;
  int feature = 0;

  bool operator==(const CellRef&) const = default;
  auto operator<=>(const CellRef&) const = default;
};

enum class RemovalOrder { kAscending, kDescending, kRandom };

std::string_view ToString(RemovalOrder order);
RemovalOrder ParseRemovalOrder(std::string_view name);

// Every raw cell ordered by the value of its block. Ascending and descending
// orders break ties by (sample, feature); kRandom ignores the values.
std::vector<CellRef> RankCells(const ValueGrid& values, const BlockGrid& grid,
                               RemovalOrder order, uint64_t seed);

struct RemovalCurve {
  RemovalOrder order = RemovalOrder::kAscending;
  int batch = 1;
  // Cumulative removed-cell count at each point, starting at 0.
  std::vector<int> removed;
  std::vector<double> accuracies;
};

// Removes `ranked` cells `batch` at a time. A removed cell is overwritten by
// the mean of the cells of its column not removed so far, or by the original
// column mean once the whole column is gone. After each batch the learner is
// retrained on the modified matrix and scored on `test`.
RemovalCurve RemoveCells(const Dataset& train, const Dataset& test,
                         const std::vector<CellRef>& ranked, int batch,
                         RemovalOrder order, const LearnerSpec& learner);

// Accuracy of the curve once at least `fraction` of `total_cells` is gone.
double AccuracyAfterFraction(const RemovalCurve& curve, int total_cells,
                             double fraction);

// One-dimensional Gaussian kernel density estimate.
class GaussianKde {
 public:
  // Bandwidth defaults to Scott's rule, sd * count^(-1/5).
  explicit GaussianKde(std::vector<double> points, double bandwidth = 0.0);

  double Density(double x) const;
  double bandwidth() const { return bandwidth_; }
  double sample_sd() const { return sd_; }

 private:
  std::vector<double> points_;
  double bandwidth_;
  double sd_;
};

struct OutlierParams {
  double budget_fraction = 0.02;
  // Overrides budget_fraction when non-negative.
  int cell_count = -1;
  double density_quantile = 0.05;
  uint64_t seed = 0;
  int max_tries = 100000;
};

struct OutlierPlacement {
  int sample = 0;
  int feature = 0;
  double injected = 0.0;
  double original = 0.0;
};

struct OutlierPlan {
  double budget_fraction = 0.0;
  double density_quantile = 0.05;
  std::vector<OutlierPlacement> placements;
  uint64_t seed = 0;
  // Human-readable notes about columns that could not host outliers.
  std::vector<std::string> warnings;
};

struct InjectionResult {
  Dataset data;
  OutlierPlan plan;
};

// Density threshold of a column: the `quantile` quantile of the KDE
// evaluated at the column's own points.
double DensityThreshold(const GaussianKde& kde, const std::vector<double>& points,
                        double quantile);

// Overwrites randomly chosen cells with values drawn from the low-density
// region of their column: a KDE is fit on the clean column and candidates are
// drawn uniformly from [min - 3 sd, max + 3 sd] until one falls below the
// density threshold. Constant columns are skipped with a warning.
InjectionResult InjectOutliers(const Dataset& train, const OutlierParams& params);

// Typo-style corruption: swaps up to `count` cells of `feature` whose value
// equals one side of a pair with the other side (e.g. 17 <-> 71).
InjectionResult SwapDigits(const Dataset& train, int feature,
                           const std::vector<std::pair<double, double>>& pairs,
                           int count, uint64_t seed);

struct DetectionCurve {
  std::vector<int> inspected;
  std::vector<double> detected_fraction;
};

// Inspects blocks in ascending value order (ties by block index) and records
// the fraction of blocks holding a planted cell found so far. With nothing
// planted the curve is 1 everywhere.
DetectionCurve MakeDetectionCurve(const ValueGrid& values, const BlockGrid& grid,
                                  const OutlierPlan& plan);

// Detected fraction after inspecting ceil(fraction * total) blocks.
double RecallAt(const DetectionCurve& curve, double fraction);

struct BlockPerformanceRow {
  int i = 0;
  int j = 0;
  double value = 0.0;
  double accuracy = 0.0;
};

struct BlockPerformanceTable {
  std::vector<BlockPerformanceRow> rows;
  double spearman = 0.0;
};

// Spearman rank correlation with average ranks for ties. Returns 0 when either
// side is constant.
double SpearmanCorrelation(const std::vector<double>& a,
                           const std::vector<double>& b);

// Pairs each block's value with the test accuracy of the learner trained on
// that block alone.
BlockPerformanceTable BlockValueVsPerformance(const Dataset& train,
                                              const Dataset& test,
                                              const BlockGrid& grid,
                                              const ValueGrid& values,
                                              const LearnerSpec& learner);

struct AblationConfig {
  std::vector<double> budgets = {0.01, 0.02, 0.05, 0.10, 0.15};
  std::vector<uint64_t> seeds = {0};
  double density_quantile = 0.05;
  KnnConfig knn;
};

struct AblationEntry {
  double budget = 0.0;
  uint64_t seed = 0;
  DetectionCurve curve;
};

// For every budget and seed: inject outliers into a cells-partitioned copy
// of `train`, value it with the KNN engine, and record the detection curve.
std::vector<AblationEntry> AblationOutlierBudget(const Dataset& train,
                                                 const Dataset& test,
                                                 const AblationConfig& config);

}  // namespace fragshap

#endif  // FRAGSHAP_EXPERIMENTS_H_
