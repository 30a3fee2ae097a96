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

#ifndef FRAGSHAP_KNN_SHAPLEY_H_
#define FRAGSHAP_KNN_SHAPLEY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fragshap/dataset.h"
#include "fragshap/grid.h"
#include "fragshap/monte_carlo.h"

namespace fragshap {

struct KnnConfig {
  int k = 5;
  // Budget of sampled feature-group permutations.
  int64_t feature_permutations = 500;
  // Relative step tolerance and window; epsilon 0 always spends the budget.
  double epsilon = 1e-3;
  int window = 20;
  uint64_t seed = 0;
  int workers = 1;
  // Z-score every column with training statistics before measuring squared
  // Euclidean distance.
  bool standardize = true;
  // Average over all m! feature-group orderings; ignores the budget.
  bool exhaustive = false;
  ProgressFn progress;

  void Validate() const;
};

// Shapley values of the training samples under the K-nearest-neighbor
// likelihood utility U(S) = (1/K) * sum over the min(K, |S|) nearest members
// of S of [label matches], averaged over test points. `distances` holds one
// squared distance per training sample to a single test point.
void AccumulateKnnShapley(std::span<const double> distances,
                          std::span<const int> train_labels, int test_label,
                          int k, double weight, std::span<double> out);

// Sample values restricted to the given raw feature columns, averaged over
// the test set. An empty column list yields all zeros.
std::vector<double> KnnSampleValues(const Dataset& train, const Dataset& test,
                                    const std::vector<int>& feature_columns,
                                    const KnnConfig& config);

struct KnnRunStats {
  // Number of full sample-value sweeps (one per feature prefix).
  int64_t sweeps = 0;
};

// Block values from feature-group permutations: walking each ordering, the
// block (i, j) gains the change in its samples' values when group j joins the
// preceding groups. Row groups with several samples add their members'
// changes.
ValueGrid Knn2dValues(const Dataset& train, const Dataset& test,
                      const BlockGrid& grid, const KnnConfig& config,
                      KnnRunStats* stats = nullptr);

}  // namespace fragshap

#endif  // FRAGSHAP_KNN_SHAPLEY_H_
