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

#ifndef FRAGSHAP_MONTE_CARLO_H_
#define FRAGSHAP_MONTE_CARLO_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "fragshap/grid.h"
#include "fragshap/matrix.h"

namespace fragshap {

// A row ordering and a column ordering, reproducible from
// (master_seed, seed_index).
struct PermutationPair {
  std::vector<int> rows;
  std::vector<int> cols;
  int64_t seed_index = 0;

  static PermutationPair Sample(int n, int m, uint64_t master_seed,
                                int64_t seed_index);
  // The index-th pair in lexicographic order (rows major), for exhaustive
  // runs. Requires index < n! * m!.
  static PermutationPair Lexicographic(int n, int m, int64_t index);
};

// Running mean of per-permutation marginal matrices.
class RunningEstimate {
 public:
  RunningEstimate(int rows, int cols, int history_capacity = 64);

  // Folds in one sample with mean <- t/(t+1) mean + 1/(t+1) sample and
  // returns the L-infinity size of the update.
  double Add(const Matrix& sample);

  // Count-weighted combination with an estimate over disjoint samples.
  void Merge(const RunningEstimate& other);

  const Matrix& mean() const { return mean_; }
  int64_t count() const { return count_; }
  // Most recent step sizes, oldest first.
  const std::deque<double>& history() const { return history_; }

 private:
  Matrix mean_;
  int64_t count_ = 0;
  size_t capacity_;
  std::deque<double> history_;
};

// True iff the last `window` step sizes, divided by the L-infinity norm of
// the current mean (or by 1 when that is below 1e-12), are all below
// `epsilon`.
bool ConvergenceCheck(const RunningEstimate& estimate, double epsilon,
                      int window);

using ProgressFn = std::function<void(int64_t permutations, double step)>;

struct StopRule {
  int64_t budget = 500;
  double epsilon = 1e-3;
  int window = 20;
};

struct EstimateOutcome {
  Matrix mean;
  int64_t permutations = 0;
  bool converged = false;
};

// Drives a permutation estimator: sample(k) returns the marginal matrix of
// permutation k. Samples are computed in fixed-size batches on `workers`
// threads but folded in index order, so the outcome does not depend on the
// worker count.
EstimateOutcome RunPermutationEstimate(
    int rows, int cols, const StopRule& rule, int workers,
    const std::function<Matrix(int64_t)>& sample,
    const ProgressFn& progress = nullptr);

// Block marginals of one permutation pair from its prefix utilities
// u(a, b) = h(first a+1 rows, first b+1 cols). Only the previous and current
// rows of u are held; prefixes with no rows or no columns count as 0. Issues
// exactly n * m utility calls.
Matrix PermutationMarginals(const UtilityFn& h, const PermutationPair& pair);

struct McConfig {
  StopRule stop;
  uint64_t seed = 0;
  int workers = 1;
  // Average over all n! * m! pairs instead of sampling; ignores `stop`.
  bool exhaustive = false;
  ProgressFn progress;
};

ValueGrid McValues(const UtilityFn& h, int n, int m, const McConfig& config);

}  // namespace fragshap

#endif  // FRAGSHAP_MONTE_CARLO_H_
