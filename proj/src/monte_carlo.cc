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

#include "fragshap/monte_carlo.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fragshap/parallel.h"
#include "fragshap/random.h"

namespace fragshap {

namespace {

// Permutations computed per parallel round. Fixed so that results never
// depend on the worker count.
constexpr int64_t kBatch = 16;

int64_t Factorial(int k) {
  int64_t out = 1;
  for (int v = 2; v <= k; ++v) out *= v;
  return out;
}

// The index-th permutation of {0..size-1} in lexicographic order.
std::vector<int> NthPermutation(int size, int64_t index) {
  std::vector<int> pool(static_cast<size_t>(size));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  for (int k = size; k >= 1; --k) {
    const int64_t block = Factorial(k - 1);
    const auto pick = static_cast<size_t>(index / block);
    index %= block;
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

}  // namespace

PermutationPair PermutationPair::Sample(int n, int m, uint64_t master_seed,
                                        int64_t seed_index) {
  Rng rng = MakeStream(master_seed, static_cast<uint64_t>(seed_index));
  PermutationPair pair;
  pair.rows = RandomPermutation(n, rng);
  pair.cols = RandomPermutation(m, rng);
  pair.seed_index = seed_index;
  return pair;
}

PermutationPair PermutationPair::Lexicographic(int n, int m, int64_t index) {
  const int64_t col_count = Factorial(m);
  PermutationPair pair;
  pair.rows = NthPermutation(n, index / col_count);
  pair.cols = NthPermutation(m, index % col_count);
  pair.seed_index = index;
  return pair;
}

RunningEstimate::RunningEstimate(int rows, int cols, int history_capacity)
    : mean_(rows, cols),
      capacity_(static_cast<size_t>(std::max(history_capacity, 1))) {}

double RunningEstimate::Add(const Matrix& sample) {
  if (sample.rows() != mean_.rows() || sample.cols() != mean_.cols()) {
    throw std::invalid_argument("RunningEstimate: sample shape mismatch");
  }
  const double t = static_cast<double>(count_);
  double step = 0.0;
  auto& mean = mean_.data();
  const auto& next = sample.data();
  for (size_t k = 0; k < mean.size(); ++k) {
    const double updated = t / (t + 1.0) * mean[k] + next[k] / (t + 1.0);
    step = std::max(step, std::abs(updated - mean[k]));
    mean[k] = updated;
  }
  ++count_;
  history_.push_back(step);
  if (history_.size() > capacity_) history_.pop_front();
  return step;
}

void RunningEstimate::Merge(const RunningEstimate& other) {
  if (other.mean_.rows() != mean_.rows() || other.mean_.cols() != mean_.cols()) {
    throw std::invalid_argument("RunningEstimate: merge shape mismatch");
  }
  const int64_t total = count_ + other.count_;
  if (total == 0) return;
  const double a = static_cast<double>(count_) / static_cast<double>(total);
  const double b = static_cast<double>(other.count_) / static_cast<double>(total);
  for (size_t k = 0; k < mean_.size(); ++k) {
    mean_.data()[k] = a * mean_.data()[k] + b * other.mean_.data()[k];
  }
  count_ = total;
  for (double step : other.history_) {
    history_.push_back(step);
    if (history_.size() > capacity_) history_.pop_front();
  }
}

bool ConvergenceCheck(const RunningEstimate& estimate, double epsilon,
                      int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  const auto& history = estimate.history();
  if (static_cast<int>(history.size()) < window) return false;
  double scale = estimate.mean().MaxAbs();
  if (scale < 1e-12) scale = 1.0;
  return std::all_of(history.end() - window, history.end(),
                     [&](double step) { return step / scale < epsilon; });
}

EstimateOutcome RunPermutationEstimate(
    int rows, int cols, const StopRule& rule, int workers,
    const std::function<Matrix(int64_t)>& sample, const ProgressFn& progress) {
  if (rule.budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (rule.window < 1) throw std::invalid_argument("window must be >= 1");
  RunningEstimate estimate(rows, cols, std::max(rule.window, 1));
  EstimateOutcome outcome;
  std::vector<Matrix> batch;
  for (int64_t start = 0; start < rule.budget && !outcome.converged;
       start += kBatch) {
    const int64_t size = std::min(kBatch, rule.budget - start);
    batch.assign(static_cast<size_t>(size), Matrix());
    ParallelFor(static_cast<int>(size), workers, [&](int k) {
      batch[static_cast<size_t>(k)] = sample(start + k);
    });
    for (const Matrix& marginals : batch) {
      const double step = estimate.Add(marginals);
      if (progress) progress(estimate.count(), step);
      if (ConvergenceCheck(estimate, rule.epsilon, rule.window)) {
        outcome.converged = true;
        break;
      }
    }
  }
  outcome.mean = estimate.mean();
  outcome.permutations = estimate.count();
  return outcome;
}

Matrix PermutationMarginals(const UtilityFn& h, const PermutationPair& pair) {
  const int n = static_cast<int>(pair.rows.size());
  const int m = static_cast<int>(pair.cols.size());
  Matrix marginals(n, m);
  // previous[b], current[b]: prefix utilities for the previous and current
  // row prefix with the first b+1 columns.
  std::vector<double> previous(static_cast<size_t>(m), 0.0);
  std::vector<double> current(static_cast<size_t>(m), 0.0);
  GroupSet row_prefix;
  for (int a = 0; a < n; ++a) {
    row_prefix.Insert(pair.rows[a]);
    GroupSet col_prefix;
    for (int b = 0; b < m; ++b) {
      col_prefix.Insert(pair.cols[b]);
      current[b] = h(Coalition{row_prefix, col_prefix});
      const double left = b > 0 ? current[b - 1] : 0.0;
      const double diagonal = b > 0 ? previous[b - 1] : 0.0;
      marginals(pair.rows[a], pair.cols[b]) =
          current[b] + diagonal - left - previous[b];
    }
    std::swap(previous, current);
  }
  return marginals;
}

ValueGrid McValues(const UtilityFn& h, int n, int m, const McConfig& config) {
  if (n < 1 || m < 1 || n > kMaxGroups || m > kMaxGroups) {
    throw std::invalid_argument("grid dimensions must lie in [1, 64]");
  }
  ValueGrid out;
  out.method = ValueMethod::kMonteCarlo;
  out.seed = config.seed;
  if (config.exhaustive) {
    if (n + m > 12) {
      throw EnumerationCapError("exhaustive ordering pairs limited to n+m<=12");
    }
    const int64_t pairs = Factorial(n) * Factorial(m);
    const StopRule all{pairs, 0.0, 1};
    const EstimateOutcome outcome = RunPermutationEstimate(
        n, m, all, config.workers,
        [&](int64_t k) {
          return PermutationMarginals(h, PermutationPair::Lexicographic(n, m, k));
        },
        config.progress);
    out.values = outcome.mean;
    out.permutations_used = outcome.permutations;
    out.converged = true;
    return out;
  }
  const EstimateOutcome outcome = RunPermutationEstimate(
      n, m, config.stop, config.workers,
      [&](int64_t k) {
        return PermutationMarginals(h,
                                    PermutationPair::Sample(n, m, config.seed, k));
      },
      config.progress);
  out.values = outcome.mean;
  out.permutations_used = outcome.permutations;
  out.converged = outcome.converged;
  return out;
}

}  // namespace fragshap
