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

#include "fragshap/knn_shapley.h"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <stdexcept>

#include "fragshap/random.h"

namespace fragshap {

namespace {

struct Prepared {
  Matrix train;
  Matrix test;
};

Prepared Prepare(const Dataset& train, const Dataset& test, bool standardize) {
  if (train.num_features() != test.num_features()) {
    throw std::invalid_argument("train and test differ in feature count");
  }
  if (!standardize) return {train.features, test.features};
  const Standardizer z = Standardizer::Fit(train.features);
  return {z.Apply(train.features), z.Apply(test.features)};
}

int64_t Factorial(int k) {
  int64_t out = 1;
  for (int v = 2; v <= k; ++v) out *= v;
  return out;
}

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

// Sample values for all test points given their squared distances to every
// training sample (test-major, n per row).
void SweepFromDistances(const std::vector<double>& distances, int n,
                        std::span<const int> train_labels,
                        std::span<const int> test_labels, int k,
                        std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  const double weight = 1.0 / static_cast<double>(test_labels.size());
  for (size_t t = 0; t < test_labels.size(); ++t) {
    AccumulateKnnShapley(
        std::span<const double>(distances.data() + t * static_cast<size_t>(n),
                                static_cast<size_t>(n)),
        train_labels, test_labels[t], k, weight, out);
  }
}

}  // namespace

void KnnConfig::Validate() const {
  if (k < 1) throw std::invalid_argument("knn k must be >= 1");
  if (feature_permutations < 1) {
    throw std::invalid_argument("feature permutation budget must be >= 1");
  }
  if (window < 1) throw std::invalid_argument("window must be >= 1");
}

void AccumulateKnnShapley(std::span<const double> distances,
                          std::span<const int> train_labels, int test_label,
                          int k, double weight, std::span<double> out) {
  const int n = static_cast<int>(distances.size());
  if (n == 0) return;
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  // Equal distances put the lower sample index nearer.
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return distances[a] < distances[b] ||
           (distances[a] == distances[b] && a < b);
  });
  auto match = [&](int rank) {
    return train_labels[order[rank]] == test_label ? 1.0 : 0.0;
  };
  // Ranks are 0-based here; rank r is position r+1 counted from the nearest.
  // The farthest sample sits in the K nearest of a random prefix with
  // probability min(K, N) / N.
  double value = match(n - 1) * static_cast<double>(std::min(k, n)) /
                 (static_cast<double>(n) * static_cast<double>(k));
  out[order[n - 1]] += weight * value;
  for (int r = n - 2; r >= 0; --r) {
    const int position = r + 1;
    value += (match(r) - match(r + 1)) / static_cast<double>(k) *
             static_cast<double>(std::min(k, position)) /
             static_cast<double>(position);
    out[order[r]] += weight * value;
  }
}

std::vector<double> KnnSampleValues(const Dataset& train, const Dataset& test,
                                    const std::vector<int>& feature_columns,
                                    const KnnConfig& config) {
  config.Validate();
  const int n = train.samples();
  std::vector<double> values(static_cast<size_t>(n), 0.0);
  if (feature_columns.empty() || n == 0 || test.samples() == 0) return values;
  const Prepared data = Prepare(train, test, config.standardize);
  std::vector<double> distances(static_cast<size_t>(test.samples()) *
                                static_cast<size_t>(n));
  for (int t = 0; t < test.samples(); ++t) {
    const auto q = data.test.row(t);
    for (int r = 0; r < n; ++r) {
      const auto x = data.train.row(r);
      double sq = 0.0;
      for (int c : feature_columns) sq += (x[c] - q[c]) * (x[c] - q[c]);
      distances[static_cast<size_t>(t) * n + r] = sq;
    }
  }
  SweepFromDistances(distances, n, train.labels, test.labels, config.k, values);
  return values;
}

ValueGrid Knn2dValues(const Dataset& train, const Dataset& test,
                      const BlockGrid& grid, const KnnConfig& config,
                      KnnRunStats* stats) {
  config.Validate();
  train.Validate();
  test.Validate();
  if (grid.raw_samples() != train.samples() ||
      grid.raw_features() != train.num_features()) {
    throw std::invalid_argument("partition does not match the training data");
  }
  const int n = grid.n();
  const int m = grid.m();
  const int raw_n = train.samples();
  const int tests = test.samples();
  const Prepared data = Prepare(train, test, config.standardize);
  std::atomic<int64_t> sweeps{0};

  auto marginals = [&](const std::vector<int>& order) {
    Matrix out(n, m);
    std::vector<double> distances(static_cast<size_t>(tests) *
                                  static_cast<size_t>(raw_n), 0.0);
    std::vector<double> previous(static_cast<size_t>(raw_n), 0.0);
    std::vector<double> current(static_cast<size_t>(raw_n), 0.0);
    for (int group : order) {
      // Extend every partial distance by the columns of the joining group.
      for (int t = 0; t < tests; ++t) {
        const auto q = data.test.row(t);
        double* row = distances.data() + static_cast<size_t>(t) * raw_n;
        for (int r = 0; r < raw_n; ++r) {
          const auto x = data.train.row(r);
          double add = 0.0;
          for (int c : grid.col_members(group)) {
            add += (x[c] - q[c]) * (x[c] - q[c]);
          }
          row[r] += add;
        }
      }
      SweepFromDistances(distances, raw_n, train.labels, test.labels, config.k,
                         current);
      ++sweeps;
      for (int r = 0; r < raw_n; ++r) {
        out(grid.row_group_of(r), group) +=
            current[static_cast<size_t>(r)] - previous[static_cast<size_t>(r)];
      }
      std::swap(previous, current);
    }
    return out;
  };

  ValueGrid result;
  result.method = ValueMethod::kKnn;
  result.seed = config.seed;
  if (config.exhaustive) {
    if (m > 8) throw EnumerationCapError("exhaustive orderings limited to m<=8");
    const int64_t total = Factorial(m);
    const EstimateOutcome outcome = RunPermutationEstimate(
        n, m, StopRule{total, 0.0, 1}, config.workers,
        [&](int64_t k) { return marginals(NthPermutation(m, k)); },
        config.progress);
    result.values = outcome.mean;
    result.permutations_used = outcome.permutations;
    result.converged = true;
  } else {
    const EstimateOutcome outcome = RunPermutationEstimate(
        n, m,
        StopRule{config.feature_permutations, config.epsilon, config.window},
        config.workers,
        [&](int64_t k) {
          Rng rng = MakeStream(config.seed, static_cast<uint64_t>(k));
          return marginals(RandomPermutation(m, rng));
        },
        config.progress);
    result.values = outcome.mean;
    result.permutations_used = outcome.permutations;
    result.converged = outcome.converged;
  }
  if (stats) stats->sweeps = sweeps.load();
  return result;
}

}  // namespace fragshap
