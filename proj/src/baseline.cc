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
#include <stdexcept>

#include "fragshap/random.h"

namespace fragshap {

namespace {

std::vector<int> NthPermutation(int size, int64_t index) {
  std::vector<int64_t> factorial(static_cast<size_t>(size) + 1, 1);
  for (int k = 1; k <= size; ++k) factorial[k] = factorial[k - 1] * k;
  std::vector<int> pool(static_cast<size_t>(size));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  for (int k = size; k >= 1; --k) {
    const auto pick = static_cast<size_t>(index / factorial[k - 1]);
    index %= factorial[k - 1];
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

}  // namespace

SetUtilityFn MakeImputedBlockUtility(const Dataset& train, const Dataset& test,
                                     const BlockGrid& grid,
                                     const LearnerSpec& learner) {
  train.Validate();
  test.Validate();
  learner.Validate();
  if (grid.raw_samples() != train.samples() ||
      grid.raw_features() != train.num_features()) {
    throw std::invalid_argument("partition does not match the training data");
  }
  std::vector<double> means(static_cast<size_t>(train.num_features()), 0.0);
  for (int c = 0; c < train.num_features(); ++c) {
    double sum = 0.0;
    for (int r = 0; r < train.samples(); ++r) sum += train.features(r, c);
    means[static_cast<size_t>(c)] = sum / std::max(train.samples(), 1);
  }
  return [&train, &test, grid, learner, means](const std::vector<char>& present) {
    const int n = grid.n();
    const int m = grid.m();
    std::vector<int> rows;
    for (int i = 0; i < n; ++i) {
      bool any = false;
      for (int j = 0; j < m && !any; ++j) any = present[static_cast<size_t>(i * m + j)];
      if (any) {
        rows.insert(rows.end(), grid.row_members(i).begin(),
                    grid.row_members(i).end());
      }
    }
    if (rows.empty()) return 0.0;
    Matrix x(static_cast<int>(rows.size()), train.num_features());
    std::vector<int> y;
    y.reserve(rows.size());
    for (size_t k = 0; k < rows.size(); ++k) {
      const int raw = rows[k];
      const int i = grid.row_group_of(raw);
      for (int c = 0; c < train.num_features(); ++c) {
        const int j = grid.col_group_of(c);
        x(static_cast<int>(k), c) = present[static_cast<size_t>(i * m + j)]
                                        ? train.features(raw, c)
                                        : means[static_cast<size_t>(c)];
      }
      y.push_back(train.labels[static_cast<size_t>(raw)]);
    }
    return TrainAndScore(x, y, test.features, test.labels, train.class_count,
                         learner);
  };
}

std::vector<double> PermutationShapley(int players, const SetUtilityFn& u,
                                       const PermutationShapleyConfig& config) {
  if (players < 1) throw std::invalid_argument("need at least one player");
  auto marginals = [&](const std::vector<int>& order) {
    Matrix out(1, players);
    std::vector<char> present(static_cast<size_t>(players), 0);
    double before = u(present);
    for (int p : order) {
      present[static_cast<size_t>(p)] = 1;
      const double after = u(present);
      out(0, p) = after - before;
      before = after;
    }
    return out;
  };
  EstimateOutcome outcome;
  if (config.exhaustive) {
    if (players > 10) {
      throw EnumerationCapError("exhaustive orderings limited to 10 players");
    }
    int64_t total = 1;
    for (int k = 2; k <= players; ++k) total *= k;
    outcome = RunPermutationEstimate(
        1, players, StopRule{total, 0.0, 1}, config.workers,
        [&](int64_t k) { return marginals(NthPermutation(players, k)); },
        config.progress);
  } else {
    outcome = RunPermutationEstimate(
        1, players, StopRule{config.budget, 0.0, 1}, config.workers,
        [&](int64_t k) {
          Rng rng = MakeStream(config.seed, static_cast<uint64_t>(k));
          return marginals(RandomPermutation(players, rng));
        },
        config.progress);
  }
  return outcome.mean.data();
}

ValueGrid Baseline1dValues(const SetUtilityFn& u, int n, int m,
                           const PermutationShapleyConfig& config) {
  const FlattenedGame game(n, m);
  const std::vector<double> flat = PermutationShapley(game.players(), u, config);
  ValueGrid out;
  out.values = Matrix(n, m);
  for (int p = 0; p < game.players(); ++p) {
    const auto [i, j] = game.Unflatten(p);
    out.values(i, j) = flat[static_cast<size_t>(p)];
  }
  out.method = ValueMethod::kBaseline1d;
  out.seed = config.seed;
  if (config.exhaustive) {
    int64_t total = 1;
    for (int k = 2; k <= game.players(); ++k) total *= k;
    out.permutations_used = total;
    out.converged = true;
  } else {
    out.permutations_used = config.budget;
    out.converged = false;
  }
  return out;
}

ValueGrid Baseline1dValues(const Dataset& train, const Dataset& test,
                           const BlockGrid& grid, const LearnerSpec& learner,
                           const PermutationShapleyConfig& config) {
  return Baseline1dValues(MakeImputedBlockUtility(train, test, grid, learner),
                          grid.n(), grid.m(), config);
}

std::vector<double> Direct1dShapley(const UtilityFn& h, int n, int m, Axis axis,
                                    const PermutationShapleyConfig& config) {
  if (n < 1 || m < 1 || n > kMaxGroups || m > kMaxGroups) {
    throw std::invalid_argument("grid dimensions must lie in [1, 64]");
  }
  const int players = axis == Axis::kSamples ? n : m;
  const GroupSet all = GroupSet::Full(axis == Axis::kSamples ? m : n);
  return PermutationShapley(
      players,
      [&](const std::vector<char>& present) {
        GroupSet chosen;
        for (int p = 0; p < players; ++p) {
          if (present[static_cast<size_t>(p)]) chosen.Insert(p);
        }
        return axis == Axis::kSamples ? h(Coalition{chosen, all})
                                      : h(Coalition{all, chosen});
      },
      config);
}

}  // namespace fragshap
