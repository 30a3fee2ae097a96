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

#ifndef FRAGSHAP_BASELINE_H_
#define FRAGSHAP_BASELINE_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "fragshap/dataset.h"
#include "fragshap/grid.h"
#include "fragshap/learners.h"
#include "fragshap/monte_carlo.h"

namespace fragshap {

// The n*m blocks of a grid as players 0..nm-1 in row-major order, with the
// full-training-set column means used to fill absent cells.
class FlattenedGame {
 public:
  FlattenedGame(int n, int m) : n_(n), m_(m) {}

  int n() const { return n_; }
  int m() const { return m_; }
  int players() const { return n_ * m_; }
  int Flatten(int i, int j) const { return i * m_ + j; }
  std::pair<int, int> Unflatten(int player) const {
    return {player / m_, player % m_};
  }

 private:
  int n_;
  int m_;
};

// Utility of a set of players given as one presence flag per player.
using SetUtilityFn = std::function<double(const std::vector<char>& present)>;

// Test accuracy after training on the sample rows that own at least one
// present block, with every absent cell of those rows replaced by its
// column's mean over the full training matrix. No present block scores 0.
SetUtilityFn MakeImputedBlockUtility(const Dataset& train, const Dataset& test,
                                     const BlockGrid& grid,
                                     const LearnerSpec& learner);

struct PermutationShapleyConfig {
  int64_t budget = 100;
  uint64_t seed = 0;
  int workers = 1;
  // Average over all orderings of the players; ignores the budget.
  bool exhaustive = false;
  ProgressFn progress;
};

// Permutation-sampling Shapley values of a set function over `players`.
// Each ordering costs `players` utility calls.
std::vector<double> PermutationShapley(int players, const SetUtilityFn& u,
                                       const PermutationShapleyConfig& config);

// Flattened block values: every block is a player of a one-dimensional game.
ValueGrid Baseline1dValues(const SetUtilityFn& u, int n, int m,
                           const PermutationShapleyConfig& config);
ValueGrid Baseline1dValues(const Dataset& train, const Dataset& test,
                           const BlockGrid& grid, const LearnerSpec& learner,
                           const PermutationShapleyConfig& config);

enum class Axis { kSamples, kFeatures };

// Shapley values of g(S) = h(S, all features) for kSamples, or
// g(F) = h(all samples, F) for kFeatures.
std::vector<double> Direct1dShapley(const UtilityFn& h, int n, int m, Axis axis,
                                    const PermutationShapleyConfig& config);

}  // namespace fragshap

#endif  // FRAGSHAP_BASELINE_H_
