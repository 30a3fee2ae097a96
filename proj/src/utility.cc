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

#include "fragshap/utility.h"

#include <mutex>
#include <stdexcept>

namespace fragshap {

MemoizedUtility::MemoizedUtility(UtilityFn raw) : raw_(std::move(raw)) {}

double MemoizedUtility::Evaluate(const Coalition& c) const {
  if (c.Degenerate()) return 0.0;
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(c); it != cache_.end()) {
      ++hits_;
      return it->second;
    }
  }
  ++misses_;
  const double value = raw_(c);
  std::unique_lock lock(mutex_);
  cache_.try_emplace(c, value);
  return value;
}

UtilityOracle::UtilityOracle(Dataset train, Dataset test, BlockGrid grid,
                             LearnerSpec learner)
    : train_(std::move(train)),
      test_(std::move(test)),
      grid_(std::move(grid)),
      learner_(learner) {
  train_.Validate();
  test_.Validate();
  learner_.Validate();
  grid_.RequireGameSized();
  if (grid_.raw_samples() != train_.samples() ||
      grid_.raw_features() != train_.num_features()) {
    throw std::invalid_argument("partition does not match the training data");
  }
  if (test_.num_features() != train_.num_features()) {
    throw std::invalid_argument("train and test differ in feature count");
  }
  if (test_.class_count != train_.class_count) {
    throw std::invalid_argument("train and test differ in class count");
  }
  memo_ = std::make_unique<MemoizedUtility>(
      [this](const Coalition& c) { return Compute(c); });
}

double UtilityOracle::Compute(const Coalition& c) const {
  if (c.Degenerate()) return 0.0;
  if ((c.samples.bits() & ~GroupSet::Full(grid_.n()).bits()) != 0 ||
      (c.features.bits() & ~GroupSet::Full(grid_.m()).bits()) != 0) {
    throw std::invalid_argument("coalition " + ToString(c) +
                                " references groups outside the grid");
  }
  const std::vector<int> rows = grid_.RawSamples(c.samples);
  const std::vector<int> cols = grid_.RawFeatures(c.features);
  std::vector<int> all_test(static_cast<size_t>(test_.samples()));
  for (int t = 0; t < test_.samples(); ++t) all_test[static_cast<size_t>(t)] = t;
  const Dataset fit = train_.Subset(rows, cols);
  const Dataset eval = test_.Subset(all_test, cols);
  return TrainAndScore(fit, eval, learner_);
}

}  // namespace fragshap
