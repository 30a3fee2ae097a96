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

#ifndef FRAGSHAP_UTILITY_H_
#define FRAGSHAP_UTILITY_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>

#include "fragshap/dataset.h"
#include "fragshap/grid.h"
#include "fragshap/learners.h"

namespace fragshap {

struct CacheStats {
  int64_t hits = 0;
  int64_t misses = 0;

  bool operator==(const CacheStats&) const = default;
};

// Wraps a utility with the empty-coalition convention and a thread-safe memo
// cache. Degenerate coalitions return 0 without touching the cache or the
// counters. Concurrent misses on one coalition may both compute; the
// results are identical, so the later insert is dropped.
class MemoizedUtility {
 public:
  explicit MemoizedUtility(UtilityFn raw);

  MemoizedUtility(const MemoizedUtility&) = delete;
  MemoizedUtility& operator=(const MemoizedUtility&) = delete;

  double Evaluate(const Coalition& c) const;
  double operator()(const Coalition& c) const { return Evaluate(c); }

  CacheStats cache_stats() const { return {hits_.load(), misses_.load()}; }
  // Number of calls made to the wrapped utility.
  int64_t evaluation_count() const { return misses_.load(); }

  // A UtilityFn view of this object; it must outlive the returned function.
  UtilityFn AsUtility() const {
    return [this](const Coalition& c) { return Evaluate(c); };
  }

 private:
  UtilityFn raw_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Coalition, double, CoalitionHash> cache_;
  mutable std::atomic<int64_t> hits_{0};
  mutable std::atomic<int64_t> misses_{0};
};

// Test accuracy of a learner trained on the training sub-matrix selected by
// a coalition: the rows of its sample groups and the columns of its feature
// groups. The test set is projected onto the same columns.
class UtilityOracle {
 public:
  UtilityOracle(Dataset train, Dataset test, BlockGrid grid,
                LearnerSpec learner);

  UtilityOracle(const UtilityOracle&) = delete;
  UtilityOracle& operator=(const UtilityOracle&) = delete;

  double Evaluate(const Coalition& c) const { return memo_->Evaluate(c); }
  double operator()(const Coalition& c) const { return Evaluate(c); }
  CacheStats cache_stats() const { return memo_->cache_stats(); }
  int64_t evaluation_count() const { return memo_->evaluation_count(); }
  UtilityFn AsUtility() const { return memo_->AsUtility(); }

  // Uncached evaluation, for callers that must not disturb the counters.
  double Compute(const Coalition& c) const;

  const Dataset& train() const { return train_; }
  const Dataset& test() const { return test_; }
  const BlockGrid& grid() const { return grid_; }
  const LearnerSpec& learner() const { return learner_; }

 private:
  Dataset train_;
  Dataset test_;
  BlockGrid grid_;
  LearnerSpec learner_;
  std::unique_ptr<MemoizedUtility> memo_;
};

}  // namespace fragshap

#endif  // FRAGSHAP_UTILITY_H_
