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

#ifndef FRAGSHAP_LEARNERS_H_
#define FRAGSHAP_LEARNERS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fragshap/dataset.h"
#include "fragshap/matrix.h"

namespace fragshap {

enum class LearnerKind { kKnnClassifier, kLogisticRegression, kMajorityClass };

struct LearnerSpec {
  LearnerKind kind = LearnerKind::kKnnClassifier;
  int k = 5;
  int lr_steps = 200;
  double lr_rate = 0.1;
  bool standardize = true;

  void Validate() const;
};

std::string_view ToString(LearnerKind kind);
LearnerKind ParseLearnerKind(std::string_view name);

// Trains `spec` on (train_x, train_y) and returns predictions for test_x.
// Training sets holding a single class predict that class everywhere.
// Deterministic: identical inputs give identical predictions.
std::vector<int> FitPredict(const Matrix& train_x, std::span<const int> train_y,
                            const Matrix& test_x, int class_count,
                            const LearnerSpec& spec);

// Fraction of test rows predicted correctly. Empty training or test sets
// score 0.
double TrainAndScore(const Matrix& train_x, std::span<const int> train_y,
                     const Matrix& test_x, std::span<const int> test_y,
                     int class_count, const LearnerSpec& spec);

inline double TrainAndScore(const Dataset& train, const Dataset& test,
                            const LearnerSpec& spec) {
  return TrainAndScore(train.features, train.labels, test.features,
                       test.labels, train.class_count, spec);
}

}  // namespace fragshap

#endif  // FRAGSHAP_LEARNERS_H_
