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

#include "fragshap/learners.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fragshap {

namespace {

int ArgMaxLowestIndex(std::span<const double> scores) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(scores.size()); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return best;
}

int MajorityLabel(std::span<const int> labels, int class_count) {
  std::vector<double> counts(static_cast<size_t>(class_count), 0.0);
  for (int y : labels) counts[static_cast<size_t>(y)] += 1.0;
  return ArgMaxLowestIndex(counts);
}

std::vector<int> KnnPredict(const Matrix& train_x, std::span<const int> train_y,
                            const Matrix& test_x, int class_count, int k) {
  const int n = train_x.rows();
  const int d = train_x.cols();
  const int neighbors = std::min(k, n);
  std::vector<std::pair<double, int>> dist(static_cast<size_t>(n));
  std::vector<double> votes(static_cast<size_t>(class_count));
  std::vector<int> out;
  out.reserve(static_cast<size_t>(test_x.rows()));
  for (int t = 0; t < test_x.rows(); ++t) {
    const auto q = test_x.row(t);
    for (int r = 0; r < n; ++r) {
      const auto x = train_x.row(r);
      double sq = 0.0;
      for (int c = 0; c < d; ++c) {
        const double diff = x[c] - q[c];
        sq += diff * diff;
      }
      dist[static_cast<size_t>(r)] = {sq, r};
    }
    // Pairs compare by (distance, row), so ties go to the lower row index.
    std::nth_element(dist.begin(), dist.begin() + (neighbors - 1), dist.end());
    std::fill(votes.begin(), votes.end(), 0.0);
    for (int r = 0; r < neighbors; ++r) {
      votes[static_cast<size_t>(train_y[dist[static_cast<size_t>(r)].second])] +=
          1.0;
    }
    out.push_back(ArgMaxLowestIndex(votes));
  }
  return out;
}

// Multinomial logistic regression by full-batch gradient descent from zero
// weights.
std::vector<int> LogisticPredict(const Matrix& train_x,
                                 std::span<const int> train_y,
                                 const Matrix& test_x, int class_count,
                                 int steps, double rate) {
  const int n = train_x.rows();
  const int d = train_x.cols();
  const int stride = d + 1;
  std::vector<double> w(static_cast<size_t>(class_count * stride), 0.0);
  std::vector<double> grad(w.size());
  std::vector<double> prob(static_cast<size_t>(class_count));

  auto scores = [&](std::span<const double> x, std::vector<double>& out) {
    for (int c = 0; c < class_count; ++c) {
      const double* wc = &w[static_cast<size_t>(c * stride)];
      double z = wc[d];
      for (int f = 0; f < d; ++f) z += wc[f] * x[f];
      out[static_cast<size_t>(c)] = z;
    }
  };

  for (int step = 0; step < steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int r = 0; r < n; ++r) {
      const auto x = train_x.row(r);
      scores(x, prob);
      const double top = *std::max_element(prob.begin(), prob.end());
      double norm = 0.0;
      for (double& p : prob) {
        p = std::exp(p - top);
        norm += p;
      }
      for (int c = 0; c < class_count; ++c) {
        const double residual = prob[static_cast<size_t>(c)] / norm -
                                (train_y[r] == c ? 1.0 : 0.0);
        double* gc = &grad[static_cast<size_t>(c * stride)];
        for (int f = 0; f < d; ++f) gc[f] += residual * x[f];
        gc[d] += residual;
      }
    }
    const double scale = rate / n;
    for (size_t k = 0; k < w.size(); ++k) w[k] -= scale * grad[k];
  }

  std::vector<int> out;
  out.reserve(static_cast<size_t>(test_x.rows()));
  for (int t = 0; t < test_x.rows(); ++t) {
    scores(test_x.row(t), prob);
    out.push_back(ArgMaxLowestIndex(prob));
  }
  return out;
}

}  // namespace

void LearnerSpec::Validate() const {
  if (k < 1) throw std::invalid_argument("learner k must be >= 1");
  if (lr_steps < 1) throw std::invalid_argument("lr_steps must be >= 1");
  if (!(lr_rate > 0.0)) throw std::invalid_argument("lr_rate must be > 0");
}

std::string_view ToString(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kKnnClassifier:
      return "knn_classifier";
    case LearnerKind::kLogisticRegression:
      return "logistic_regression";
    case LearnerKind::kMajorityClass:
      return "majority_class";
  }
  return "unknown";
}

LearnerKind ParseLearnerKind(std::string_view name) {
  if (name == "knn_classifier" || name == "knn") {
    return LearnerKind::kKnnClassifier;
  }
  if (name == "logistic_regression" || name == "logreg") {
    return LearnerKind::kLogisticRegression;
  }
  if (name == "majority_class" || name == "majority") {
    return LearnerKind::kMajorityClass;
  }
  throw std::invalid_argument("unknown learner '" + std::string(name) + "'");
}

std::vector<int> FitPredict(const Matrix& train_x, std::span<const int> train_y,
                            const Matrix& test_x, int class_count,
                            const LearnerSpec& spec) {
  if (train_x.rows() == 0) {
    return std::vector<int>(static_cast<size_t>(test_x.rows()), 0);
  }
  const bool single_class =
      std::all_of(train_y.begin(), train_y.end(),
                  [&](int y) { return y == train_y.front(); });
  if (single_class || spec.kind == LearnerKind::kMajorityClass) {
    return std::vector<int>(static_cast<size_t>(test_x.rows()),
                            MajorityLabel(train_y, class_count));
  }
  const Matrix* fit_x = &train_x;
  const Matrix* eval_x = &test_x;
  Matrix scaled_train, scaled_test;
  if (spec.standardize) {
    const Standardizer z = Standardizer::Fit(train_x);
    scaled_train = z.Apply(train_x);
    scaled_test = z.Apply(test_x);
    fit_x = &scaled_train;
    eval_x = &scaled_test;
  }
  if (spec.kind == LearnerKind::kKnnClassifier) {
    return KnnPredict(*fit_x, train_y, *eval_x, class_count, spec.k);
  }
  return LogisticPredict(*fit_x, train_y, *eval_x, class_count, spec.lr_steps,
                         spec.lr_rate);
}

double TrainAndScore(const Matrix& train_x, std::span<const int> train_y,
                     const Matrix& test_x, std::span<const int> test_y,
                     int class_count, const LearnerSpec& spec) {
  if (train_x.rows() == 0 || train_x.cols() == 0 || test_x.rows() == 0) {
    return 0.0;
  }
  const std::vector<int> predicted =
      FitPredict(train_x, train_y, test_x, class_count, spec);
  int correct = 0;
  for (size_t t = 0; t < predicted.size(); ++t) {
    if (predicted[t] == test_y[t]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

}  // namespace fragshap
