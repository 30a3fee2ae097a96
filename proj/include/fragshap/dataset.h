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

#ifndef FRAGSHAP_DATASET_H_
#define FRAGSHAP_DATASET_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fragshap/matrix.h"

namespace fragshap {

// A labeled classification dataset. `features` holds one row per raw sample.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  int class_count = 0;

  int samples() const { return features.rows(); }
  int num_features() const { return features.cols(); }

  // Throws std::invalid_argument when labels and features disagree or a
  // label falls outside [0, class_count).
  void Validate() const;

  // Rows and columns selected by raw index, in the given order.
  Dataset Subset(const std::vector<int>& rows,
                 const std::vector<int>& cols) const;
  Dataset SelectRows(const std::vector<int>& rows) const;
};

struct CsvOptions {
  std::string label_column;
  // Fill non-numeric or empty feature cells with the column mean instead of
  // rejecting the file.
  bool impute_mean = false;
};

// Raw table before label encoding, so that separate train and test files can
// share one label mapping.
struct CsvTable {
  std::vector<std::string> feature_names;
  Matrix features;
  std::vector<std::string> labels;
};

CsvTable ReadCsvTable(std::string_view text, const CsvOptions& options);
CsvTable ReadCsvFile(const std::string& path, const CsvOptions& options);

// Encodes string labels of one or more tables with a shared mapping. Labels
// are ordered numerically when all of them parse as numbers, otherwise
// lexicographically.
std::vector<Dataset> EncodeLabels(const std::vector<CsvTable>& tables);

// Seeded shuffle, then the last round(test_fraction * samples) rows become the
// test set.
std::pair<Dataset, Dataset> TrainTestSplit(const Dataset& data,
                                           double test_fraction,
                                           uint64_t seed);

// Per-column z-score parameters. Columns with zero spread get scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer Fit(const Matrix& x);
  Matrix Apply(const Matrix& x) const;
};

struct SyntheticDataOptions {
  int samples = 200;
  int features = 10;
  // Features whose class-conditional mean differs; the rest are pure noise.
  int informative = 10;
  int classes = 2;
  // Distance between class means along each informative feature, in units
  // of the within-class standard deviation.
  double separation = 2.0;
  uint64_t seed = 0;
};

// Gaussian class-conditional data with balanced classes.
Dataset MakeSyntheticClassification(const SyntheticDataOptions& options);

}  // namespace fragshap

#endif  // FRAGSHAP_DATASET_H_
