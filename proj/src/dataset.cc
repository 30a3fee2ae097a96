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

#include "fragshap/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fragshap/random.h"

namespace fragshap {

namespace {

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        field.push_back('"');
        ++k;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::optional<double> ParseNumber(std::string_view s) {
  s = Trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

void Dataset::Validate() const {
  if (static_cast<int>(labels.size()) != features.rows()) {
    throw std::invalid_argument("dataset has " +
                                std::to_string(features.rows()) +
                                " rows but " + std::to_string(labels.size()) +
                                " labels");
  }
  for (int y : labels) {
    if (y < 0 || y >= class_count) {
      throw std::invalid_argument("label " + std::to_string(y) +
                                  " outside [0, " +
                                  std::to_string(class_count) + ")");
    }
  }
  if (!feature_names.empty() &&
      static_cast<int>(feature_names.size()) != features.cols()) {
    throw std::invalid_argument("feature name count mismatch");
  }
}

Dataset Dataset::Subset(const std::vector<int>& rows,
                        const std::vector<int>& cols) const {
  Dataset out;
  out.class_count = class_count;
  out.features = Matrix(static_cast<int>(rows.size()),
                        static_cast<int>(cols.size()));
  out.labels.reserve(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto src = features.row(rows[r]);
    auto dst = out.features.row(static_cast<int>(r));
    for (size_t c = 0; c < cols.size(); ++c) dst[c] = src[cols[c]];
    out.labels.push_back(labels[rows[r]]);
  }
  if (!feature_names.empty()) {
    for (int c : cols) out.feature_names.push_back(feature_names[c]);
  }
  return out;
}

Dataset Dataset::SelectRows(const std::vector<int>& rows) const {
  std::vector<int> cols(static_cast<size_t>(num_features()));
  std::iota(cols.begin(), cols.end(), 0);
  return Subset(rows, cols);
}

CsvTable ReadCsvTable(std::string_view text, const CsvOptions& options) {
  std::vector<std::vector<std::string>> rows;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!Trim(line).empty()) rows.push_back(SplitCsvLine(line));
    start = end + 1;
  }
  if (rows.empty()) throw std::invalid_argument("csv: missing header row");

  const std::vector<std::string>& header = rows.front();
  int label_index = -1;
  for (size_t c = 0; c < header.size(); ++c) {
    if (Trim(header[c]) == options.label_column) {
      label_index = static_cast<int>(c);
    }
  }
  if (label_index < 0) {
    throw std::invalid_argument("csv: label column '" + options.label_column +
                                "' not found in header");
  }

  CsvTable table;
  for (size_t c = 0; c < header.size(); ++c) {
    if (static_cast<int>(c) != label_index) {
      table.feature_names.emplace_back(Trim(header[c]));
    }
  }
  const int num_rows = static_cast<int>(rows.size()) - 1;
  const int num_cols = static_cast<int>(table.feature_names.size());
  table.features = Matrix(num_rows, num_cols);
  std::vector<std::vector<int>> missing(static_cast<size_t>(num_cols));
  for (int r = 0; r < num_rows; ++r) {
    const auto& fields = rows[static_cast<size_t>(r) + 1];
    if (fields.size() != header.size()) {
      throw std::invalid_argument(
          "csv: line " + std::to_string(r + 2) + " has " +
          std::to_string(fields.size()) + " fields, header has " +
          std::to_string(header.size()));
    }
    int out_col = 0;
    for (size_t c = 0; c < fields.size(); ++c) {
      if (static_cast<int>(c) == label_index) {
        table.labels.emplace_back(Trim(fields[c]));
        continue;
      }
      const auto value = ParseNumber(fields[c]);
      if (value) {
        table.features(r, out_col) = *value;
      } else if (options.impute_mean) {
        missing[static_cast<size_t>(out_col)].push_back(r);
      } else {
        throw std::invalid_argument(
            "csv: non-numeric value '" + fields[c] + "' at line " +
            std::to_string(r + 2) + ", column '" +
            table.feature_names[static_cast<size_t>(out_col)] +
            "' (pass --impute-mean to fill with the column mean)");
      }
      ++out_col;
    }
  }
  for (int c = 0; c < num_cols; ++c) {
    const auto& holes = missing[static_cast<size_t>(c)];
    if (holes.empty()) continue;
    if (static_cast<int>(holes.size()) == num_rows) {
      throw std::invalid_argument("csv: column '" +
                                  table.feature_names[static_cast<size_t>(c)] +
                                  "' has no numeric values to impute from");
    }
    double sum = 0.0;
    size_t hole = 0;
    for (int r = 0; r < num_rows; ++r) {
      if (hole < holes.size() && holes[hole] == r) {
        ++hole;
      } else {
        sum += table.features(r, c);
      }
    }
    const double mean = sum / static_cast<double>(num_rows - holes.size());
    for (int r : holes) table.features(r, c) = mean;
  }
  return table;
}

CsvTable ReadCsvFile(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ReadCsvTable(buffer.str(), options);
}

std::vector<Dataset> EncodeLabels(const std::vector<CsvTable>& tables) {
  std::vector<std::string> names;
  for (const auto& t : tables) {
    names.insert(names.end(), t.labels.begin(), t.labels.end());
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  const bool numeric = std::all_of(names.begin(), names.end(), [](const auto& s) {
    return ParseNumber(s).has_value();
  });
  if (numeric) {
    std::stable_sort(names.begin(), names.end(), [](const auto& a, const auto& b) {
      return *ParseNumber(a) < *ParseNumber(b);
    });
  }
  std::map<std::string, int> code;
  for (size_t k = 0; k < names.size(); ++k) code[names[k]] = static_cast<int>(k);

  std::vector<Dataset> out;
  for (const auto& t : tables) {
    if (!out.empty() && t.feature_names != tables.front().feature_names) {
      throw std::invalid_argument("csv files disagree on feature columns");
    }
    Dataset d;
    d.features = t.features;
    d.feature_names = t.feature_names;
    d.class_count = static_cast<int>(names.size());
    for (const auto& label : t.labels) d.labels.push_back(code.at(label));
    out.push_back(std::move(d));
  }
  return out;
}

std::pair<Dataset, Dataset> TrainTestSplit(const Dataset& data,
                                           double test_fraction,
                                           uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test fraction must lie in (0, 1)");
  }
  const int total = data.samples();
  const int test_count =
      static_cast<int>(std::lround(test_fraction * static_cast<double>(total)));
  if (test_count < 1 || test_count >= total) {
    throw std::invalid_argument("test fraction leaves an empty split");
  }
  Rng rng(StreamSeed(seed, 0x5eed));
  std::vector<int> order = RandomPermutation(total, rng);
  std::vector<int> train_rows(order.begin(), order.end() - test_count);
  std::vector<int> test_rows(order.end() - test_count, order.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {data.SelectRows(train_rows), data.SelectRows(test_rows)};
}

Standardizer Standardizer::Fit(const Matrix& x) {
  Standardizer s;
  s.mean.assign(static_cast<size_t>(x.cols()), 0.0);
  s.scale.assign(static_cast<size_t>(x.cols()), 1.0);
  if (x.rows() == 0) return s;
  for (int c = 0; c < x.cols(); ++c) {
    double sum = 0.0;
    for (int r = 0; r < x.rows(); ++r) sum += x(r, c);
    const double mean = sum / x.rows();
    double sq = 0.0;
    for (int r = 0; r < x.rows(); ++r) sq += (x(r, c) - mean) * (x(r, c) - mean);
    const double sd = std::sqrt(sq / x.rows());
    s.mean[static_cast<size_t>(c)] = mean;
    s.scale[static_cast<size_t>(c)] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::Apply(const Matrix& x) const {
  Matrix out(x.rows(), x.cols());
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < x.cols(); ++c) {
      out(r, c) = (x(r, c) - mean[static_cast<size_t>(c)]) /
                  scale[static_cast<size_t>(c)];
    }
  }
  return out;
}

Dataset MakeSyntheticClassification(const SyntheticDataOptions& options) {
  if (options.samples < options.classes || options.features < 1 ||
      options.classes < 2 || options.informative < 0 ||
      options.informative > options.features) {
    throw std::invalid_argument("invalid synthetic dataset options");
  }
  Rng rng(StreamSeed(options.seed, 0xda7a));
  // Box-Muller keeps the stream identical across standard libraries.
  auto gaussian = [&rng] {
    const double u1 = 1.0 - UniformUnit(rng);
    const double u2 = UniformUnit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  // Class c has mean +/- separation / 2 along each informative feature, with
  // a per-class sign pattern.
  Matrix centers(options.classes, options.features);
  for (int c = 0; c < options.classes; ++c) {
    for (int f = 0; f < options.informative; ++f) {
      const bool positive = options.classes == 2
                                ? c == 1
                                : ((c + f) % options.classes) == 0;
      centers(c, f) = (positive ? 0.5 : -0.5) * options.separation;
    }
  }
  Dataset d;
  d.class_count = options.classes;
  d.features = Matrix(options.samples, options.features);
  for (int r = 0; r < options.samples; ++r) {
    const int label = r % options.classes;
    d.labels.push_back(label);
    for (int f = 0; f < options.features; ++f) {
      d.features(r, f) = centers(label, f) + gaussian();
    }
  }
  for (int f = 0; f < options.features; ++f) {
    d.feature_names.push_back("x" + std::to_string(f));
  }
  return d;
}

}  // namespace fragshap
