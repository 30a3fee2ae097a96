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

#ifndef FRAGSHAP_REPORT_H_
#define FRAGSHAP_REPORT_H_

#include <ostream>
#include <string>
#include <vector>

#include "fragshap/exact.h"
#include "fragshap/experiments.h"
#include "fragshap/grid.h"
#include "json.hpp"

namespace fragshap {

// Shortest decimal form that round-trips the double.
std::string FormatDouble(double value);

struct GroupLabels {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
};

// Singleton groups are named after their raw sample index or feature name;
// larger groups are named "rows<i>" / "cols<j>".
GroupLabels MakeGroupLabels(const BlockGrid& grid,
                            const std::vector<std::string>& feature_names);

// Matrix CSV: header of column labels after an empty corner cell, then one
// line per row group led by its label.
void WriteValuesCsv(std::ostream& out, const ValueGrid& values,
                    const GroupLabels& labels);

nlohmann::json ValueGridMetadata(const ValueGrid& values);
nlohmann::json ToJson(const std::vector<CheckResult>& checks);
nlohmann::json ToJson(const WeightRecursionReport& report);
nlohmann::json ToJson(const RemovalCurve& curve);
nlohmann::json ToJson(const DetectionCurve& curve);
nlohmann::json ToJson(const OutlierPlan& plan);
nlohmann::json ToJson(const BlockPerformanceTable& table);

void WriteRemovalCsv(std::ostream& out, const RemovalCurve& curve);
void WriteDetectionCsv(std::ostream& out, const DetectionCurve& curve);
void WriteBlockTableCsv(std::ostream& out, const BlockPerformanceTable& table);

}  // namespace fragshap

#endif  // FRAGSHAP_REPORT_H_
