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

#include "fragshap/report.h"

#include <charconv>

namespace fragshap {

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

GroupLabels MakeGroupLabels(const BlockGrid& grid,
                            const std::vector<std::string>& feature_names) {
  GroupLabels labels;
  for (int i = 0; i < grid.n(); ++i) {
    const auto& members = grid.row_members(i);
    labels.rows.push_back(members.size() == 1
                              ? "s" + std::to_string(members.front())
                              : "rows" + std::to_string(i));
  }
  for (int j = 0; j < grid.m(); ++j) {
    const auto& members = grid.col_members(j);
    if (members.size() == 1) {
      const int raw = members.front();
      labels.cols.push_back(static_cast<size_t>(raw) < feature_names.size()
                                ? feature_names[static_cast<size_t>(raw)]
                                : "f" + std::to_string(raw));
    } else {
      labels.cols.push_back("cols" + std::to_string(j));
    }
  }
  return labels;
}

void WriteValuesCsv(std::ostream& out, const ValueGrid& values,
                    const GroupLabels& labels) {
  out << "group";
  for (const auto& c : labels.cols) out << ',' << c;
  out << '\n';
  for (int i = 0; i < values.n(); ++i) {
    out << labels.rows[static_cast<size_t>(i)];
    for (int j = 0; j < values.m(); ++j) {
      out << ',' << FormatDouble(values.values(i, j));
    }
    out << '\n';
  }
}

nlohmann::json ValueGridMetadata(const ValueGrid& values) {
  return {{"method", std::string(ToString(values.method))},
          {"n", values.n()},
          {"m", values.m()},
          {"permutations_used", values.permutations_used},
          {"seed", values.seed},
          {"converged", values.converged},
          {"sum", values.values.Sum()}};
}

nlohmann::json ToJson(const std::vector<CheckResult>& checks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks) {
    out.push_back(
        {{"check", c.check}, {"max_residual", c.max_residual}, {"pass", c.pass}});
  }
  return out;
}

nlohmann::json ToJson(const WeightRecursionReport& report) {
  return {{"n", report.n},
          {"m", report.m},
          {"equations", report.equations},
          {"max_residual", report.max_residual},
          {"pass", report.pass},
          {"checks", ToJson(report.Checks())}};
}

nlohmann::json ToJson(const RemovalCurve& curve) {
  return {{"order", std::string(ToString(curve.order))},
          {"batch", curve.batch},
          {"removed", curve.removed},
          {"accuracies", curve.accuracies}};
}

nlohmann::json ToJson(const DetectionCurve& curve) {
  return {{"inspected", curve.inspected},
          {"detected_fraction", curve.detected_fraction}};
}

nlohmann::json ToJson(const OutlierPlan& plan) {
  nlohmann::json placements = nlohmann::json::array();
  for (const auto& p : plan.placements) {
    placements.push_back({{"sample", p.sample},
                          {"feature", p.feature},
                          {"injected", p.injected},
                          {"original", p.original}});
  }
  return {{"budget_fraction", plan.budget_fraction},
          {"density_quantile", plan.density_quantile},
          {"seed", plan.seed},
          {"placements", placements},
          {"warnings", plan.warnings}};
}

nlohmann::json ToJson(const BlockPerformanceTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back(
        {{"i", r.i}, {"j", r.j}, {"value", r.value}, {"accuracy", r.accuracy}});
  }
  return {{"blocks", rows}, {"spearman", table.spearman}};
}

void WriteRemovalCsv(std::ostream& out, const RemovalCurve& curve) {
  out << "step,removed,accuracy\n";
  for (size_t k = 0; k < curve.accuracies.size(); ++k) {
    out << k << ',' << curve.removed[k] << ','
        << FormatDouble(curve.accuracies[k]) << '\n';
  }
}

void WriteDetectionCsv(std::ostream& out, const DetectionCurve& curve) {
  out << "inspected,recall\n";
  for (size_t k = 0; k < curve.inspected.size(); ++k) {
    out << curve.inspected[k] << ',' << FormatDouble(curve.detected_fraction[k])
        << '\n';
  }
}

void WriteBlockTableCsv(std::ostream& out, const BlockPerformanceTable& table) {
  out << "i,j,value,accuracy\n";
  for (const auto& r : table.rows) {
    out << r.i << ',' << r.j << ',' << FormatDouble(r.value) << ','
        << FormatDouble(r.accuracy) << '\n';
  }
}

}  // namespace fragshap
