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

#include "fragshap/experiments.h"

#include <algorithm>
#include <memory>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "fragshap/random.h"

namespace fragshap {

namespace {

std::vector<double> Column(const Matrix& x, int c) {
  std::vector<double> out(static_cast<size_t>(x.rows()));
  for (int r = 0; r < x.rows(); ++r) out[static_cast<size_t>(r)] = x(r, c);
  return out;
}

std::vector<double> AverageRanks(const std::vector<double>& v) {
  std::vector<size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (size_t start = 0; start < order.size();) {
    size_t end = start;
    while (end + 1 < order.size() && v[order[end + 1]] == v[order[start]]) ++end;
    const double rank = 0.5 * static_cast<double>(start + end) + 1.0;
    for (size_t k = start; k <= end; ++k) ranks[order[k]] = rank;
    start = end + 1;
  }
  return ranks;
}

}  // namespace

std::string_view ToString(RemovalOrder order) {
  switch (order) {
    case RemovalOrder::kAscending:
      return "ascending";
    case RemovalOrder::kDescending:
      return "descending";
    case RemovalOrder::kRandom:
      return "random";
  }
  return "unknown";
}

RemovalOrder ParseRemovalOrder(std::string_view name) {
  if (name == "ascending") return RemovalOrder::kAscending;
  if (name == "descending") return RemovalOrder::kDescending;
  if (name == "random") return RemovalOrder::kRandom;
  throw std::invalid_argument("unknown removal order '" + std::string(name) +
                              "'");
}

std::vector<CellRef> RankCells(const ValueGrid& values, const BlockGrid& grid,
                               RemovalOrder order, uint64_t seed) {
  if (values.n() != grid.n() || values.m() != grid.m()) {
    throw std::invalid_argument("values do not match the partition");
  }
  std::vector<CellRef> cells;
  cells.reserve(static_cast<size_t>(grid.raw_samples()) *
                static_cast<size_t>(grid.raw_features()));
  for (int r = 0; r < grid.raw_samples(); ++r) {
    for (int c = 0; c < grid.raw_features(); ++c) cells.push_back({r, c});
  }
  if (order == RemovalOrder::kRandom) {
    Rng rng(StreamSeed(seed, 0x4a9d));
    Shuffle(cells, rng);
    return cells;
  }
  auto value_of = [&](const CellRef& cell) {
    return values.values(grid.row_group_of(cell.sample),
                         grid.col_group_of(cell.feature));
  };
  std::stable_sort(cells.begin(), cells.end(),
                   [&](const CellRef& a, const CellRef& b) {
                     const double va = value_of(a);
                     const double vb = value_of(b);
                     return order == RemovalOrder::kAscending ? va < vb : va > vb;
                   });
  return cells;
}

RemovalCurve RemoveCells(const Dataset& train, const Dataset& test,
                         const std::vector<CellRef>& ranked, int batch,
                         RemovalOrder order, const LearnerSpec& learner) {
  if (batch < 1) throw std::invalid_argument("batch must be >= 1");
  const int rows = train.samples();
  const int cols = train.num_features();
  std::set<CellRef> distinct(ranked.begin(), ranked.end());
  if (distinct.size() != ranked.size()) {
    throw std::invalid_argument("ranked cells must be distinct");
  }
  for (const CellRef& cell : ranked) {
    if (cell.sample < 0 || cell.sample >= rows || cell.feature < 0 ||
        cell.feature >= cols) {
      throw std::invalid_argument("ranked cell outside the training matrix");
    }
  }

  Dataset work = train;
  std::vector<double> kept_sum(static_cast<size_t>(cols), 0.0);
  std::vector<int> kept_count(static_cast<size_t>(cols), rows);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) kept_sum[static_cast<size_t>(c)] += train.features(r, c);
  }
  const std::vector<double> full_sum = kept_sum;

  RemovalCurve curve;
  curve.order = order;
  curve.batch = batch;
  curve.removed.push_back(0);
  curve.accuracies.push_back(TrainAndScore(work, test, learner));
  for (size_t start = 0; start < ranked.size(); start += static_cast<size_t>(batch)) {
    const size_t end = std::min(ranked.size(), start + static_cast<size_t>(batch));
    for (size_t k = start; k < end; ++k) {
      const CellRef& cell = ranked[k];
      kept_sum[static_cast<size_t>(cell.feature)] -=
          train.features(cell.sample, cell.feature);
      --kept_count[static_cast<size_t>(cell.feature)];
    }
    for (size_t k = start; k < end; ++k) {
      const auto c = static_cast<size_t>(ranked[k].feature);
      work.features(ranked[k].sample, ranked[k].feature) =
          kept_count[c] > 0 ? kept_sum[c] / kept_count[c] : full_sum[c] / rows;
    }
    curve.removed.push_back(static_cast<int>(end));
    curve.accuracies.push_back(TrainAndScore(work, test, learner));
  }
  return curve;
}

double AccuracyAfterFraction(const RemovalCurve& curve, int total_cells,
                             double fraction) {
  const double target = fraction * total_cells;
  for (size_t k = 0; k < curve.removed.size(); ++k) {
    if (curve.removed[k] >= target - 1e-9) return curve.accuracies[k];
  }
  return curve.accuracies.back();
}

GaussianKde::GaussianKde(std::vector<double> points, double bandwidth)
    : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("KDE needs at least two points");
  }
  const double n = static_cast<double>(points_.size());
  const double mean = std::accumulate(points_.begin(), points_.end(), 0.0) / n;
  double sq = 0.0;
  for (double p : points_) sq += (p - mean) * (p - mean);
  sd_ = std::sqrt(sq / (n - 1.0));
  bandwidth_ = bandwidth > 0.0 ? bandwidth : sd_ * std::pow(n, -0.2);
  if (!(bandwidth_ > 0.0)) {
    throw std::invalid_argument("KDE bandwidth is zero (constant column)");
  }
}

double GaussianKde::Density(double x) const {
  const double norm =
      1.0 / (static_cast<double>(points_.size()) * bandwidth_ *
             std::sqrt(2.0 * M_PI));
  double total = 0.0;
  for (double p : points_) {
    const double z = (x - p) / bandwidth_;
    total += std::exp(-0.5 * z * z);
  }
  return norm * total;
}

double DensityThreshold(const GaussianKde& kde, const std::vector<double>& points,
                        double quantile) {
  std::vector<double> densities;
  densities.reserve(points.size());
  for (double p : points) densities.push_back(kde.Density(p));
  std::sort(densities.begin(), densities.end());
  // Nearest-rank quantile.
  const auto rank = static_cast<size_t>(
      std::max(1.0, std::ceil(quantile * static_cast<double>(densities.size()))));
  return densities[std::min(rank, densities.size()) - 1];
}

InjectionResult InjectOutliers(const Dataset& train, const OutlierParams& params) {
  if (params.budget_fraction < 0.0 || params.budget_fraction > 1.0) {
    throw std::invalid_argument("budget fraction must lie in [0, 1]");
  }
  if (!(params.density_quantile > 0.0 && params.density_quantile < 1.0)) {
    throw std::invalid_argument("density quantile must lie in (0, 1)");
  }
  const int rows = train.samples();
  const int cols = train.num_features();
  InjectionResult result{train, OutlierPlan{}};
  OutlierPlan& plan = result.plan;
  plan.budget_fraction = params.budget_fraction;
  plan.density_quantile = params.density_quantile;
  plan.seed = params.seed;

  const int total = rows * cols;
  int wanted = params.cell_count >= 0
                   ? params.cell_count
                   : static_cast<int>(std::lround(params.budget_fraction * total));
  if (wanted == 0 || rows < 2) return result;

  std::vector<char> usable(static_cast<size_t>(cols), 1);
  for (int c = 0; c < cols; ++c) {
    const std::vector<double> col = Column(train.features, c);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    if (*lo == *hi) {
      usable[static_cast<size_t>(c)] = 0;
      plan.warnings.push_back("column " + std::to_string(c) +
                              " is constant; skipped");
    }
  }
  std::vector<CellRef> candidates;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (usable[static_cast<size_t>(c)]) candidates.push_back({r, c});
    }
  }
  if (wanted > static_cast<int>(candidates.size())) {
    plan.warnings.push_back("requested " + std::to_string(wanted) +
                            " outliers but only " +
                            std::to_string(candidates.size()) +
                            " cells are usable");
    wanted = static_cast<int>(candidates.size());
  }
  Rng rng(StreamSeed(params.seed, 0x0071));
  Shuffle(candidates, rng);
  candidates.resize(static_cast<size_t>(wanted));
  std::sort(candidates.begin(), candidates.end());

  std::vector<std::unique_ptr<GaussianKde>> kdes(static_cast<size_t>(cols));
  std::vector<double> thresholds(static_cast<size_t>(cols), 0.0);
  std::vector<std::pair<double, double>> envelopes(static_cast<size_t>(cols));
  for (size_t k = 0; k < candidates.size(); ++k) {
    const CellRef cell = candidates[k];
    const auto c = static_cast<size_t>(cell.feature);
    if (!kdes[c]) {
      const std::vector<double> col = Column(train.features, cell.feature);
      kdes[c] = std::make_unique<GaussianKde>(col);
      thresholds[c] = DensityThreshold(*kdes[c], col, params.density_quantile);
      const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
      envelopes[c] = {*lo - 3.0 * kdes[c]->sample_sd(),
                      *hi + 3.0 * kdes[c]->sample_sd()};
    }
    Rng cell_rng = MakeStream(params.seed, k);
    double candidate = 0.0;
    bool accepted = false;
    for (int attempt = 0; attempt < params.max_tries; ++attempt) {
      candidate = envelopes[c].first +
                  (envelopes[c].second - envelopes[c].first) * UniformUnit(cell_rng);
      if (kdes[c]->Density(candidate) < thresholds[c]) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw std::runtime_error("no low-density value found for column " +
                               std::to_string(cell.feature));
    }
    plan.placements.push_back({cell.sample, cell.feature, candidate,
                               train.features(cell.sample, cell.feature)});
    result.data.features(cell.sample, cell.feature) = candidate;
  }
  return result;
}

InjectionResult SwapDigits(const Dataset& train, int feature,
                           const std::vector<std::pair<double, double>>& pairs,
                           int count, uint64_t seed) {
  if (feature < 0 || feature >= train.num_features()) {
    throw std::invalid_argument("swap feature out of range");
  }
  InjectionResult result{train, OutlierPlan{}};
  result.plan.seed = seed;
  std::vector<int> eligible;
  for (int r = 0; r < train.samples(); ++r) {
    const double v = train.features(r, feature);
    for (const auto& [a, b] : pairs) {
      if (v == a || v == b) {
        eligible.push_back(r);
        break;
      }
    }
  }
  Rng rng(StreamSeed(seed, 0x5a1b));
  Shuffle(eligible, rng);
  if (static_cast<int>(eligible.size()) > count) eligible.resize(static_cast<size_t>(count));
  std::sort(eligible.begin(), eligible.end());
  for (int r : eligible) {
    const double v = train.features(r, feature);
    double swapped = v;
    for (const auto& [a, b] : pairs) {
      if (v == a) {
        swapped = b;
        break;
      }
      if (v == b) {
        swapped = a;
        break;
      }
    }
    result.data.features(r, feature) = swapped;
    result.plan.placements.push_back({r, feature, swapped, v});
  }
  const int total = train.samples() * train.num_features();
  result.plan.budget_fraction =
      total > 0 ? static_cast<double>(eligible.size()) / total : 0.0;
  return result;
}

DetectionCurve MakeDetectionCurve(const ValueGrid& values, const BlockGrid& grid,
                                  const OutlierPlan& plan) {
  const int n = grid.n();
  const int m = grid.m();
  if (values.n() != n || values.m() != m) {
    throw std::invalid_argument("values do not match the partition");
  }
  std::vector<char> planted(static_cast<size_t>(n) * m, 0);
  for (const auto& p : plan.placements) {
    planted[static_cast<size_t>(grid.row_group_of(p.sample)) * m +
            grid.col_group_of(p.feature)] = 1;
  }
  const int planted_count =
      static_cast<int>(std::count(planted.begin(), planted.end(), 1));
  std::vector<int> order(static_cast<size_t>(n) * m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values.values.data()[static_cast<size_t>(a)] <
           values.values.data()[static_cast<size_t>(b)];
  });
  DetectionCurve curve;
  int found = 0;
  for (size_t k = 0; k < order.size(); ++k) {
    found += planted[static_cast<size_t>(order[k])];
    curve.inspected.push_back(static_cast<int>(k) + 1);
    curve.detected_fraction.push_back(
        planted_count == 0 ? 1.0
                           : static_cast<double>(found) / planted_count);
  }
  return curve;
}

double RecallAt(const DetectionCurve& curve, double fraction) {
  if (curve.inspected.empty()) return 1.0;
  const auto total = static_cast<double>(curve.inspected.size());
  const auto k = static_cast<size_t>(std::ceil(fraction * total - 1e-9));
  if (k == 0) return 0.0;
  return curve.detected_fraction[std::min(k, curve.inspected.size()) - 1];
}

double SpearmanCorrelation(const std::vector<double>& a,
                           const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("Spearman: length mismatch");
  }
  if (a.size() < 2) return 0.0;
  const std::vector<double> ra = AverageRanks(a);
  const std::vector<double> rb = AverageRanks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (size_t k = 0; k < ra.size(); ++k) {
    cov += (ra[k] - mean) * (rb[k] - mean);
    va += (ra[k] - mean) * (ra[k] - mean);
    vb += (rb[k] - mean) * (rb[k] - mean);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

BlockPerformanceTable BlockValueVsPerformance(const Dataset& train,
                                              const Dataset& test,
                                              const BlockGrid& grid,
                                              const ValueGrid& values,
                                              const LearnerSpec& learner) {
  if (values.n() != grid.n() || values.m() != grid.m()) {
    throw std::invalid_argument("values do not match the partition");
  }
  std::vector<int> all_test(static_cast<size_t>(test.samples()));
  std::iota(all_test.begin(), all_test.end(), 0);
  BlockPerformanceTable table;
  std::vector<double> v, acc;
  for (int i = 0; i < grid.n(); ++i) {
    for (int j = 0; j < grid.m(); ++j) {
      const Dataset fit = train.Subset(grid.row_members(i), grid.col_members(j));
      const Dataset eval = test.Subset(all_test, grid.col_members(j));
      const double accuracy = TrainAndScore(fit, eval, learner);
      table.rows.push_back({i, j, values.values(i, j), accuracy});
      v.push_back(values.values(i, j));
      acc.push_back(accuracy);
    }
  }
  table.spearman = SpearmanCorrelation(v, acc);
  return table;
}

std::vector<AblationEntry> AblationOutlierBudget(const Dataset& train,
                                                 const Dataset& test,
                                                 const AblationConfig& config) {
  const BlockGrid cells = BlockGrid::Cells(train.samples(), train.num_features());
  std::vector<AblationEntry> out;
  for (double budget : config.budgets) {
    for (uint64_t seed : config.seeds) {
      OutlierParams params;
      params.budget_fraction = budget;
      params.density_quantile = config.density_quantile;
      params.seed = seed;
      const InjectionResult injected = InjectOutliers(train, params);
      KnnConfig knn = config.knn;
      knn.seed = seed;
      const ValueGrid values = Knn2dValues(injected.data, test, cells, knn);
      out.push_back({budget, seed, MakeDetectionCurve(values, cells, injected.plan)});
    }
  }
  return out;
}

}  // namespace fragshap
