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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances and budgets are pinned here.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fragshap/baseline.h"
#include "fragshap/cli.h"
#include "fragshap/dataset.h"
#include "fragshap/exact.h"
#include "fragshap/experiments.h"
#include "fragshap/knn_shapley.h"
#include "fragshap/monte_carlo.h"
#include "fragshap/random.h"
#include "fragshap/utility.h"
#include "oracles.h"

namespace fragshap {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), format, a, b, c, d);
  return buffer;
}

std::vector<SyntheticGame> SmallGames(int per_shape, uint64_t seed) {
  std::vector<SyntheticGame> games;
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= 3; ++m) {
      for (int k = 0; k < per_shape; ++k) {
        games.push_back(
            SyntheticGame::Random(n, m, StreamSeed(seed, games.size())));
      }
    }
  }
  return games;
}

// 1. Weight system residuals for 1 <= n, m <= 8 within one second.
Outcome WeightSystem() {
  const auto start = Clock::now();
  double worst = 0.0;
  bool all = true;
  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= 8; ++m) {
      const WeightRecursionReport r = VerifyWeightRecursion(n, m);
      worst = std::max(worst, r.max_residual);
      all = all && r.pass;
    }
  }
  const double t = Since(start);
  return {all && worst < 1e-12 && t < 1.0,
          Fmt("max residual %.3g (tol 1e-12), %.3f s (limit 1 s)", worst, t)};
}

// 2. Exact, weighted-subset, permutation-average and exhaustive MC agree.
Outcome OracleEquivalence() {
  const auto start = Clock::now();
  const auto games = SmallGames(3, 2);
  double worst = 0.0;
  for (const SyntheticGame& g : games) {
    const UtilityFn h = g.AsUtility();
    McConfig mc;
    mc.exhaustive = true;
    const std::vector<Matrix> forms = {
        ExactValues(h, g.n(), g.m()).values,
        WeightedSubsetValues(h, g.n(), g.m()).values,
        PermutationAverageValues(h, g.n(), g.m()).values,
        McValues(h, g.n(), g.m(), mc).values,
        oracle::Shapley2dBySubsets(h, g.n(), g.m())};
    for (size_t a = 0; a < forms.size(); ++a) {
      for (size_t b = a + 1; b < forms.size(); ++b) {
        worst = std::max(worst, MaxAbsDiff(forms[a], forms[b]));
      }
    }
  }
  const double t = Since(start);
  return {games.size() >= 20 && worst < 1e-10 && t < 10.0,
          Fmt("%g games, max pairwise diff %.3g (tol 1e-10), %.3f s (limit 10 s)",
              static_cast<double>(games.size()), worst, t)};
}

// 3. Axioms of the exact values on small random games.
Outcome AxiomSuite() {
  const GameValueFn psi = [](const SyntheticGame& g) {
    return ExactValues(g.AsUtility(), g.n(), g.m()).values;
  };
  const auto checks = VerifyAxioms(psi, SmallGames(3, 3), 1e-10, 3);
  bool all = checks.size() == 4;
  std::string detail;
  for (const CheckResult& c : checks) {
    all = all && c.pass;
    detail += c.check + "=" + Fmt("%.3g", c.max_residual) + " ";
  }
  return {all, detail + "(tol 1e-10)"};
}

// 4. Row and column sums equal brute-force 1D Shapley of the restricted games.
Outcome ReductionBridge() {
  double worst = 0.0;
  for (const SyntheticGame& g : SmallGames(2, 4)) {
    const int n = g.n();
    const int m = g.m();
    const UtilityFn h = g.AsUtility();
    const ValueGrid v = ExactValues(h, n, m);
    const auto rows = ReduceTo1d(v, SumOver::kColumns);
    const auto cols = ReduceTo1d(v, SumOver::kRows);
    const auto want_rows = oracle::Shapley1d(n, [&](uint64_t s) {
      return oracle::SafeValue(h, s, (uint64_t{1} << m) - 1);
    });
    const auto want_cols = oracle::Shapley1d(m, [&](uint64_t f) {
      return oracle::SafeValue(h, (uint64_t{1} << n) - 1, f);
    });
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(rows[i] - want_rows[i]));
    for (int j = 0; j < m; ++j) worst = std::max(worst, std::abs(cols[j] - want_cols[j]));
  }
  return {worst < 1e-10, Fmt("max diff %.3g (tol 1e-10)", worst)};
}

// 5. KNN recursion against brute force over all sample subsets.
Outcome KnnRecursion() {
  const auto start = Clock::now();
  double worst = 0.0;
  const int ks[] = {1, 3, 5};
  for (int d = 0; d < 50; ++d) {
    SyntheticDataOptions gen;
    gen.samples = 2 + d % 7;
    gen.features = 3;
    gen.informative = 3;
    gen.separation = 1.0;
    gen.seed = StreamSeed(5, d);
    const Dataset train = MakeSyntheticClassification(gen);
    gen.samples = 3;
    gen.seed = StreamSeed(6, d);
    const Dataset test = MakeSyntheticClassification(gen);
    KnnConfig cfg;
    cfg.k = ks[d % 3];
    cfg.standardize = false;
    const std::vector<int> cols = {0, 1, 2};
    const auto got = KnnSampleValues(train, test, cols, cfg);
    std::vector<double> want(static_cast<size_t>(train.samples()), 0.0);
    for (int t = 0; t < test.samples(); ++t) {
      std::vector<double> dist(static_cast<size_t>(train.samples()), 0.0);
      for (int r = 0; r < train.samples(); ++r) {
        for (int c : cols) {
          const double diff = train.features(r, c) - test.features(t, c);
          dist[r] += diff * diff;
        }
      }
      const auto phi = oracle::Shapley1d(train.samples(), [&](uint64_t s) {
        return oracle::KnnUtility(dist, train.labels, test.labels[t], cfg.k, s);
      });
      for (int r = 0; r < train.samples(); ++r) want[r] += phi[r] / test.samples();
    }
    for (size_t r = 0; r < want.size(); ++r) {
      worst = std::max(worst, std::abs(got[r] - want[r]));
    }
  }
  const double t = Since(start);
  return {worst < 1e-10 && t < 30.0,
          Fmt("50 datasets, max diff %.3g (tol 1e-10), %.3f s (limit 30 s)", worst, t)};
}

// 6. Marginals of one ordering pair telescope to h(N, M).
Outcome Telescoping() {
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 5;
    const int m = 1 + (k / 5) % 5;
    const SyntheticGame g = SyntheticGame::Random(n, m, StreamSeed(6, k));
    const Matrix v = PermutationMarginals(g.AsUtility(),
                                          PermutationPair::Sample(n, m, 66, k));
    worst = std::max(worst, std::abs(v.Sum() - g.GrandValue()));
  }
  return {worst < 1e-10, Fmt("100 pairs, max |sum - h(N,M)| %.3g (tol 1e-10)", worst)};
}

// 7. n*m cold utility calls per ordering pair; m sweeps per feature ordering.
Outcome EvaluationEconomy() {
  SyntheticDataOptions gen;
  gen.samples = 24;
  gen.features = 6;
  gen.informative = 6;
  const Dataset train = MakeSyntheticClassification(gen);
  gen.seed = 1;
  gen.samples = 12;
  const Dataset test = MakeSyntheticClassification(gen);
  const BlockGrid grid = BlockGrid::Uniform(24, 6, 8, 5);
  const UtilityOracle oracle(train, test, grid, LearnerSpec{});
  PermutationMarginals(oracle.AsUtility(), PermutationPair::Sample(8, 5, 7, 0));
  const int64_t evaluations = oracle.evaluation_count();

  KnnConfig cfg;
  cfg.feature_permutations = 1;
  KnnRunStats stats;
  Knn2dValues(train, test, BlockGrid::Uniform(24, 6, 24, 6), cfg, &stats);
  return {evaluations == 40 && stats.sweeps == 6,
          Fmt("mc: %g evaluations on 8x5 (want 40); knn: %g sweeps for m=6 (want 6)",
              static_cast<double>(evaluations), static_cast<double>(stats.sweeps))};
}

// Shared dataset of criteria 8 and 9.
struct DeskData {
  Dataset train;
  Dataset test;
};

DeskData MakeDeskData() {
  SyntheticDataOptions gen;
  gen.samples = 200;
  gen.features = 10;
  gen.informative = 10;
  gen.separation = 2.0;
  gen.seed = 2024;
  DeskData d;
  d.train = MakeSyntheticClassification(gen);
  gen.samples = 100;
  gen.seed = 2025;
  d.test = MakeSyntheticClassification(gen);
  return d;
}

constexpr int kSeeds = 5;

// 8. Outlier recall at 10% inspection, KNN values vs the flattened baseline.
Outcome OutlierDetection(const DeskData& data) {
  const auto start = Clock::now();
  const BlockGrid cells = BlockGrid::Cells(200, 10);
  LearnerSpec learner;
  double knn_recall = 0.0;
  double base_recall = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    OutlierParams params;
    params.budget_fraction = 0.02;
    params.seed = 100 + s;
    const InjectionResult injected = InjectOutliers(data.train, params);
    KnnConfig knn;
    knn.seed = 200 + s;
    knn.workers = 4;
    const ValueGrid kv = Knn2dValues(injected.data, data.test, cells, knn);
    knn_recall += RecallAt(MakeDetectionCurve(kv, cells, injected.plan), 0.10);
    PermutationShapleyConfig base;
    base.budget = 20;
    base.seed = 300 + s;
    base.workers = 4;
    const ValueGrid bv =
        Baseline1dValues(injected.data, data.test, cells, learner, base);
    base_recall += RecallAt(MakeDetectionCurve(bv, cells, injected.plan), 0.10);
  }
  knn_recall /= kSeeds;
  base_recall /= kSeeds;
  const double t = Since(start);
  return {knn_recall >= 0.70 && knn_recall > base_recall && t < 300.0,
          Fmt("recall@10%%: knn %.3f (need >= 0.70), baseline %.3f (need knn >), "
              "%.1f s (limit 300 s)",
              knn_recall, base_recall, t)};
}

// 9. Descending removal hurts more than random removal after 20% of cells.
Outcome RemovalSanity(const DeskData& data) {
  const BlockGrid cells = BlockGrid::Cells(200, 10);
  LearnerSpec learner;
  double descending = 0.0;
  double random = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    KnnConfig knn;
    knn.seed = 400 + s;
    knn.workers = 4;
    const ValueGrid v = Knn2dValues(data.train, data.test, cells, knn);
    for (RemovalOrder order : {RemovalOrder::kDescending, RemovalOrder::kRandom}) {
      const RemovalCurve curve =
          RemoveCells(data.train, data.test, RankCells(v, cells, order, 500 + s),
                      100, order, learner);
      const double acc = AccuracyAfterFraction(curve, 2000, 0.2);
      (order == RemovalOrder::kDescending ? descending : random) += acc / kSeeds;
    }
  }
  return {descending < random,
          Fmt("accuracy after 20%% removed: descending %.3f, random %.3f "
              "(need descending <)",
              descending, random)};
}

// 10. KNN engine at least 5x faster than MC at 1,000 cells.
Outcome RuntimeOrdering() {
  SyntheticDataOptions gen;
  gen.samples = 50;
  gen.features = 20;
  gen.informative = 20;
  gen.seed = 10;
  const Dataset train = MakeSyntheticClassification(gen);
  gen.samples = 40;
  gen.seed = 11;
  const Dataset test = MakeSyntheticClassification(gen);
  const BlockGrid cells = BlockGrid::Cells(50, 20);
  const StopRule rule{100, 1e-3, 20};

  auto start = Clock::now();
  KnnConfig knn;
  knn.feature_permutations = rule.budget;
  knn.epsilon = rule.epsilon;
  knn.window = rule.window;
  knn.workers = 1;
  Knn2dValues(train, test, cells, knn);
  const double knn_time = Since(start);

  start = Clock::now();
  const UtilityOracle oracle(train, test, cells, LearnerSpec{});
  McConfig mc;
  mc.stop = rule;
  mc.workers = 1;
  McValues(oracle.AsUtility(), 50, 20, mc);
  const double mc_time = Since(start);
  return {knn_time * 5.0 < mc_time,
          Fmt("1000 cells: knn %.3f s, mc %.3f s, ratio %.1f (need > 5)", knn_time,
              mc_time, mc_time / std::max(knn_time, 1e-9))};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fragshap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream sink;
  return RunCli(static_cast<int>(argv.size()), argv.data(), sink, sink);
}

// 11. Byte-identical values across reruns and worker counts.
Outcome Determinism() {
  const fs::path root = fs::temp_directory_path() / "fragshap_acceptance";
  fs::remove_all(root);
  struct Case {
    std::string command;
    std::vector<std::string> args;
  };
  const std::vector<Case> cases = {
      {"value-exact", {"--synthetic", "24x4", "--partition", "grid:4x4"}},
      {"value-mc", {"--synthetic", "24x4", "--partition", "grid:6x4", "--budget", "40"}},
      {"value-knn", {"--synthetic", "40x6", "--perms", "60"}},
      {"value-1d", {"--synthetic", "12x3", "--budget", "10"}},
  };
  int identical = 0;
  std::string failed;
  for (const Case& c : cases) {
    std::vector<std::string> outputs;
    int run = 0;
    for (const char* workers : {"1", "1", "4"}) {
      const fs::path dir = root / (c.command + std::to_string(run++));
      std::vector<std::string> args = {c.command};
      args.insert(args.end(), c.args.begin(), c.args.end());
      args.insert(args.end(), {"--seed", "17", "--workers", workers, "--quiet",
                               "--out", dir.string()});
      if (Cli(args) != 0) {
        outputs.push_back("run failed");
        continue;
      }
      outputs.push_back(Slurp(dir / "values.csv") + Slurp(dir / "values.json"));
    }
    if (outputs[0] == outputs[1] && outputs[0] == outputs[2] &&
        outputs[0] != "run failed") {
      ++identical;
    } else {
      failed += " " + c.command;
    }
  }
  fs::remove_all(root);
  return {identical == static_cast<int>(cases.size()),
          Fmt("%g of %g engines byte-identical over 2 runs and workers {1,4}",
              identical, static_cast<double>(cases.size())) +
              failed};
}

}  // namespace
}  // namespace fragshap

int main() {
  using namespace fragshap;
  const DeskData desk = MakeDeskData();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"weight-system", WeightSystem},
      {"oracle-equivalence", OracleEquivalence},
      {"axiom-suite", AxiomSuite},
      {"row-column-reduction", ReductionBridge},
      {"knn-recursion", KnnRecursion},
      {"permutation-telescoping", Telescoping},
      {"evaluation-economy", EvaluationEconomy},
      {"outlier-detection", [&] { return OutlierDetection(desk); }},
      {"removal-sanity", [&] { return RemovalSanity(desk); }},
      {"runtime-ordering", RuntimeOrdering},
      {"determinism", Determinism},
  };
  int failures = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
