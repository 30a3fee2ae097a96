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

#include "fragshap/cli.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fragshap/baseline.h"
#include "fragshap/dataset.h"
#include "fragshap/exact.h"
#include "fragshap/experiments.h"
#include "fragshap/grid.h"
#include "fragshap/knn_shapley.h"
#include "fragshap/learners.h"
#include "fragshap/monte_carlo.h"
#include "fragshap/parallel.h"
#include "fragshap/random.h"
#include "fragshap/report.h"
#include "fragshap/utility.h"
#include "json.hpp"

namespace fragshap {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Thrown for invalid user input; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  // Data.
  std::string train_path;
  std::string test_path;
  double test_frac = 0.3;
  std::string label_col = "label";
  bool impute_mean = false;
  std::string synthetic;
  int synthetic_test = 100;
  double separation = 2.0;
  std::string partition = "cells";

  // Learner used by the utility.
  std::string learner = "knn_classifier";
  int learner_k = 5;
  int lr_steps = 200;
  double lr_rate = 0.1;
  bool no_standardize = false;

  // Engines.
  int64_t budget = 500;
  double epsilon = 1e-3;
  int window = 20;
  int knn_k = 5;
  int64_t perms = 500;
  int cap = kDefaultEnumerationCap;
  std::string engine = "knn";
  std::string engines = "knn,baseline1d";

  // Runs.
  uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir = "fragshap_out";
  int workers = DefaultWorkers();
  bool quiet = false;

  // verify-*.
  int n = 2;
  int m = 2;
  int games = 20;
  double tol = 1e-10;

  // Experiments.
  int batch = 0;
  std::string orders = "ascending,descending,random";
  double budget_fraction = 0.02;
  double quantile = 0.05;
  std::vector<double> budgets = {0.01, 0.02, 0.05, 0.10, 0.15};
  int seeds = 5;
  int cells = 1000;
  int features = 20;
  int bench_test = 40;
};

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::pair<int, int> ParseDims(const std::string& text, const char* what) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + " must look like ROWSxCOLS, got '" +
                     text + "'");
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << body;
}

void WriteJson(const fs::path& path, const json& doc) {
  WriteFile(path, doc.dump(2) + "\n");
}

struct Data {
  Dataset train;
  Dataset test;
};

Data LoadData(const Options& o) {
  if (!o.synthetic.empty()) {
    const auto [rows, cols] = ParseDims(o.synthetic, "--synthetic");
    SyntheticDataOptions gen;
    gen.samples = rows;
    gen.features = cols;
    gen.informative = cols;
    gen.separation = o.separation;
    gen.seed = o.seed;
    Data data;
    data.train = MakeSyntheticClassification(gen);
    gen.samples = o.synthetic_test;
    gen.seed = o.seed + 0x7e57;
    data.test = MakeSyntheticClassification(gen);
    return data;
  }
  if (o.train_path.empty()) {
    throw UsageError("a dataset is required: pass --train or --synthetic");
  }
  CsvOptions csv{o.label_col, o.impute_mean};
  if (!o.test_path.empty()) {
    auto encoded = EncodeLabels(
        {ReadCsvFile(o.train_path, csv), ReadCsvFile(o.test_path, csv)});
    return {std::move(encoded[0]), std::move(encoded[1])};
  }
  auto encoded = EncodeLabels({ReadCsvFile(o.train_path, csv)});
  auto [train, test] = TrainTestSplit(encoded[0], o.test_frac, o.seed);
  return {std::move(train), std::move(test)};
}

BlockGrid LoadPartition(const Options& o, const Dataset& train) {
  if (o.partition == "cells") {
    return BlockGrid::Cells(train.samples(), train.num_features());
  }
  if (o.partition.rfind("grid:", 0) == 0) {
    const auto [n, m] = ParseDims(o.partition.substr(5), "--partition grid:");
    return BlockGrid::Uniform(train.samples(), train.num_features(), n, m);
  }
  return ParsePartitionJson(ReadFile(o.partition), train.samples(),
                            train.num_features());
}

LearnerSpec MakeLearner(const Options& o) {
  LearnerSpec spec;
  spec.kind = ParseLearnerKind(o.learner);
  spec.k = o.learner_k;
  spec.lr_steps = o.lr_steps;
  spec.lr_rate = o.lr_rate;
  spec.standardize = !o.no_standardize;
  spec.Validate();
  return spec;
}

ProgressFn MakeProgress(const Options& o, std::ostream& err, const char* tag) {
  if (o.quiet) return nullptr;
  return [&err, tag](int64_t t, double step) {
    if (t % 10 == 0) {
      err << tag << " permutations=" << t << " step=" << step << '\n';
    }
  };
}

KnnConfig MakeKnnConfig(const Options& o, std::ostream& err) {
  KnnConfig cfg;
  cfg.k = o.knn_k;
  cfg.feature_permutations = o.perms;
  cfg.epsilon = o.epsilon;
  cfg.window = o.window;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.progress = MakeProgress(o, err, "knn");
  cfg.Validate();
  return cfg;
}

McConfig MakeMcConfig(const Options& o, std::ostream& err) {
  McConfig cfg;
  cfg.stop = StopRule{o.budget, o.epsilon, o.window};
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.progress = MakeProgress(o, err, "mc");
  if (o.budget < 1) throw UsageError("--budget must be >= 1");
  if (o.window < 1) throw UsageError("--window must be >= 1");
  return cfg;
}

PermutationShapleyConfig MakeBaselineConfig(const Options& o, std::ostream& err) {
  if (o.budget < 1) throw UsageError("--budget must be >= 1");
  PermutationShapleyConfig cfg;
  cfg.budget = o.budget;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.progress = MakeProgress(o, err, "1d");
  return cfg;
}

json ResolvedConfig(const std::string& command, const Options& o) {
  return {{"command", command},
          {"data",
           {{"train", o.train_path},
            {"test", o.test_path},
            {"test_frac", o.test_frac},
            {"label_col", o.label_col},
            {"impute_mean", o.impute_mean},
            {"synthetic", o.synthetic},
            {"synthetic_test", o.synthetic_test},
            {"separation", o.separation}}},
          {"partition", o.partition},
          {"learner",
           {{"kind", o.learner},
            {"k", o.learner_k},
            {"lr_steps", o.lr_steps},
            {"lr_rate", o.lr_rate},
            {"standardize", !o.no_standardize}}},
          {"engine",
           {{"budget", o.budget},
            {"epsilon", o.epsilon},
            {"window", o.window},
            {"knn_k", o.knn_k},
            {"perms", o.perms},
            {"cap", o.cap}}},
          {"seed", o.seed},
          {"workers", o.workers}};
}

// Computes block values with the named engine.
ValueGrid ComputeValues(const std::string& engine, const Options& o,
                        const Data& data, const BlockGrid& grid,
                        std::ostream& err, json* extra) {
  if (engine == "knn") {
    KnnRunStats stats;
    ValueGrid v =
        Knn2dValues(data.train, data.test, grid, MakeKnnConfig(o, err), &stats);
    if (extra) (*extra)["stats"]["knn_sweeps"] = stats.sweeps;
    return v;
  }
  if (engine == "baseline1d") {
    return Baseline1dValues(data.train, data.test, grid, MakeLearner(o),
                            MakeBaselineConfig(o, err));
  }
  if (engine == "mc" || engine == "exact") {
    const UtilityOracle oracle(data.train, data.test, grid, MakeLearner(o));
    ValueGrid v;
    if (engine == "mc") {
      v = McValues(oracle.AsUtility(), grid.n(), grid.m(), MakeMcConfig(o, err));
    } else {
      v = ExactValues(oracle.AsUtility(), grid.n(), grid.m(),
                      ExactOptions{o.cap, o.workers});
    }
    if (extra) {
      const CacheStats stats = oracle.cache_stats();
      // Concurrent misses on one key may both count, so these are
      // reported with the timings rather than with the values.
      (*extra)["stats"]["cache_hits"] = stats.hits;
      (*extra)["stats"]["cache_misses"] = stats.misses;
      (*extra)["grand_utility"] = oracle.Evaluate(
          Coalition{GroupSet::Full(grid.n()), GroupSet::Full(grid.m())});
    }
    return v;
  }
  throw UsageError("unknown engine '" + engine + "'");
}

void WriteValues(const fs::path& dir, const std::string& stem,
                 const ValueGrid& values, const BlockGrid& grid,
                 const Dataset& train, const json& extra) {
  std::ostringstream csv;
  WriteValuesCsv(csv, values, MakeGroupLabels(grid, train.feature_names));
  WriteFile(dir / (stem + ".csv"), csv.str());
  json meta = ValueGridMetadata(values);
  for (const auto& [key, value] : extra.items()) {
    if (key != "stats") meta[key] = value;
  }
  WriteJson(dir / (stem + ".json"), meta);
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int RunValue(const std::string& command, const std::string& engine,
             const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const Data data = LoadData(o);
  const BlockGrid grid = LoadPartition(o, data.train);
  json extra = json::object();
  const ValueGrid values = ComputeValues(engine, o, data, grid, err, &extra);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  WriteValues(dir, "values", values, grid, data.train, extra);
  WriteJson(dir / "config.json", ResolvedConfig(command, o));
  json timing = {{"wall_seconds", Seconds(start)}};
  if (extra.contains("stats")) timing["stats"] = extra["stats"];
  WriteJson(dir / "timing.json", timing);
  out << command << ": " << values.n() << "x" << values.m() << " values, sum "
      << FormatDouble(values.values.Sum()) << ", written to "
      << (dir / "values.csv").string() << '\n';
  return 0;
}

int RunVerifyWeights(const Options& o, std::ostream& out) {
  if (o.n < 1 || o.m < 1 || o.n > kMaxGroups || o.m > kMaxGroups) {
    throw UsageError("--n and --m must lie in [1, 64]");
  }
  const WeightRecursionReport report = VerifyWeightRecursion(o.n, o.m);
  const json doc = ToJson(report);
  fs::create_directories(o.out_dir);
  WriteJson(fs::path(o.out_dir) / "weights.json", doc);
  out << doc.dump(2) << '\n';
  return report.pass ? 0 : 1;
}

int RunVerifyAxioms(const Options& o, std::ostream& out) {
  if (o.n < 1 || o.m < 1 || o.n + o.m > 10) {
    throw UsageError("--n and --m must be >= 1 with n + m <= 10");
  }
  if (o.games < 1) throw UsageError("--games must be >= 1");
  std::vector<SyntheticGame> games;
  for (int g = 0; g < o.games; ++g) {
    games.push_back(SyntheticGame::Random(o.n, o.m, StreamSeed(o.seed, g)));
  }
  const GameValueFn psi = [&](const SyntheticGame& game) {
    return ExactValues(game.AsUtility(), game.n(), game.m()).values;
  };
  const auto checks = VerifyAxioms(psi, games, o.tol, o.seed);
  const json doc = ToJson(checks);
  fs::create_directories(o.out_dir);
  WriteJson(fs::path(o.out_dir) / "axioms.json", doc);
  out << doc.dump(2) << '\n';
  for (const auto& c : checks) {
    if (!c.pass) return 1;
  }
  return 0;
}

int RunExpRemove(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const Data data = LoadData(o);
  const BlockGrid grid = LoadPartition(o, data.train);
  const LearnerSpec learner = MakeLearner(o);
  json extra = json::object();
  const ValueGrid values = ComputeValues(o.engine, o, data, grid, err, &extra);
  const int total = data.train.samples() * data.train.num_features();
  const int batch = o.batch > 0 ? o.batch : std::max(1, total / 20);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  WriteValues(dir, "values", values, grid, data.train, extra);
  json report = {{"engine", o.engine}, {"total_cells", total}, {"curves", json::array()}};
  for (const auto& name : SplitList(o.orders)) {
    const RemovalOrder order = ParseRemovalOrder(name);
    const RemovalCurve curve =
        RemoveCells(data.train, data.test, RankCells(values, grid, order, o.seed),
                    batch, order, learner);
    std::ostringstream csv;
    WriteRemovalCsv(csv, curve);
    WriteFile(dir / ("removal_" + name + ".csv"), csv.str());
    report["curves"].push_back(ToJson(curve));
    out << "removal " << name << ": accuracy " << FormatDouble(curve.accuracies.front())
        << " -> " << FormatDouble(AccuracyAfterFraction(curve, total, 0.2))
        << " after 20% removed\n";
  }
  WriteJson(dir / "report.json", report);
  WriteJson(dir / "config.json", ResolvedConfig("exp-remove", o));
  WriteJson(dir / "timing.json", {{"wall_seconds", Seconds(start)}});
  return 0;
}

int RunExpOutliers(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const Data data = LoadData(o);
  OutlierParams params;
  params.budget_fraction = o.budget_fraction;
  params.density_quantile = o.quantile;
  params.seed = o.seed;
  const InjectionResult injected = InjectOutliers(data.train, params);
  for (const auto& w : injected.plan.warnings) err << "warning: " << w << '\n';
  const Data corrupted{injected.data, data.test};
  const BlockGrid grid =
      BlockGrid::Cells(data.train.samples(), data.train.num_features());
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  json report = {{"plan", ToJson(injected.plan)}, {"engines", json::object()}};
  for (const auto& engine : SplitList(o.engines)) {
    json extra = json::object();
    const ValueGrid values = ComputeValues(engine, o, corrupted, grid, err, &extra);
    const DetectionCurve curve = MakeDetectionCurve(values, grid, injected.plan);
    WriteValues(dir, "values_" + engine, values, grid, corrupted.train, extra);
    std::ostringstream csv;
    WriteDetectionCsv(csv, curve);
    WriteFile(dir / ("detection_" + engine + ".csv"), csv.str());
    report["engines"][engine] = {{"recall_at_5pct", RecallAt(curve, 0.05)},
                                 {"recall_at_10pct", RecallAt(curve, 0.10)},
                                 {"curve", ToJson(curve)}};
    out << engine << ": recall " << FormatDouble(RecallAt(curve, 0.05))
        << " at 5% inspected, " << FormatDouble(RecallAt(curve, 0.10))
        << " at 10%\n";
  }
  WriteJson(dir / "report.json", report);
  WriteJson(dir / "config.json", ResolvedConfig("exp-outliers", o));
  WriteJson(dir / "timing.json", {{"wall_seconds", Seconds(start)}});
  return 0;
}

int RunExpAblation(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const Data data = LoadData(o);
  if (o.seeds < 1) throw UsageError("--seeds must be >= 1");
  AblationConfig cfg;
  cfg.budgets = o.budgets;
  cfg.seeds.clear();
  for (int s = 0; s < o.seeds; ++s) cfg.seeds.push_back(o.seed + s);
  cfg.density_quantile = o.quantile;
  cfg.knn = MakeKnnConfig(o, err);
  const auto entries = AblationOutlierBudget(data.train, data.test, cfg);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  json report = json::array();
  std::map<double, std::pair<double, int>> mean_recall;
  for (const auto& e : entries) {
    std::ostringstream csv;
    WriteDetectionCsv(csv, e.curve);
    WriteFile(dir / ("detection_b" + FormatDouble(e.budget) + "_s" +
                     std::to_string(e.seed) + ".csv"),
              csv.str());
    report.push_back({{"budget", e.budget},
                      {"seed", e.seed},
                      {"recall_at_5pct", RecallAt(e.curve, 0.05)},
                      {"recall_at_10pct", RecallAt(e.curve, 0.10)}});
    auto& acc = mean_recall[e.budget];
    acc.first += RecallAt(e.curve, 0.10);
    acc.second += 1;
  }
  for (const auto& [budget, acc] : mean_recall) {
    out << "budget " << FormatDouble(budget) << ": mean recall at 10% = "
        << FormatDouble(acc.first / acc.second) << '\n';
  }
  WriteJson(dir / "report.json", report);
  WriteJson(dir / "config.json", ResolvedConfig("exp-ablation", o));
  WriteJson(dir / "timing.json", {{"wall_seconds", Seconds(start)}});
  return 0;
}

int RunExpBlocks(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const Data data = LoadData(o);
  const BlockGrid grid = LoadPartition(o, data.train);
  json extra = json::object();
  const ValueGrid values = ComputeValues(o.engine, o, data, grid, err, &extra);
  const BlockPerformanceTable table = BlockValueVsPerformance(
      data.train, data.test, grid, values, MakeLearner(o));
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  WriteValues(dir, "values", values, grid, data.train, extra);
  std::ostringstream csv;
  WriteBlockTableCsv(csv, table);
  WriteFile(dir / "blocks.csv", csv.str());
  WriteJson(dir / "report.json", ToJson(table));
  WriteJson(dir / "config.json", ResolvedConfig("exp-blocks", o));
  WriteJson(dir / "timing.json", {{"wall_seconds", Seconds(start)}});
  out << "exp-blocks: " << table.rows.size()
      << " blocks, Spearman(value, standalone accuracy) = "
      << FormatDouble(table.spearman) << '\n';
  return 0;
}

int RunBenchRuntime(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.features < 1 || o.cells < o.features) {
    throw UsageError("--cells must be at least --features");
  }
  Options bench = o;
  bench.synthetic = std::to_string(o.cells / o.features) + "x" +
                    std::to_string(o.features);
  bench.synthetic_test = o.bench_test;
  const Data data = LoadData(bench);
  const BlockGrid grid =
      BlockGrid::Cells(data.train.samples(), data.train.num_features());
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);

  json rows = json::array();
  std::ostringstream csv;
  csv << "engine,cells,wall_seconds,permutations,converged,extrapolated\n";
  auto record = [&](const std::string& engine, double seconds, double perms,
                    bool converged, bool extrapolated) {
    rows.push_back({{"engine", engine},
                    {"cells", grid.n() * grid.m()},
                    {"wall_seconds", seconds},
                    {"permutations", perms},
                    {"converged", converged},
                    {"extrapolated", extrapolated}});
    csv << engine << ',' << grid.n() * grid.m() << ',' << FormatDouble(seconds)
        << ',' << FormatDouble(perms) << ',' << (converged ? 1 : 0) << ','
        << (extrapolated ? 1 : 0) << '\n';
    out << engine << ": " << FormatDouble(seconds) << " s ("
        << FormatDouble(perms) << " permutations"
        << (extrapolated ? ", extrapolated" : "") << ")\n";
  };
  for (const auto& engine : SplitList(o.engines)) {
    if (engine == "exact") {
      // One ordering pair, scaled by the number of pairs n! * m!.
      const UtilityOracle oracle(data.train, data.test, grid, MakeLearner(bench));
      const auto start = Clock::now();
      PermutationMarginals(oracle.AsUtility(),
                           PermutationPair::Sample(grid.n(), grid.m(), o.seed, 0));
      const double one = Seconds(start);
      const double pairs = std::exp(std::lgamma(grid.n() + 1.0) +
                                    std::lgamma(grid.m() + 1.0));
      record("exact", one * pairs, pairs, true, true);
    } else if (engine == "mc" || engine == "knn") {
      const auto start = Clock::now();
      const ValueGrid v = ComputeValues(engine, bench, data, grid, err, nullptr);
      record(engine, Seconds(start), static_cast<double>(v.permutations_used),
             v.converged, false);
    } else {
      throw UsageError("bench-runtime engines are exact, mc and knn");
    }
  }
  WriteFile(dir / "runtime.csv", csv.str());
  WriteJson(dir / "runtime.json", rows);
  WriteJson(dir / "config.json", ResolvedConfig("bench-runtime", bench));
  return 0;
}

void AddDataOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--train", o.train_path, "Training CSV (header row required)");
  cmd->add_option("--test", o.test_path, "Test CSV; omit to split --train");
  cmd->add_option("--test-frac", o.test_frac, "Held-out fraction when splitting")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--label-col", o.label_col, "Name of the label column");
  cmd->add_flag("--impute-mean", o.impute_mean,
                "Fill non-numeric feature cells with the column mean");
  cmd->add_option("--synthetic", o.synthetic,
                  "Generate a ROWSxCOLS Gaussian classification set instead");
  cmd->add_option("--synthetic-test", o.synthetic_test,
                  "Test rows for --synthetic");
  cmd->add_option("--separation", o.separation,
                  "Class separation for --synthetic");
  cmd->add_option("--partition", o.partition,
                  "Partition JSON file, 'cells', or 'grid:NxM'");
  cmd->add_option("--learner", o.learner,
                  "knn_classifier, logistic_regression or majority_class");
  cmd->add_option("--learner-k", o.learner_k, "Neighbors of the KNN learner");
  cmd->add_option("--lr-steps", o.lr_steps, "Logistic regression steps");
  cmd->add_option("--lr-rate", o.lr_rate, "Logistic regression step size");
  cmd->add_flag("--no-standardize", o.no_standardize,
                "Skip z-scoring inside the learner");
}

void AddRunOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Master seed (default: $FRAGSHAP_SEED or 0)")
      ->each([&o](const std::string&) { o.seed_given = true; });
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_option("--workers", o.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--quiet", o.quiet, "Suppress progress lines on stderr");
}

void AddStopOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--epsilon", o.epsilon, "Relative L-inf step tolerance");
  cmd->add_option("--window", o.window, "Consecutive small steps required");
}

void AddKnnOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--k", o.knn_k, "K of the KNN surrogate");
  cmd->add_option("--perms", o.perms, "Feature permutation budget");
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  Options o;
  CLI::App app{"fragshap: block and cell valuation of training data"};
  app.require_subcommand(1);
  app.name("fragshap");

  std::map<std::string, std::function<int()>> handlers;
  auto add = [&](const std::string& name, const std::string& help) {
    return app.add_subcommand(name, help);
  };

  CLI::App* value_exact = add("value-exact", "Exact block values by enumeration");
  AddDataOptions(value_exact, o);
  AddRunOptions(value_exact, o);
  value_exact->add_option("--cap", o.cap, "Enumeration cap on (n-1)+(m-1)");
  handlers["value-exact"] = [&] { return RunValue("value-exact", "exact", o, out, err); };

  CLI::App* value_mc = add("value-mc", "Monte Carlo block values");
  AddDataOptions(value_mc, o);
  AddRunOptions(value_mc, o);
  AddStopOptions(value_mc, o);
  value_mc->add_option("--budget", o.budget, "Maximum permutation pairs");
  handlers["value-mc"] = [&] { return RunValue("value-mc", "mc", o, out, err); };

  CLI::App* value_knn = add("value-knn", "KNN-surrogate block values");
  AddDataOptions(value_knn, o);
  AddRunOptions(value_knn, o);
  AddStopOptions(value_knn, o);
  AddKnnOptions(value_knn, o);
  handlers["value-knn"] = [&] { return RunValue("value-knn", "knn", o, out, err); };

  CLI::App* value_1d = add("value-1d", "Flattened one-dimensional baseline");
  AddDataOptions(value_1d, o);
  AddRunOptions(value_1d, o);
  value_1d->add_option("--budget", o.budget, "Permutations of the blocks");
  handlers["value-1d"] = [&] { return RunValue("value-1d", "baseline1d", o, out, err); };

  CLI::App* verify_axioms = add("verify-axioms", "Check the axioms on random games");
  AddRunOptions(verify_axioms, o);
  verify_axioms->add_option("--n", o.n, "Sample groups per game");
  verify_axioms->add_option("--m", o.m, "Feature groups per game");
  verify_axioms->add_option("--games", o.games, "Number of random games");
  verify_axioms->add_option("--tol", o.tol, "Residual tolerance");
  handlers["verify-axioms"] = [&] { return RunVerifyAxioms(o, out); };

  CLI::App* verify_weights = add("verify-weights", "Check the weight recursion");
  AddRunOptions(verify_weights, o);
  verify_weights->add_option("--n", o.n, "Sample groups")->required();
  verify_weights->add_option("--m", o.m, "Feature groups")->required();
  handlers["verify-weights"] = [&] { return RunVerifyWeights(o, out); };

  CLI::App* exp_remove = add("exp-remove", "Value-ordered cell removal curves");
  AddDataOptions(exp_remove, o);
  AddRunOptions(exp_remove, o);
  AddStopOptions(exp_remove, o);
  AddKnnOptions(exp_remove, o);
  exp_remove->add_option("--engine", o.engine, "knn, mc, exact or baseline1d");
  exp_remove->add_option("--budget", o.budget, "Permutation budget (mc, baseline1d)");
  exp_remove->add_option("--batch", o.batch, "Cells removed per step (default 5%)");
  exp_remove->add_option("--orders", o.orders, "Comma-separated removal orders");
  handlers["exp-remove"] = [&] { return RunExpRemove(o, out, err); };

  CLI::App* exp_outliers = add("exp-outliers", "Outlier injection and detection");
  AddDataOptions(exp_outliers, o);
  AddRunOptions(exp_outliers, o);
  AddStopOptions(exp_outliers, o);
  AddKnnOptions(exp_outliers, o);
  exp_outliers->add_option("--engines", o.engines, "Comma-separated engines");
  exp_outliers->add_option("--budget", o.budget, "Permutation budget (mc, baseline1d)");
  exp_outliers->add_option("--budget-fraction", o.budget_fraction,
                           "Fraction of cells to corrupt");
  exp_outliers->add_option("--quantile", o.quantile, "Density quantile threshold");
  handlers["exp-outliers"] = [&] { return RunExpOutliers(o, out, err); };

  CLI::App* exp_ablation = add("exp-ablation", "Detection over injection budgets");
  AddDataOptions(exp_ablation, o);
  AddRunOptions(exp_ablation, o);
  AddStopOptions(exp_ablation, o);
  AddKnnOptions(exp_ablation, o);
  exp_ablation->add_option("--budgets", o.budgets, "Injection fractions")
      ->delimiter(',');
  exp_ablation->add_option("--seeds", o.seeds, "Seeds per budget");
  exp_ablation->add_option("--quantile", o.quantile, "Density quantile threshold");
  handlers["exp-ablation"] = [&] { return RunExpAblation(o, out, err); };

  CLI::App* exp_blocks = add("exp-blocks", "Block value vs standalone accuracy");
  AddDataOptions(exp_blocks, o);
  AddRunOptions(exp_blocks, o);
  AddStopOptions(exp_blocks, o);
  AddKnnOptions(exp_blocks, o);
  exp_blocks->add_option("--engine", o.engine, "exact, mc or knn");
  exp_blocks->add_option("--budget", o.budget, "Permutation budget (mc)");
  exp_blocks->add_option("--cap", o.cap, "Enumeration cap (exact)");
  handlers["exp-blocks"] = [&] { return RunExpBlocks(o, out, err); };

  CLI::App* bench = add("bench-runtime", "Wall time of the engines");
  AddRunOptions(bench, o);
  AddStopOptions(bench, o);
  AddKnnOptions(bench, o);
  bench->add_option("--cells", o.cells, "Cells to value");
  bench->add_option("--features", o.features, "Features of the synthetic set");
  bench->add_option("--test-rows", o.bench_test, "Test rows of the synthetic set");
  bench->add_option("--engines", o.engines, "Comma-separated: exact, mc, knn");
  bench->add_option("--budget", o.budget, "MC permutation budget");
  bench->add_option("--learner", o.learner, "Learner of the MC utility");
  handlers["bench-runtime"] = [&] { return RunBenchRuntime(o, out, err); };

  std::vector<std::string> args;
  for (int k = argc - 1; k >= 1; --k) args.emplace_back(argv[k]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    // Subcommand help arrives here as well.
    if (e.get_exit_code() == 0) {
      for (const auto* sub : app.get_subcommands()) out << sub->help();
      return 0;
    }
    err << "fragshap: " << e.what() << '\n';
    return 2;
  }
  if (!o.seed_given) {
    if (const char* env = std::getenv("FRAGSHAP_SEED")) {
      try {
        o.seed = std::stoull(env);
      } catch (const std::exception&) {
        err << "fragshap: FRAGSHAP_SEED is not an unsigned integer\n";
        return 2;
      }
    }
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return handlers.at(command)();
  } catch (const std::invalid_argument& e) {
    err << "fragshap: " << e.what() << '\n';
    return 2;
  } catch (const std::length_error& e) {
    err << "fragshap: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "fragshap: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fragshap
