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

#include "fragshap/exact.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fragshap/parallel.h"
#include "fragshap/random.h"

namespace fragshap {

namespace {

double LogFactorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

double Binomial(int top, int bottom) {
  double out = 1.0;
  for (int k = 1; k <= bottom; ++k) {
    out = out * static_cast<double>(top - bottom + k) / static_cast<double>(k);
  }
  return out;
}

void RequireGameDims(int n, int m) {
  if (n < 1 || m < 1 || n > kMaxGroups || m > kMaxGroups) {
    throw std::invalid_argument("grid dimensions must lie in [1, 64]");
  }
}

template <typename WeightFn>
Matrix SumWeightedMarginals(const UtilityFn& h, int n, int m,
                            const ExactOptions& options, WeightFn&& weight) {
  RequireGameDims(n, m);
  if ((n - 1) + (m - 1) > options.enumeration_cap) {
    throw EnumerationCapError("exact values of a " + std::to_string(n) + "x" +
                              std::to_string(m) +
                              " grid exceed the enumeration cap");
  }
  Matrix values(n, m);
  ParallelFor(n * m, options.workers, [&](int block) {
    const int i = block / m;
    const int j = block % m;
    double total = 0.0;
    ForEachCoalition(
        n, m, i, j,
        [&](const Coalition& c) {
          total += weight(c.samples.Count(), c.features.Count()) *
                   MarginalContribution(h, i, j, c);
        },
        options.enumeration_cap);
    values(i, j) = total;
  });
  return values;
}

}  // namespace

WeightTable::WeightTable(int n, int m) : n_(n), m_(m) {
  RequireGameDims(n, m);
  p_ = Matrix(n, m);
  const double log_n = LogFactorial(n);
  const double log_m = LogFactorial(m);
  for (int s = 0; s < n; ++s) {
    const double row = LogFactorial(s) + LogFactorial(n - s - 1) - log_n;
    for (int f = 0; f < m; ++f) {
      const double col = LogFactorial(f) + LogFactorial(m - f - 1) - log_m;
      p_(s, f) = std::exp(row + col);
    }
  }
}

ValueGrid ExactValues(const UtilityFn& h, int n, int m,
                      const ExactOptions& options) {
  const WeightTable weights(n, m);
  ValueGrid out;
  out.values = SumWeightedMarginals(
      h, n, m, options, [&](int s, int f) { return weights(s, f); });
  out.method = ValueMethod::kExact;
  return out;
}

ValueGrid WeightedSubsetValues(const UtilityFn& h, int n, int m,
                               const ExactOptions& options) {
  ValueGrid out;
  out.values = SumWeightedMarginals(h, n, m, options, [&](int s, int f) {
    return 1.0 / (static_cast<double>(n) * m * Binomial(n - 1, s) *
                  Binomial(m - 1, f));
  });
  out.method = ValueMethod::kExact;
  return out;
}

ValueGrid PermutationAverageValues(const UtilityFn& h, int n, int m,
                                   int64_t max_pairs) {
  RequireGameDims(n, m);
  const double pairs = std::exp(LogFactorial(n) + LogFactorial(m));
  if (pairs > static_cast<double>(max_pairs)) {
    throw EnumerationCapError("too many ordering pairs for exhaustive "
                              "averaging");
  }
  std::vector<int> rows(static_cast<size_t>(n));
  std::vector<int> cols(static_cast<size_t>(m));
  std::iota(rows.begin(), rows.end(), 0);
  Matrix sum(n, m);
  int64_t count = 0;
  do {
    std::iota(cols.begin(), cols.end(), 0);
    do {
      GroupSet before_rows;
      for (int a = 0; a < n; ++a) {
        GroupSet before_cols;
        for (int b = 0; b < m; ++b) {
          sum(rows[a], cols[b]) += MarginalContribution(
              h, rows[a], cols[b], Coalition{before_rows, before_cols});
          before_cols.Insert(cols[b]);
        }
        before_rows.Insert(rows[a]);
      }
      ++count;
    } while (std::next_permutation(cols.begin(), cols.end()));
  } while (std::next_permutation(rows.begin(), rows.end()));
  ValueGrid out;
  out.values = Matrix(n, m);
  for (size_t k = 0; k < sum.size(); ++k) {
    out.values.data()[k] = sum.data()[k] / static_cast<double>(count);
  }
  out.method = ValueMethod::kExact;
  return out;
}

Matrix StratumMeans(const UtilityFn& h, int n, int m, int i, int j, int cap) {
  Matrix sums(n, m);
  ForEachCoalition(
      n, m, i, j,
      [&](const Coalition& c) {
        sums(c.samples.Count(), c.features.Count()) +=
            MarginalContribution(h, i, j, c);
      },
      cap);
  for (int s = 0; s < n; ++s) {
    for (int f = 0; f < m; ++f) {
      sums(s, f) /= Binomial(n - 1, s) * Binomial(m - 1, f);
    }
  }
  return sums;
}

std::vector<CheckResult> WeightRecursionReport::Checks() const {
  auto check = [](const char* name, double residual) {
    return CheckResult{name, residual, residual < 1e-12};
  };
  return {check("interior_recursion", interior_residual),
          check("first_row_boundary", first_row_residual),
          check("first_col_boundary", first_col_residual),
          check("terminal", terminal_residual),
          check("normalization", normalization_residual)};
}

WeightRecursionReport VerifyWeightRecursion(int n, int m) {
  const WeightTable p(n, m);
  WeightRecursionReport report;
  report.n = n;
  report.m = m;
  for (int s = 1; s < n; ++s) {
    for (int f = 1; f < m; ++f) {
      const double lhs = s * f * p(s - 1, f - 1) + (n - s) * (m - f) * p(s, f);
      const double rhs = (n - s) * f * p(s, f - 1) + s * (m - f) * p(s - 1, f);
      report.interior_residual =
          std::max(report.interior_residual, std::abs(lhs - rhs));
      ++report.equations;
    }
  }
  for (int f = 1; f < m; ++f) {
    report.first_row_residual =
        std::max(report.first_row_residual,
                 std::abs((m - f) * p(0, f) - f * p(0, f - 1)));
    ++report.equations;
  }
  for (int s = 1; s < n; ++s) {
    report.first_col_residual =
        std::max(report.first_col_residual,
                 std::abs((n - s) * p(s, 0) - s * p(s - 1, 0)));
    ++report.equations;
  }
  report.terminal_residual =
      std::abs(static_cast<double>(n) * m * p(n - 1, m - 1) - 1.0);
  ++report.equations;

  double total = 0.0;
  for (int s = 0; s < n; ++s) {
    for (int f = 0; f < m; ++f) {
      total += Binomial(n - 1, s) * Binomial(m - 1, f) * p(s, f);
    }
  }
  report.normalization_residual = std::abs(total - 1.0);
  report.max_residual =
      std::max({report.interior_residual, report.first_row_residual,
                report.first_col_residual, report.terminal_residual,
                report.normalization_residual});
  report.pass = report.max_residual < 1e-12;
  return report;
}

std::vector<CheckResult> VerifyAxioms(const GameValueFn& psi,
                                      const std::vector<SyntheticGame>& games,
                                      double tol, uint64_t seed) {
  Rng rng(StreamSeed(seed, 0xa810));
  double linearity = 0.0, dummy = 0.0, symmetry = 0.0, efficiency = 0.0;
  for (size_t g = 0; g < games.size(); ++g) {
    const SyntheticGame& h = games[g];
    const int n = h.n();
    const int m = h.m();
    const Matrix base = psi(h);

    efficiency = std::max(efficiency, std::abs(base.Sum() - h.GrandValue()));

    // Pair each game with the next one of the same shape, or with a fresh
    // random game when there is none.
    const SyntheticGame* partner = nullptr;
    for (size_t other = g + 1; other < games.size() && !partner; ++other) {
      if (games[other].n() == n && games[other].m() == m) {
        partner = &games[other];
      }
    }
    const SyntheticGame fallback =
        partner ? SyntheticGame(1, 1) : SyntheticGame::Random(n, m, rng());
    if (!partner) partner = &fallback;
    const double alpha = 4.0 * UniformUnit(rng) - 2.0;
    const double beta = 4.0 * UniformUnit(rng) - 2.0;
    const Matrix mixed = psi(SyntheticGame::Combine(alpha, h, beta, *partner));
    const Matrix second = psi(*partner);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        linearity = std::max(linearity, std::abs(mixed(i, j) -
                                                 alpha * base(i, j) -
                                                 beta * second(i, j)));
      }
    }

    const int di = static_cast<int>(UniformBelow(rng, n));
    const int dj = static_cast<int>(UniformBelow(rng, m));
    const double c = 2.0 * UniformUnit(rng) - 1.0;
    const Matrix planted = psi(h.WithPlantedDummy(di, dj, c));
    dummy = std::max(dummy, std::abs(planted(di, dj) - c));

    const std::vector<int> row_perm = RandomPermutation(n, rng);
    const std::vector<int> col_perm = RandomPermutation(m, rng);
    const Matrix moved = psi(h.Relabeled(row_perm, col_perm));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        symmetry = std::max(
            symmetry, std::abs(moved(row_perm[i], col_perm[j]) - base(i, j)));
      }
    }
  }
  return {CheckResult{"linearity", linearity, linearity <= tol},
          CheckResult{"dummy", dummy, dummy <= tol},
          CheckResult{"symmetry", symmetry, symmetry <= tol},
          CheckResult{"efficiency", efficiency, efficiency <= tol}};
}

std::vector<double> ReduceTo1d(const ValueGrid& values, SumOver axis) {
  const Matrix& v = values.values;
  if (axis == SumOver::kColumns) {
    std::vector<double> out(static_cast<size_t>(v.rows()), 0.0);
    for (int i = 0; i < v.rows(); ++i)
      for (int j = 0; j < v.cols(); ++j) out[static_cast<size_t>(i)] += v(i, j);
    return out;
  }
  std::vector<double> out(static_cast<size_t>(v.cols()), 0.0);
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j) out[static_cast<size_t>(j)] += v(i, j);
  return out;
}

}  // namespace fragshap
