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

#ifndef FRAGSHAP_EXACT_H_
#define FRAGSHAP_EXACT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fragshap/grid.h"
#include "fragshap/matrix.h"

namespace fragshap {

// p(s, f) = s!(n-s-1)!/n! * f!(m-f-1)!/m!, the weight of a context (S, F)
// with |S| = s, |F| = f in the value of a block outside it.
class WeightTable {
 public:
  WeightTable(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }
  double operator()(int s, int f) const { return p_(s, f); }
  const Matrix& table() const { return p_; }

 private:
  int n_;
  int m_;
  Matrix p_;
};

struct ExactOptions {
  int enumeration_cap = kDefaultEnumerationCap;
  int workers = 1;
};

// Block values by enumerating every context of every block, weighted by the
// WeightTable.
ValueGrid ExactValues(const UtilityFn& h, int n, int m,
                      const ExactOptions& options = {});

// The same quantity written as a sum over contexts divided by
// n * m * C(n-1, |S|) * C(m-1, |F|). Uses binomials instead of the
// log-gamma weights.
ValueGrid WeightedSubsetValues(const UtilityFn& h, int n, int m,
                               const ExactOptions& options = {});

// Average of the block marginal over all n! * m! pairs of row and column
// orderings, with each block's context made of the groups preceding it.
// Refuses grids with more than `max_pairs` ordering pairs.
ValueGrid PermutationAverageValues(const UtilityFn& h, int n, int m,
                                   int64_t max_pairs = 2'000'000);

// Mean marginal of block (i, j) over contexts with |S| = s, |F| = f, as an
// n x m matrix indexed by (s, f). The block value is the average of all
// entries.
Matrix StratumMeans(const UtilityFn& h, int n, int m, int i, int j,
                    int cap = kDefaultEnumerationCap);

struct CheckResult {
  std::string check;
  double max_residual = 0.0;
  bool pass = false;
};

struct WeightRecursionReport {
  int n = 0;
  int m = 0;
  int equations = 0;
  double interior_residual = 0.0;
  double first_row_residual = 0.0;
  double first_col_residual = 0.0;
  double terminal_residual = 0.0;
  // sum over (s, f) of C(n-1, s) C(m-1, f) p(s, f) minus 1.
  double normalization_residual = 0.0;
  double max_residual = 0.0;
  bool pass = false;

  std::vector<CheckResult> Checks() const;
};

// Substitutes the WeightTable into the linear system that characterizes it
// and reports residuals. Passes when every residual is below 1e-12.
WeightRecursionReport VerifyWeightRecursion(int n, int m);

using GameValueFn = std::function<Matrix(const SyntheticGame&)>;

// Checks linearity, planted dummy, relabeling symmetry and efficiency of
// `psi` on `games`. Random scalars, dummy placements and permutations come
// from `seed`. Returns one CheckResult per axiom, in that order.
std::vector<CheckResult> VerifyAxioms(const GameValueFn& psi,
                                      const std::vector<SyntheticGame>& games,
                                      double tol, uint64_t seed);

enum class SumOver { kRows, kColumns };

// kColumns sums each row (one value per sample group); kRows sums each
// column (one value per feature group).
std::vector<double> ReduceTo1d(const ValueGrid& values, SumOver axis);

}  // namespace fragshap

#endif  // FRAGSHAP_EXACT_H_
