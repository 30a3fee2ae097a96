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

#ifndef FRAGSHAP_GRID_H_
#define FRAGSHAP_GRID_H_

#include <bit>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fragshap/matrix.h"

namespace fragshap {

// Upper bound on the number of sample groups and feature groups that can take
// part in a coalition.
inline constexpr int kMaxGroups = 64;

// Default limit on (n - 1) + (m - 1) for exhaustive coalition enumeration.
inline constexpr int kDefaultEnumerationCap = 24;

// Fixed-width set of group indices in [0, 64).
class GroupSet {
 public:
  constexpr GroupSet() = default;
  constexpr explicit GroupSet(uint64_t bits) : bits_(bits) {}

  // The set {0, ..., size - 1}.
  static constexpr GroupSet Full(int size) {
    return GroupSet(size >= 64 ? ~uint64_t{0} : (uint64_t{1} << size) - 1);
  }
  static GroupSet Of(std::initializer_list<int> members) {
    GroupSet out;
    for (int g : members) out.Insert(g);
    return out;
  }

  constexpr bool Contains(int g) const { return (bits_ >> g) & 1u; }
  constexpr void Insert(int g) { bits_ |= uint64_t{1} << g; }
  constexpr void Erase(int g) { bits_ &= ~(uint64_t{1} << g); }
  constexpr GroupSet With(int g) const {
    return GroupSet(bits_ | (uint64_t{1} << g));
  }
  constexpr int Count() const { return std::popcount(bits_); }
  constexpr bool Empty() const { return bits_ == 0; }
  constexpr uint64_t bits() const { return bits_; }

  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (uint64_t rest = bits_; rest != 0; rest &= rest - 1) {
      fn(std::countr_zero(rest));
    }
  }

  std::vector<int> Members() const {
    std::vector<int> out;
    ForEach([&](int g) { out.push_back(g); });
    return out;
  }

  constexpr bool operator==(const GroupSet&) const = default;

 private:
  uint64_t bits_ = 0;
};

// A pair (S, F) of sample-group and feature-group subsets.
struct Coalition {
  GroupSet samples;
  GroupSet features;

  bool Degenerate() const { return samples.Empty() || features.Empty(); }
  bool operator==(const Coalition&) const = default;
};

struct CoalitionHash {
  size_t operator()(const Coalition& c) const noexcept;
};

std::string ToString(const Coalition& c);

// A utility h(S, F). Must be deterministic and safe to call concurrently.
using UtilityFn = std::function<double(const Coalition&)>;

// Partition of a raw data matrix into n sample groups and m feature groups.
// Group g of each axis is the g-th list given at construction; the raw
// indices across the lists of an axis must be exactly {0, ..., total - 1}.
class BlockGrid {
 public:
  BlockGrid(std::vector<std::vector<int>> row_members,
            std::vector<std::vector<int>> col_members);

  // Every raw sample and raw feature is its own group.
  static BlockGrid Cells(int raw_samples, int raw_features);
  // Contiguous, nearly equal splits into n x m blocks.
  static BlockGrid Uniform(int raw_samples, int raw_features, int n, int m);

  int n() const { return static_cast<int>(row_members_.size()); }
  int m() const { return static_cast<int>(col_members_.size()); }
  int raw_samples() const { return raw_samples_; }
  int raw_features() const { return raw_features_; }
  const std::vector<int>& row_members(int i) const { return row_members_[i]; }
  const std::vector<int>& col_members(int j) const { return col_members_[j]; }
  int row_group_of(int raw_sample) const { return row_of_[raw_sample]; }
  int col_group_of(int raw_feature) const { return col_of_[raw_feature]; }
  bool IsCells() const {
    return n() == raw_samples_ && m() == raw_features_;
  }

  // Throws std::invalid_argument if the grid has more than kMaxGroups groups
  // on either axis.
  void RequireGameSized() const;

  // Raw indices selected by a coalition, in ascending raw order.
  std::vector<int> RawSamples(GroupSet samples) const;
  std::vector<int> RawFeatures(GroupSet features) const;

 private:
  std::vector<std::vector<int>> row_members_;
  std::vector<std::vector<int>> col_members_;
  std::vector<int> row_of_;
  std::vector<int> col_of_;
  int raw_samples_ = 0;
  int raw_features_ = 0;
};

// Parses a partition file body: {"row_groups": [[...]...], "col_groups":
// [[...]...]} or {"cells": true}. The cells form needs the raw dimensions.
BlockGrid ParsePartitionJson(std::string_view text, int raw_samples,
                             int raw_features);

enum class ValueMethod { kExact, kMonteCarlo, kKnn, kBaseline1d };

std::string_view ToString(ValueMethod method);

// n x m block values with the metadata of the estimator that produced them.
struct ValueGrid {
  Matrix values;
  ValueMethod method = ValueMethod::kExact;
  int64_t permutations_used = 0;
  uint64_t seed = 0;
  bool converged = true;

  int n() const { return values.rows(); }
  int m() const { return values.cols(); }
};

// Thrown when exhaustive enumeration would exceed the configured cap.
class EnumerationCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// h(S + i, F + j) + h(S, F) - h(S + i, F) - h(S, F + j). Requires i not in S
// and j not in F.
double MarginalContribution(const UtilityFn& h, int i, int j,
                            const Coalition& c);

// Visits every (S, F) with S a subset of {0..n-1} \ {exclude_i} and F a subset
// of {0..m-1} \ {exclude_j}, exactly once, ordered by (|S|, |F|).
void ForEachCoalition(int n, int m, int exclude_i, int exclude_j,
                      const std::function<void(const Coalition&)>& visit,
                      int cap = kDefaultEnumerationCap);

std::vector<Coalition> EnumerateCoalitions(int n, int m, int exclude_i,
                                           int exclude_j,
                                           int cap = kDefaultEnumerationCap);

// A complete table of h over all 2^n * 2^m coalitions, with
// h(S, {}) = h({}, F) = 0.
class SyntheticGame {
 public:
  // All-zero game.
  SyntheticGame(int n, int m);

  // Tabulates fn over every coalition; degenerate coalitions are forced to 0.
  static SyntheticGame FromFunction(int n, int m, const UtilityFn& fn);
  // Uniform [0, 1) entries on every non-degenerate coalition.
  static SyntheticGame Random(int n, int m, uint64_t seed);
  // h(S, F) = sum over i in S, j in F of a(i, j).
  static SyntheticGame Additive(const Matrix& a);
  static SyntheticGame Constant(int n, int m, double value);
  // h(S, F) = |S| * |F|.
  static SyntheticGame Product(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }

  double Value(const Coalition& c) const { return table_[Index(c)]; }
  double operator()(const Coalition& c) const { return Value(c); }
  double GrandValue() const;
  // Overwrites one entry. Degenerate coalitions cannot be set to nonzero.
  void Set(const Coalition& c, double value);

  // alpha * a + beta * b, pointwise.
  static SyntheticGame Combine(double alpha, const SyntheticGame& a,
                               double beta, const SyntheticGame& b);

  // The relabeled game g with g(S, F) = h(row_perm^-1(S), col_perm^-1(F)), so
  // that block (i, j) of h plays the role of block
  // (row_perm[i], col_perm[j]) in g.
  SyntheticGame Relabeled(const std::vector<int>& row_perm,
                          const std::vector<int>& col_perm) const;
  // Swaps the roles of samples and features.
  SyntheticGame Transposed() const;
  // Rewrites h so that block (i, j) has constant marginal `c` in every
  // context: h(S+i, F+j) = h(S, F+j) + h(S+i, F) - h(S, F) + c.
  SyntheticGame WithPlantedDummy(int i, int j, double c) const;

  UtilityFn AsUtility() const;

 private:
  size_t Index(const Coalition& c) const {
    return static_cast<size_t>((c.samples.bits() << m_) | c.features.bits());
  }

  int n_;
  int m_;
  std::vector<double> table_;
};

}  // namespace fragshap

#endif  // FRAGSHAP_GRID_H_
