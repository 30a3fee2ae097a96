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

#include "fragshap/grid.h"

#include <algorithm>
#include <sstream>

#include "fragshap/random.h"
#include "json.hpp"

namespace fragshap {

namespace {

// Maximum n + m for which a SyntheticGame table is materialized.
constexpr int kMaxSyntheticBits = 26;

std::vector<int> InverseOfPartition(const std::vector<std::vector<int>>& groups,
                                    const char* axis, int* total) {
  size_t count = 0;
  for (const auto& g : groups) count += g.size();
  std::vector<int> owner(count, -1);
  for (size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) {
      throw std::invalid_argument(std::string("empty ") + axis + " group " +
                                  std::to_string(g));
    }
    for (int raw : groups[g]) {
      if (raw < 0 || static_cast<size_t>(raw) >= count) {
        throw std::invalid_argument(std::string(axis) + " index " +
                                    std::to_string(raw) +
                                    " outside the covered range");
      }
      if (owner[raw] != -1) {
        throw std::invalid_argument(std::string(axis) + " index " +
                                    std::to_string(raw) +
                                    " appears in more than one group");
      }
      owner[raw] = static_cast<int>(g);
    }
  }
  *total = static_cast<int>(count);
  return owner;
}

std::vector<std::vector<int>> ContiguousSplit(int total, int parts) {
  if (parts < 1 || parts > total) {
    throw std::invalid_argument("cannot split " + std::to_string(total) +
                                " items into " + std::to_string(parts) +
                                " non-empty groups");
  }
  std::vector<std::vector<int>> out(static_cast<size_t>(parts));
  for (int k = 0; k < total; ++k) {
    out[static_cast<size_t>(static_cast<int64_t>(k) * parts / total)]
        .push_back(k);
  }
  return out;
}

// Calls visit(subset) for every subset of `universe` with exactly `size`
// members.
template <typename Fn>
void ForEachSubsetOfSize(uint64_t universe, int size, Fn&& visit) {
  const int width = std::popcount(universe);
  if (size > width) return;
  std::vector<int> positions;
  for (uint64_t rest = universe; rest != 0; rest &= rest - 1) {
    positions.push_back(std::countr_zero(rest));
  }
  if (size == 0) {
    visit(uint64_t{0});
    return;
  }
  // Gosper's hack over compressed positions.
  uint64_t compressed = (uint64_t{1} << size) - 1;
  const uint64_t stop = width >= 64 ? 0 : (uint64_t{1} << width);
  while (true) {
    uint64_t expanded = 0;
    for (uint64_t rest = compressed; rest != 0; rest &= rest - 1) {
      expanded |= uint64_t{1} << positions[std::countr_zero(rest)];
    }
    visit(expanded);
    const uint64_t low = compressed & -compressed;
    const uint64_t ripple = compressed + low;
    if (ripple == 0) break;
    compressed = (((ripple ^ compressed) >> 2) / low) | ripple;
    if (stop != 0 && compressed >= stop) break;
  }
}

}  // namespace

size_t CoalitionHash::operator()(const Coalition& c) const noexcept {
  return static_cast<size_t>(
      Mix64(c.samples.bits() ^ Mix64(c.features.bits())));
}

std::string ToString(const Coalition& c) {
  std::ostringstream out;
  auto dump = [&](GroupSet set) {
    out << '{';
    bool first = true;
    set.ForEach([&](int g) {
      if (!first) out << ',';
      out << g;
      first = false;
    });
    out << '}';
  };
  out << '(';
  dump(c.samples);
  out << ", ";
  dump(c.features);
  out << ')';
  return out.str();
}

BlockGrid::BlockGrid(std::vector<std::vector<int>> row_members,
                     std::vector<std::vector<int>> col_members)
    : row_members_(std::move(row_members)),
      col_members_(std::move(col_members)) {
  if (row_members_.empty() || col_members_.empty()) {
    throw std::invalid_argument("a grid needs at least one group per axis");
  }
  row_of_ = InverseOfPartition(row_members_, "sample", &raw_samples_);
  col_of_ = InverseOfPartition(col_members_, "feature", &raw_features_);
}

BlockGrid BlockGrid::Cells(int raw_samples, int raw_features) {
  return Uniform(raw_samples, raw_features, raw_samples, raw_features);
}

BlockGrid BlockGrid::Uniform(int raw_samples, int raw_features, int n, int m) {
  return BlockGrid(ContiguousSplit(raw_samples, n),
                   ContiguousSplit(raw_features, m));
}

void BlockGrid::RequireGameSized() const {
  if (n() > kMaxGroups || m() > kMaxGroups) {
    throw std::invalid_argument(
        "grid is " + std::to_string(n()) + "x" + std::to_string(m()) +
        "; coalition-based engines support at most " +
        std::to_string(kMaxGroups) + " groups per axis");
  }
}

std::vector<int> BlockGrid::RawSamples(GroupSet samples) const {
  std::vector<int> out;
  samples.ForEach([&](int g) {
    out.insert(out.end(), row_members_[g].begin(), row_members_[g].end());
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> BlockGrid::RawFeatures(GroupSet features) const {
  std::vector<int> out;
  features.ForEach([&](int g) {
    out.insert(out.end(), col_members_[g].begin(), col_members_[g].end());
  });
  std::sort(out.begin(), out.end());
  return out;
}

BlockGrid ParsePartitionJson(std::string_view text, int raw_samples,
                             int raw_features) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("partition: ") + e.what());
  }
  if (doc.is_string() && doc.get<std::string>() == "cells") {
    return BlockGrid::Cells(raw_samples, raw_features);
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("partition: expected a JSON object");
  }
  if (doc.contains("cells") && doc["cells"].is_boolean() &&
      doc["cells"].get<bool>()) {
    return BlockGrid::Cells(raw_samples, raw_features);
  }
  if (!doc.contains("row_groups") || !doc.contains("col_groups")) {
    throw std::invalid_argument(
        "partition: needs \"row_groups\" and \"col_groups\", or \"cells\"");
  }
  std::vector<std::vector<int>> rows, cols;
  try {
    rows = doc["row_groups"].get<std::vector<std::vector<int>>>();
    cols = doc["col_groups"].get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("partition: ") + e.what());
  }
  BlockGrid grid(std::move(rows), std::move(cols));
  if (grid.raw_samples() != raw_samples ||
      grid.raw_features() != raw_features) {
    throw std::invalid_argument(
        "partition covers " + std::to_string(grid.raw_samples()) + "x" +
        std::to_string(grid.raw_features()) + " but the data is " +
        std::to_string(raw_samples) + "x" + std::to_string(raw_features));
  }
  return grid;
}

std::string_view ToString(ValueMethod method) {
  switch (method) {
    case ValueMethod::kExact:
      return "exact";
    case ValueMethod::kMonteCarlo:
      return "mc";
    case ValueMethod::kKnn:
      return "knn";
    case ValueMethod::kBaseline1d:
      return "baseline1d";
  }
  return "unknown";
}

double MarginalContribution(const UtilityFn& h, int i, int j,
                            const Coalition& c) {
  if (c.samples.Contains(i) || c.features.Contains(j)) {
    throw std::invalid_argument("block (" + std::to_string(i) + "," +
                                std::to_string(j) +
                                ") must lie outside coalition " + ToString(c));
  }
  const Coalition both{c.samples.With(i), c.features.With(j)};
  const Coalition row_only{c.samples.With(i), c.features};
  const Coalition col_only{c.samples, c.features.With(j)};
  return h(both) + h(c) - h(row_only) - h(col_only);
}

void ForEachCoalition(int n, int m, int exclude_i, int exclude_j,
                      const std::function<void(const Coalition&)>& visit,
                      int cap) {
  if (n < 1 || m < 1 || n > kMaxGroups || m > kMaxGroups) {
    throw std::invalid_argument("grid dimensions out of range");
  }
  if (exclude_i < 0 || exclude_i >= n || exclude_j < 0 || exclude_j >= m) {
    throw std::invalid_argument("excluded block outside the grid");
  }
  if ((n - 1) + (m - 1) > cap) {
    throw EnumerationCapError(
        "enumerating a " + std::to_string(n) + "x" + std::to_string(m) +
        " grid needs 2^" + std::to_string(n + m - 2) +
        " coalitions per block, above the cap of 2^" + std::to_string(cap));
  }
  const uint64_t row_universe =
      GroupSet::Full(n).bits() & ~(uint64_t{1} << exclude_i);
  const uint64_t col_universe =
      GroupSet::Full(m).bits() & ~(uint64_t{1} << exclude_j);
  for (int s = 0; s < n; ++s) {
    for (int f = 0; f < m; ++f) {
      ForEachSubsetOfSize(row_universe, s, [&](uint64_t rows) {
        ForEachSubsetOfSize(col_universe, f, [&](uint64_t cols) {
          visit(Coalition{GroupSet(rows), GroupSet(cols)});
        });
      });
    }
  }
}

std::vector<Coalition> EnumerateCoalitions(int n, int m, int exclude_i,
                                           int exclude_j, int cap) {
  std::vector<Coalition> out;
  ForEachCoalition(
      n, m, exclude_i, exclude_j,
      [&](const Coalition& c) { out.push_back(c); }, cap);
  return out;
}

SyntheticGame::SyntheticGame(int n, int m) : n_(n), m_(m) {
  if (n < 1 || m < 1 || n + m > kMaxSyntheticBits) {
    throw std::invalid_argument("synthetic game dimensions out of range");
  }
  table_.assign(size_t{1} << (n + m), 0.0);
}

SyntheticGame SyntheticGame::FromFunction(int n, int m, const UtilityFn& fn) {
  SyntheticGame game(n, m);
  for (uint64_t s = 1; s < (uint64_t{1} << n); ++s) {
    for (uint64_t f = 1; f < (uint64_t{1} << m); ++f) {
      const Coalition c{GroupSet(s), GroupSet(f)};
      game.table_[game.Index(c)] = fn(c);
    }
  }
  return game;
}

SyntheticGame SyntheticGame::Random(int n, int m, uint64_t seed) {
  Rng rng(seed);
  return FromFunction(n, m,
                      [&](const Coalition&) { return UniformUnit(rng); });
}

SyntheticGame SyntheticGame::Additive(const Matrix& a) {
  return FromFunction(a.rows(), a.cols(), [&](const Coalition& c) {
    double total = 0.0;
    c.samples.ForEach([&](int i) {
      c.features.ForEach([&](int j) { total += a(i, j); });
    });
    return total;
  });
}

SyntheticGame SyntheticGame::Constant(int n, int m, double value) {
  return FromFunction(n, m, [&](const Coalition&) { return value; });
}

SyntheticGame SyntheticGame::Product(int n, int m) {
  return FromFunction(n, m, [](const Coalition& c) {
    return static_cast<double>(c.samples.Count() * c.features.Count());
  });
}

double SyntheticGame::GrandValue() const {
  return Value(Coalition{GroupSet::Full(n_), GroupSet::Full(m_)});
}

void SyntheticGame::Set(const Coalition& c, double value) {
  if (c.Degenerate() && value != 0.0) {
    throw std::invalid_argument(
        "coalitions with no samples or no features have utility 0");
  }
  table_[Index(c)] = value;
}

SyntheticGame SyntheticGame::Combine(double alpha, const SyntheticGame& a,
                                     double beta, const SyntheticGame& b) {
  if (a.n_ != b.n_ || a.m_ != b.m_) {
    throw std::invalid_argument("Combine: games differ in shape");
  }
  SyntheticGame out(a.n_, a.m_);
  for (size_t k = 0; k < out.table_.size(); ++k) {
    out.table_[k] = alpha * a.table_[k] + beta * b.table_[k];
  }
  return out;
}

SyntheticGame SyntheticGame::Relabeled(const std::vector<int>& row_perm,
                                       const std::vector<int>& col_perm) const {
  if (static_cast<int>(row_perm.size()) != n_ ||
      static_cast<int>(col_perm.size()) != m_) {
    throw std::invalid_argument("Relabeled: permutation size mismatch");
  }
  SyntheticGame out(n_, m_);
  for (uint64_t s = 0; s < (uint64_t{1} << n_); ++s) {
    for (uint64_t f = 0; f < (uint64_t{1} << m_); ++f) {
      const Coalition source{GroupSet(s), GroupSet(f)};
      Coalition target;
      source.samples.ForEach([&](int i) { target.samples.Insert(row_perm[i]); });
      source.features.ForEach(
          [&](int j) { target.features.Insert(col_perm[j]); });
      out.table_[out.Index(target)] = table_[Index(source)];
    }
  }
  return out;
}

SyntheticGame SyntheticGame::Transposed() const {
  SyntheticGame out(m_, n_);
  for (uint64_t s = 0; s < (uint64_t{1} << n_); ++s) {
    for (uint64_t f = 0; f < (uint64_t{1} << m_); ++f) {
      out.table_[out.Index(Coalition{GroupSet(f), GroupSet(s)})] =
          table_[Index(Coalition{GroupSet(s), GroupSet(f)})];
    }
  }
  return out;
}

SyntheticGame SyntheticGame::WithPlantedDummy(int i, int j, double c) const {
  if (i < 0 || i >= n_ || j < 0 || j >= m_) {
    throw std::invalid_argument("WithPlantedDummy: block outside the grid");
  }
  SyntheticGame out = *this;
  // The right-hand side never contains both i and j, so the rewrite reads
  // only entries it does not modify.
  ForEachCoalition(
      n_, m_, i, j,
      [&](const Coalition& ctx) {
        const Coalition both{ctx.samples.With(i), ctx.features.With(j)};
        const double rewired =
            Value(Coalition{ctx.samples, ctx.features.With(j)}) +
            Value(Coalition{ctx.samples.With(i), ctx.features}) - Value(ctx) +
            c;
        out.table_[out.Index(both)] = rewired;
      },
      kMaxSyntheticBits);
  return out;
}

UtilityFn SyntheticGame::AsUtility() const {
  return [game = *this](const Coalition& c) { return game.Value(c); };
}

}  // namespace fragshap
