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

#ifndef FRAGSHAP_RANDOM_H_
#define FRAGSHAP_RANDOM_H_

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace fragshap {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the stream with ordinal `index` under `master_seed`. Streams for
// different indices are independent of the order in which they are created.
constexpr uint64_t StreamSeed(uint64_t master_seed, uint64_t index) {
  return Mix64(Mix64(master_seed) ^ Mix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng MakeStream(uint64_t master_seed, uint64_t index) {
  return Rng(StreamSeed(master_seed, index));
}

// Unbiased draw from [0, bound). Implemented here instead of with
// std::uniform_int_distribution so that draws are identical across standard
// library implementations.
inline uint64_t UniformBelow(Rng& rng, uint64_t bound) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % bound;
  uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fisher-Yates shuffle.
template <typename T>
void Shuffle(std::vector<T>& items, Rng& rng) {
  for (size_t k = items.size(); k > 1; --k) {
    std::swap(items[k - 1], items[UniformBelow(rng, k)]);
  }
}

inline std::vector<int> RandomPermutation(int size, Rng& rng) {
  std::vector<int> perm(static_cast<size_t>(size));
  std::iota(perm.begin(), perm.end(), 0);
  Shuffle(perm, rng);
  return perm;
}

}  // namespace fragshap

#endif  // FRAGSHAP_RANDOM_H_
