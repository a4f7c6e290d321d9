// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ceerbench/kernel.hpp"

namespace ceerbench::testing {

/// Brute-force equivalence closure over 0..bound, independent of the kernel:
/// a dense boolean matrix closed by iterating transitivity to a fixpoint.
class BruteCloser {
 public:
  explicit BruteCloser(std::uint64_t bound) : bound_(bound), rel_((bound + 1) * (bound + 1), false) {
    for (std::uint64_t i = 0; i <= bound; ++i) set(i, i, true);
  }

  void add_pair(std::uint64_t a, std::uint64_t b) {
    set(a, b, true);
    set(b, a, true);
    close();
  }

  void add_pairs(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
    for (const auto& [a, b] : pairs) {
      set(a, b, true);
      set(b, a, true);
    }
    close();
  }

  bool related(std::uint64_t a, std::uint64_t b) const { return get(a, b); }

 private:
  void set(std::uint64_t a, std::uint64_t b, bool v) { rel_[a * (bound_ + 1) + b] = v; }
  bool get(std::uint64_t a, std::uint64_t b) const { return rel_[a * (bound_ + 1) + b]; }

  // Warshall closure; with a reflexive, symmetric seed this is the
  // equivalence closure.
  void close() {
    for (std::uint64_t k = 0; k <= bound_; ++k) {
      for (std::uint64_t i = 0; i <= bound_; ++i) {
        if (!get(i, k)) continue;
        for (std::uint64_t j = 0; j <= bound_; ++j) {
          if (get(k, j)) set(i, j, true);
        }
      }
    }
  }

  std::uint64_t bound_;
  std::vector<bool> rel_;
};

using PairLog = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

inline PairLog random_pairs(std::mt19937_64& rng, std::uint64_t bound, std::size_t count) {
  std::uniform_int_distribution<std::uint64_t> dist(0, bound);
  PairLog out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(dist(rng), dist(rng));
  return out;
}

/// StageCeer grown by one collapse per pair, next to a brute-force twin.
struct CeerWithOracle {
  StageCeer ceer = StageCeer::identity();
  BruteCloser oracle;

  explicit CeerWithOracle(std::uint64_t bound) : oracle(bound) {}

  void collapse(std::uint64_t a, std::uint64_t b) {
    ceer.collapse({{a, b}}, "test");
    oracle.add_pair(a, b);
  }
};

inline CeerWithOracle random_ceer(std::mt19937_64& rng, std::uint64_t bound, std::size_t collapses) {
  CeerWithOracle out(bound);
  for (const auto& [a, b] : random_pairs(rng, bound, collapses)) out.collapse(a, b);
  return out;
}

}  // namespace ceerbench::testing
