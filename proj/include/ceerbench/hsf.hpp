// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ceerbench/algebra.hpp"
#include "ceerbench/oracles.hpp"

namespace ceerbench {

/// Parity itinerary of an f-orbit: letters[i] is 'X' when the i-th iterate of
/// 2*source is even, 'Y' when odd. Truncated (letters shorter than the
/// horizon) when the orbit runs off the table.
struct TauWord {
  std::string letters;
  std::uint64_t source = 0;
  std::uint64_t horizon = 0;

  bool truncated() const { return letters.size() < horizon; }

  friend bool operator==(const TauWord&, const TauWord&) = default;
};

TauWord tau_prefix(const ReductionTable& f, std::uint64_t n, std::uint64_t h);

/// Group the sample by equality of h-horizon tau words. An over-approximation
/// of the itinerary equivalence: equal prefixes may diverge beyond h. Blocks
/// are sorted and ordered by least member.
std::vector<std::vector<std::uint64_t>> approx_simf_classes(const ReductionTable& f,
                                                            const std::vector<std::uint64_t>& sample,
                                                            std::uint64_t h);

/// Horizon-bounded split of a word into preperiod rho and period sigma:
/// the word equals rho followed by repetitions of sigma, up to certified_to.
/// A certificate about the prefix only, never about the infinite tail.
struct PeriodDecomposition {
  std::uint64_t preperiod_len = 0;
  std::uint64_t period_len = 1;
  std::uint64_t certified_to = 0;

  friend bool operator==(const PeriodDecomposition&, const PeriodDecomposition&) = default;
};

/// Smallest |rho|+|sigma| decomposition (ties: smaller |sigma|). Empty words
/// have no decomposition.
std::optional<PeriodDecomposition> detect_period(const TauWord& w);
std::optional<PeriodDecomposition> detect_period(const std::string& letters);

/// N-fold self-composition, defined wherever the whole N-step orbit is. N=0
/// yields the identity on domain plus range.
ReductionTable iterate(const ReductionTable& f, std::uint64_t n);

/// Sample split by tau-prefix shape: all-X prefixes (cx), X-then-all-Y
/// prefixes (cy), everything else (undecided: truncated orbits, or a table
/// that was not iterated enough).
struct ClassSplit {
  std::vector<std::uint64_t> cx;
  std::vector<std::uint64_t> cy;
  std::vector<std::uint64_t> undecided;
};

ClassSplit classify_cx_cy(const ReductionTable& f2, const std::vector<std::uint64_t>& sample,
                          std::uint64_t h);

struct InducedReduction {
  ReductionTable g;
  std::vector<std::uint64_t> omitted;  // sample elements g could not cover
  std::vector<std::string> notes;
};

/// Piecewise even-side map: g(n) = f2(2n)/2 on cx, g(n) = n on cy. Undecided
/// inputs are omitted and reported.
InducedReduction g_from_cx(const ReductionTable& f2, const ClassSplit& split);

struct OntoYResult {
  ReductionTable g;
  std::vector<std::uint64_t> omitted;            // odd-side inputs with too-short orbits
  std::vector<std::uint64_t> parity_violations;  // inputs whose second image is even
};

/// Odd-side map: g(n) = (f2(2n+1)-1)/2 when that image is odd, else
/// (f2^(2)(2n+1)-1)/2. An even second image is a counterexample that f2 was
/// not a genuinely post-processed reduction.
OntoYResult g_onto_y(const ReductionTable& f2);

/// Iteration exponents for the analysis pipeline: n1 = lcm of detected period
/// lengths over the sample, n2 = 1 + max preperiod length.
struct IterationExponents {
  std::uint64_t n1 = 1;
  std::uint64_t n2 = 1;
  std::vector<std::uint64_t> undetermined;  // sample elements with truncated words
};

IterationExponents compute_iteration_exponents(const ReductionTable& f,
                                               const std::vector<std::uint64_t>& sample,
                                               std::uint64_t h);

struct CoceerEmbedding {
  std::vector<std::uint64_t> values;
  std::optional<std::uint64_t> stalled_at;

  bool stalled() const { return stalled_at.has_value(); }
};

/// Values f(0..n) of the search-based embedding of Id into the complement
/// relation of w: f(m) is the least <x,s> (by Cantor code, s <= stage_budget)
/// with every <f(i),x>, i<m, enumerated by stage s. Stalls at the first index
/// whose search exhausts the budget.
CoceerEmbedding id_to_coceer(const CeSetTable& w, std::uint64_t n, std::uint64_t stage_budget);

}  // namespace ceerbench
