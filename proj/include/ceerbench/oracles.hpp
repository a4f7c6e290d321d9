// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ceerbench/algebra.hpp"

namespace ceerbench {

/// Finite table standing in for a partial computable function: (input,
/// output, converges_at) triples. A value is visible at stages >= its
/// convergence stage.
struct PartialFnTable {
  struct Triple {
    std::uint64_t input = 0;
    std::uint64_t output = 0;
    std::uint64_t converges_at = 1;

    friend bool operator==(const Triple&, const Triple&) = default;
  };
  std::vector<Triple> triples;

  friend bool operator==(const PartialFnTable&, const PartialFnTable&) = default;
};

/// Finite stand-in for a stage-enumerated c.e. set.
struct CeSetTable {
  struct Elem {
    std::uint64_t element = 0;
    std::uint64_t enumerated_at = 0;

    friend bool operator==(const Elem&, const Elem&) = default;
  };
  std::vector<Elem> elems;

  std::optional<std::uint64_t> enumerated_at(std::uint64_t element) const;

  friend bool operator==(const CeSetTable&, const CeSetTable&) = default;
};

/// Indexed bundle of scripted oracles: partial functions phi_j and c.e. sets
/// W_i (whose complements serve as the co-c.e. relations V_i).
struct OracleFamily {
  std::vector<PartialFnTable> phis;
  std::vector<CeSetTable> wes;
  std::string name;

  friend bool operator==(const OracleFamily&, const OracleFamily&) = default;
};

/// phi_j(x) at stage s: the value whose triple has converges_at <= s, if any.
std::optional<std::uint64_t> phi_at(const OracleFamily& fam, std::size_t j, std::uint64_t x,
                                    std::uint64_t s);

/// Elements of W_i enumerated by stage s, sorted.
std::vector<std::uint64_t> we_at(const OracleFamily& fam, std::size_t i, std::uint64_t s);

/// Membership test without materializing the whole set.
bool we_contains(const OracleFamily& fam, std::size_t i, std::uint64_t element, std::uint64_t s);

/// V_j = complement of W_j, read as an equivalence relation: x V y iff x == y
/// or neither orientation of <x,y> has been enumerated by stage s.
bool v_related(const OracleFamily& fam, std::size_t j, std::uint64_t x, std::uint64_t y,
               std::uint64_t s);

/// Cantor pairing <x,y> = (x+y)(x+y+1)/2 + y.
std::uint64_t pair_code(std::uint64_t x, std::uint64_t y);
std::pair<std::uint64_t, std::uint64_t> unpair_code(std::uint64_t n);

/// Type-invariant check: unique inputs per phi table, convergence stages
/// >= 1, unique elements per W table. Warns (without failing) when some V_j
/// fragment already violates transitivity.
Verdict validate_family(const OracleFamily& fam);

/// View a phi table as a reduction table (stamped by convergence stage).
ReductionTable to_reduction_table(const PartialFnTable& table);

}  // namespace ceerbench
