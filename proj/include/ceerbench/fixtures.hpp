// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ceerbench/oracles.hpp"
#include "ceerbench/trace.hpp"

namespace ceerbench {

/// Raised when a fixture file cannot be parsed or fails validation; the CLI
/// maps it to exit code 2.
struct FixtureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Stage-enumerated ceer as a list of (x, y, stage) collapse triples.
struct CeerEnumeration {
  std::string name;
  std::vector<std::array<std::uint64_t, 3>> collapses;

  /// Relation after all triples with stamp <= stage.
  StageCeer replay_to(std::uint64_t stage) const;

  /// Largest number mentioned by triples with stamp <= stage.
  std::uint64_t mentioned_max(std::uint64_t stage) const;

  friend bool operator==(const CeerEnumeration&, const CeerEnumeration&) = default;
};

// Oracle family file: {"name", "phi_count"?, "we_count"?, "phis": [[j, input,
// output, stage]...], "wes": [[i, element, stage]...]}. Counts default to one
// past the largest index mentioned in the rows.
json_t family_to_json(const OracleFamily& fam);
OracleFamily family_from_json(const json_t& j);
OracleFamily load_family(const std::string& path);
void save_family(const OracleFamily& fam, const std::string& path);

// Ceer enumeration file: {"name", "collapses": [[x, y, stage]...]}.
json_t ceer_enumeration_to_json(const CeerEnumeration& ce);
CeerEnumeration ceer_enumeration_from_json(const json_t& j);
CeerEnumeration load_ceer_enumeration(const std::string& path);
void save_ceer_enumeration(const CeerEnumeration& ce, const std::string& path);

// Reduction table file: {"name", "entries": [[input, output, stage]...]} —
// the same triple format as a single oracle partial function.
ReductionTable reduction_table_from_json(const json_t& j);
json_t reduction_table_to_json(const ReductionTable& table, const std::string& name);
ReductionTable load_reduction_table(const std::string& path);

json_t load_json_file(const std::string& path);
void save_json_file(const json_t& j, const std::string& path);

}  // namespace ceerbench
