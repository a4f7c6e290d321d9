// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "ceerbench/kernel.hpp"

namespace ceerbench {

// Exit codes shared by the commands and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitFixtureError = 2;
inline constexpr int kExitConfigError = 3;

struct RunConfig {
  std::string scenario;  // "t21" | "t39" | "hsf"
  std::string family_path;
  std::string base_ceer_path;       // t39
  std::string universal_ceer_path;  // t39
  std::string reduction_path;       // hsf
  std::string sample_spec = "0-16"; // hsf
  std::string output_path;
  std::uint64_t stages = 100;
  std::uint64_t num_ceers = 2;  // t39
  std::uint64_t horizon = 16;   // hsf
  std::uint64_t k_bound = 2;
  Parity free_parity = Parity::Odd;  // t21
};

/// Run a scenario and write its trace (or analysis report) to output_path.
int cmd_run(const RunConfig& config, std::ostream& log);

/// Replay a trace file and audit its invariants; exit 0 only when every
/// check passes.
int cmd_verify(const std::string& trace_path, std::ostream& out);

/// Orbit analysis pipeline over a reduction-table fixture: itineraries,
/// periods, iteration exponents, the class split, and the induced maps.
int cmd_analyze(const std::string& reduction_path, const std::string& sample_spec,
                std::uint64_t horizon, std::ostream& out, const std::string& output_path = "");

/// Check a family fixture against the oracle-table invariants.
int cmd_validate(const std::string& family_path, std::ostream& out);

/// Parse "0-8,10,12-14" into a sorted list.
std::vector<std::uint64_t> parse_sample_spec(const std::string& spec);

}  // namespace ceerbench
