// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ceerbench/algebra.hpp"
#include "ceerbench/kernel.hpp"
#include "ceerbench/oracles.hpp"
#include "ceerbench/trace.hpp"

namespace ceerbench {

enum class Side { X, Y };

/// A requirement may pin the future f-images of a number to one half of the
/// join: X-bound numbers get even images, Y-bound get odd ones. Free numbers
/// follow the configured default.
enum class BoundTag { Free, XBound, YBound };

enum class T21Phase {
  Initialized,
  Case1Wait,
  Case2Step0Wait,
  DiagStep1Wait,
  DiagStep3Wait,
  Satisfied,
};

std::string to_string(Side side);
std::string to_string(T21Phase phase);
std::string to_string(BoundTag tag);

/// One range-hitting requirement: parameters are side-local indices (the
/// codes in the joined relation are 2u for side X, 2u+1 for side Y).
struct T21Requirement {
  Side side = Side::X;
  std::uint64_t j = 0;
  std::uint64_t k = 0;

  T21Phase phase = T21Phase::Initialized;
  std::optional<std::uint64_t> k_prime;
  std::optional<std::uint64_t> diag_x;
  std::vector<std::uint64_t> diag_iterates;  // iterate indices with own-side parity
  std::optional<std::uint64_t> diag_z;
  std::optional<std::uint64_t> diag_w;
  std::string note;  // why Satisfied, when it is

  std::string name() const;
};

struct T21Options {
  std::uint64_t k_bound = 2;
  Parity free_parity = Parity::Odd;  // f-image parity for untagged arguments
};

struct ActiveSets {
  std::vector<std::uint64_t> d;  // codes of diagonal witnesses awaiting their image
  std::vector<std::uint64_t> e;  // codes of substitutes awaiting convergence
  std::vector<std::uint64_t> i;  // image of f
};

using T21PriorityList = std::vector<std::tuple<Side, std::uint64_t, std::uint64_t>>;

/// Dovetail order: ascending 2*<j,k> + side (X first).
T21PriorityList t21_default_priority(const OracleFamily& fam, std::uint64_t k_bound);

/// Deterministic run state for the join construction: the joined relation Z,
/// the growing self-reduction f, per-number bound tags, the prioritized
/// requirement machines, and the full event trace.
class T21State {
 public:
  const StageCeer& z() const { return z_; }
  const ReductionTable& f() const { return f_; }
  const std::vector<T21Requirement>& requirements() const { return reqs_; }
  const OracleFamily& family() const { return fam_; }
  const T21Options& options() const { return opts_; }
  std::uint64_t stage() const { return stage_; }
  const std::vector<TraceEvent>& events() const { return events_; }

  /// Effective tag: the assertion of the highest-priority requirement that
  /// currently binds the number, Free when nobody does.
  BoundTag effective_tag(std::uint64_t n) const;

  json_t summary() const;
  TraceDocument trace() const;

  friend bool operator==(const T21State& a, const T21State& b) {
    return a.summary() == b.summary() && a.events_ == b.events_;
  }

  friend T21State t21_init(OracleFamily fam, const T21PriorityList& priority, T21Options opts);
  friend void t21_stage(T21State& state);

 private:
  struct Impl;

  StageCeer z_;
  ReductionTable f_;
  std::map<std::uint64_t, std::map<std::size_t, BoundTag>> assertions_;  // number -> owner rank -> tag
  std::vector<T21Requirement> reqs_;
  OracleFamily fam_;
  T21Options opts_;
  std::uint64_t stage_ = 0;
  TimePoint cursor_{};
  std::vector<TraceEvent> events_;
};

T21State t21_init(OracleFamily fam, const T21PriorityList& priority, T21Options opts = {});
void t21_stage(T21State& state);
void t21_run(T21State& state, std::uint64_t stages);

/// D/E/I reconstructed from the trace at a past time.
ActiveSets t21_active_sets(const T21State& state, TimePoint at);

/// Finite-stage invariant audit over the trace: active-set disjointness,
/// collapse justification inside the active sets, parity separation, f being
/// a reduction whose range misses the class of 0, and at most one acting
/// requirement per stage.
Report verify_t21(const T21State& state);
Report verify_t21_trace(const TraceDocument& doc);

/// State rebuilt mechanically from a trace document.
struct T21ReplayState {
  StageCeer z;
  ReductionTable f;
  std::map<std::uint64_t, std::map<std::size_t, BoundTag>> assertions;
  std::vector<T21Requirement> reqs;
  std::uint64_t stage = 0;
  TimePoint clock{};
};

T21ReplayState t21_replay(const TraceDocument& doc);
json_t t21_replay_summary(const TraceDocument& doc);

// Code of a side-local index in the joined relation: 2u or 2u+1.
std::uint64_t t21_code(Side side, std::uint64_t u);

}  // namespace ceerbench
