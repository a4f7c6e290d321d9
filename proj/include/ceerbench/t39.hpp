// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ceerbench/fixtures.hpp"
#include "ceerbench/kernel.hpp"
#include "ceerbench/oracles.hpp"
#include "ceerbench/trace.hpp"

namespace ceerbench {

enum class T39Kind { CCR, SF, D };

std::string to_string(T39Kind kind);

/// One requirement of the covering construction. Index roles per kind:
///   CCR uses (l, j)   — ceer index, co-c.e. relation index
///   SF  uses (i, k, l) — c.e. set index, target class, ceer index
///   D   uses (j, l, lp) — function index, source ceer, target ceer
struct T39Requirement {
  T39Kind kind = T39Kind::CCR;
  std::uint64_t j = 0;
  std::uint64_t k = 0;
  std::uint64_t i = 0;
  std::uint64_t l = 0;
  std::uint64_t lp = 0;

  // CCR state
  std::optional<std::array<std::uint64_t, 3>> ccr_xyz;  // watched pair + witness
  bool ccr_done = false;
  // SF state (survives initialization)
  std::optional<std::uint64_t> sf_witness;
  // D state
  std::vector<std::uint64_t> d_params;  // a_0, a_1, ...
  bool d_satisfied = false;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> d_cd;

  std::string name() const;
  std::string phase_name() const;
};

/// A restraint pins a number's class in one ceer against collapses issued by
/// lower-priority requirements.
struct Restraint {
  std::size_t owner = 0;  // priority rank
  std::uint64_t ceer = 0;
  std::uint64_t number = 0;

  friend auto operator<=>(const Restraint&, const Restraint&) = default;
};

struct T39Options {
  std::uint64_t k_bound = 1;
};

using T39PriorityList = std::vector<T39Requirement>;

/// Dovetail order over the three kinds: ascending 3*code + kind tag, with
/// code = <j,l> for CCR, <i,<k,l>> for SF, <j,<l,lp>> for D.
T39PriorityList t39_default_priority(const OracleFamily& fam, std::uint64_t num_ceers,
                                     std::uint64_t k_bound);

/// Deterministic run state for the covering construction: the ceers E_l, the
/// replayed base and universal enumerations, prioritized requirements,
/// restraints, and the event trace.
class T39State {
 public:
  const std::vector<StageCeer>& ceers() const { return e_; }
  const StageCeer& base() const { return a_state_; }
  const StageCeer& universal() const { return t_state_; }
  const std::vector<T39Requirement>& requirements() const { return reqs_; }
  const std::set<Restraint>& restraints() const { return restraints_; }
  const OracleFamily& family() const { return fam_; }
  std::uint64_t stage() const { return stage_; }
  std::uint64_t num_ceers() const { return e_.size(); }
  const std::vector<TraceEvent>& events() const { return events_; }

  json_t summary() const;
  TraceDocument trace() const;

  friend bool operator==(const T39State& a, const T39State& b) {
    return a.summary() == b.summary() && a.events_ == b.events_;
  }

  friend T39State t39_init(CeerEnumeration a_enum, CeerEnumeration t_enum, OracleFamily fam,
                           std::uint64_t num_ceers, const T39PriorityList& priority,
                           T39Options opts);
  friend void t39_stage(T39State& state);

 private:
  struct Impl;

  std::vector<StageCeer> e_;
  CeerEnumeration a_enum_;
  CeerEnumeration t_enum_;
  StageCeer a_state_;
  StageCeer t_state_;
  std::size_t a_applied_ = 0;  // sorted-triple cursors
  std::size_t t_applied_ = 0;
  std::vector<T39Requirement> reqs_;
  std::set<Restraint> restraints_;
  OracleFamily fam_;
  T39Options opts_;
  std::uint64_t amax_ = 0;  // numbers mentioned anywhere in the construction
  std::uint64_t stage_ = 0;
  TimePoint cursor_{};
  std::vector<TraceEvent> events_;
};

T39State t39_init(CeerEnumeration a_enum, CeerEnumeration t_enum, OracleFamily fam,
                  std::uint64_t num_ceers, const T39PriorityList& priority, T39Options opts = {});
void t39_stage(T39State& state);
void t39_run(T39State& state, std::uint64_t stages);

/// Finite-stage invariant audit: witness separation (across requirements,
/// within a requirement against the universal enumeration, and against even
/// numbers), the even-coding reduction of the base ceer, and restraint
/// respect for requirement-issued collapses.
Report verify_t39(const T39State& state);
Report verify_t39_trace(const TraceDocument& doc);

struct T39ReplayState {
  std::vector<StageCeer> e;
  std::set<Restraint> restraints;
  std::vector<T39Requirement> reqs;
  std::uint64_t amax = 0;
  std::uint64_t stage = 0;
  TimePoint clock{};
};

T39ReplayState t39_replay(const TraceDocument& doc);
json_t t39_replay_summary(const TraceDocument& doc);

}  // namespace ceerbench
