// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ceerbench {

/// Sub-stage clock: (stage, tick), lexicographically ordered. A tick follows
/// every collapse or parameter change, so history can be queried between
/// stage boundaries.
struct TimePoint {
  std::uint64_t stage = 0;
  std::uint64_t tick = 0;

  friend auto operator<=>(const TimePoint&, const TimePoint&) = default;

  TimePoint next_tick() const { return TimePoint{stage, tick + 1}; }
};

enum class Parity { Even, Odd, Any };

struct CollapseEvent {
  TimePoint time;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  std::string cause;

  friend bool operator==(const CollapseEvent&, const CollapseEvent&) = default;
};

struct CollapseReport {
  TimePoint at;
  // Input pairs that actually merged two classes (idempotent pairs omitted).
  std::vector<std::pair<std::uint64_t, std::uint64_t>> merged;

  bool no_op() const { return merged.empty(); }
};

/// Equivalence relation on all of omega, grown from Id by timestamped
/// collapses. Only numbers that were mentioned (collapsed, touched or handed
/// out by fresh()) are materialized; everything else sits in a singleton
/// class. The event log is append-only and replayable, so the relation at any
/// past TimePoint can be reconstructed.
class StageCeer {
 public:
  static StageCeer identity() { return StageCeer{}; }

  /// Collapse with an automatic one-tick clock advance.
  CollapseReport collapse(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                          std::string cause);

  /// Collapse stamped by the caller. `at` must be strictly after the last
  /// event; construction engines own the clock and pass it in.
  CollapseReport collapse_at(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                             std::string cause, TimePoint at);

  bool related(std::uint64_t x, std::uint64_t y) const;

  /// Relation as of `at`: replays the event-log prefix with time <= at.
  bool related_at(std::uint64_t x, std::uint64_t y, TimePoint at) const;

  /// All mentioned numbers related to x, plus x itself. Sorted.
  std::vector<std::uint64_t> class_members(std::uint64_t x) const;

  /// Least number of the requested parity strictly greater than
  /// max(stage + 1, allocated_max). The result is mentioned immediately, so
  /// consecutive calls never repeat and the result is always a singleton.
  std::uint64_t fresh(Parity parity, std::uint64_t stage);

  /// Mark a number as mentioned (raises the high-water mark).
  void touch(std::uint64_t n);

  std::uint64_t allocated_max() const { return allocated_max_; }
  TimePoint clock() const { return clock_; }
  const std::vector<CollapseEvent>& events() const { return events_; }

  /// Mentioned numbers, sorted.
  std::vector<std::uint64_t> allocated() const;

  /// Non-singleton classes over the mentioned numbers, each sorted, ordered
  /// by least member. Canonical shape for summaries and equality.
  std::vector<std::vector<std::uint64_t>> census() const;

  friend bool operator==(const StageCeer& a, const StageCeer& b) {
    return a.allocated_max_ == b.allocated_max_ && a.events_ == b.events_ &&
           a.census() == b.census();
  }

 private:
  std::uint64_t find(std::uint64_t x) const;
  void unite(std::uint64_t a, std::uint64_t b);

  mutable std::map<std::uint64_t, std::uint64_t> parent_;
  std::map<std::uint64_t, std::uint64_t> size_;
  std::uint64_t allocated_max_ = 0;
  std::vector<CollapseEvent> events_;
  TimePoint clock_{};
};

}  // namespace ceerbench
