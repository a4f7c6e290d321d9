// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ceerbench/kernel.hpp"

namespace ceerbench {

using json_t = nlohmann::ordered_json;

inline constexpr int kTraceFormatVersion = 1;

/// One step of a construction run. `kind` is one of collapse, param-assign,
/// param-cancel, f-extend, phase-change, restraint; `by` names the actor
/// (a requirement, or "stage" / "f-closure" / "A-injection" bookkeeping).
struct TraceEvent {
  TimePoint time;
  std::string kind;
  std::string by;
  json_t data;

  json_t to_json() const;
  static TraceEvent from_json(const json_t& j);

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Serialized run: config echo (with fixtures embedded, so the document is
/// self-contained), ordered events, and a final summary. Replaying the events
/// reproduces the final state exactly.
struct TraceDocument {
  int format_version = kTraceFormatVersion;
  std::string scenario;  // "t21" | "t39"
  json_t config = json_t::object();
  std::vector<TraceEvent> events;
  json_t summary = json_t::object();

  json_t to_json() const;
  static TraceDocument from_json(const json_t& j);

  void save(const std::string& path) const;
  static TraceDocument load(const std::string& path);

  friend bool operator==(const TraceDocument&, const TraceDocument&) = default;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  std::uint64_t violations = 0;
  std::string witness;  // first concrete violation, empty when passed
};

struct Report {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* check(const std::string& name) const;
  std::string to_text() const;
  json_t to_json() const;
};

json_t time_to_json(TimePoint t);
TimePoint time_from_json(const json_t& j);

}  // namespace ceerbench
